#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "turbilink/params.hpp"
#include "turbilink/propagation.hpp"
#include "turbilink/turbulence.hpp"

// Independent numerical checks of the closed forms used by the main path.
// Grids and mappings here are deliberately different from the main path.
namespace turbilink::oracle {

// Recorded in fixture metadata; bump when an oracle's numerics change.
inline constexpr int kVersion = 1;

struct BruteForceOptions {
    int nodes = 40;      // Gauss-Legendre nodes per source-plane axis
    double box = 8.0;    // half-width of each box in input widths
    double rel_tol = 1e-9;
    int max_levels = 2;
    // Use rotated contours when both Fresnel numbers k a^2 / z exceed this.
    double contour_fresnel = 50.0;
    int threads = 1;
};

// Per-axis kernel from the four-fold source-plane integral of the
// turbulence-averaged Fresnel propagation of the collimated input state.
std::complex<double> brute_force_axis(const PhysicalSetup& setup, const TurbulenceChannel& channel,
                                      double z, double x1s, double x1i, double x2s, double x2i,
                                      const BruteForceOptions& options = {});

// Full kernel: product of the x- and y-axis integrals.
std::complex<double> brute_force_w2(const PhysicalSetup& setup, const TurbulenceChannel& channel,
                                    double z, const BiphotonCoords& coords,
                                    const BruteForceOptions& options = {});

// Input kernel at the collimated plane, per axis.
double input_axis_kernel(const PhysicalSetup& setup, double x1s, double x1i, double x2s, double x2i);

struct IdentityReport {
    int l = 0;
    double waist = 0;
    double collapsed = 0;            // delta-function side
    std::vector<double> truncated;   // partial sums, index p_max
    std::vector<double> rel_error;   // |truncated - collapsed| / collapsed
};

using RadialFunction = std::function<double(double)>;

// rho^(2|l|+1) [exp(-1.5 rho^2/w^2) + exp(-12 rho^2/w^2)]
RadialFunction matched_test_function(int l, double waist);

// Integrates both sides of the radial Laguerre completeness relation for
// index l against g(rho1) g(rho2), for every truncation 0..p_max.
IdentityReport verify_identity(int l, double waist, const RadialFunction& g, int p_max,
                               int nodes = 2000);

struct FullOamOptions {
    double analysis_waist = 0;  // 0 selects sqrt((w^2 + sigma^2)/2) at z
    int nodes = 32;             // Gauss-Hermite nodes per axis, at most 32
    bool compensate_curvature = true;
};

// Joint P(l_s, l_i = 0) from explicit Laguerre-Gauss overlaps summed over
// radial indices up to p_truncation (at most 40). The overlaps are built
// from per-axis Hermite-Gauss matrix elements of the kernel. With curvature
// compensation the basis carries a quadratic phase, which leaves each OAM
// subspace unchanged.
double full_oam_check(const PhysicalSetup& setup, const TurbulenceChannel& channel, double z,
                      int l_s, int p_truncation, const FullOamOptions& options = {});

// tr(rho^2) by 4-D quadrature of |W|^2 per axis.
double trace_purity_check(const PhysicalSetup& setup, const TurbulenceChannel& channel, double z,
                          int nodes = 24);

// Joint P(l, l_i = 0) for l = 0..l_max by radial quadrature over the two
// radii and trapezoid sums over three of the four angles (the fourth is
// a global rotation). No use of the rotation-characteristic shortcut.
std::vector<double> literal_oam_joint(const PropagatedMoments& m, int l_max, int radial_nodes,
                                      int angle_nodes, int threads = 1);

// Closed form of the radially traced angle density as a function of
// kappa = f_c cos(theta_s - theta_i), up to the factor 1/(4 a^2).
double angle_pdf_closed_form(double kappa);

// Closed-form counterpart of statistics::joint_angle_pdf.
double joint_angle_pdf_reference(const PropagatedMoments& m, double theta_s, double theta_i);

struct AngleStatsReference {
    double delta_theta = 0;       // standard deviation within the centered window
    double boundary_density = 0;  // normalized density at the window edge
};

// Window statistics of the closed-form angle density by tanh-sinh quadrature.
AngleStatsReference angle_stats_reference(const PropagatedMoments& m);

struct FreeSpaceMoments {
    double w = 0;
    double sigma = 0;
    ExtendedReal r_plus_sq;
    ExtendedReal r_minus_sq;
};

// Gaussian-beam spreading of the two collimated widths without turbulence.
FreeSpaceMoments free_space_reference(const PhysicalSetup& setup, double z);

// Explicit finite series for the generalized Laguerre polynomial, in long
// double. Cancellation limits it to small p * x.
double laguerre_series(int p, double alpha, double x);

}  // namespace turbilink::oracle
