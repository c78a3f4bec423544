#pragma once

#include <complex>
#include <vector>

#include "turbilink/params.hpp"
#include "turbilink/propagation.hpp"

namespace turbilink {

struct LgIndex {
    int l = 0;  // azimuthal index
    int p = 0;  // radial index, >= 0
};

// Conditional signal OAM spectrum for an idler found with l = 0.
struct OamSpectrum {
    int l_max = 0;
    std::vector<double> probabilities;  // P(l) for l = -l_max..l_max
    double tail_mass = 0;               // 1 - sum(P), exact up to quadrature error
    double geometric_tail = 0;          // tail extrapolated from the last three P(l)
    double joint_zero = 0;              // P(l_s = 0, l_i = 0), unconditioned
    double idler_zero = 0;              // P(l_i = 0), the conditioning probability
    double quadrature_error = 0;
    int nodes_u = 0;
    int nodes_v = 0;
    double analysis_waist = 0;
    double z = 0;

    double at(int l) const { return probabilities.at(static_cast<std::size_t>(l + l_max)); }
    double total() const;
};

struct OamOptions {
    int initial_nodes = 256;
    double tolerance = 1e-8;     // max change of any P(l) under grid doubling
    int max_nodes = 1 << 16;
    bool grow_l_max = false;     // double l_max until the tail is below tail_target
    double tail_target = 1e-7;
    int l_max_limit = 4096;
    double tail_limit = 0.01;    // larger tails raise TruncationError
};

// Generalized Laguerre polynomial by the three-term recurrence; p <= 300.
double laguerre_poly(int p, double alpha, double x);

// Normalized Laguerre-Gauss mode at polar point (r, theta).
std::complex<double> lg_mode(const LgIndex& index, double waist, double r, double theta);

// tr[rho U_s(phi_s) U_i(phi_i)] with U rotating the signal or idler by the
// given angle; its Fourier coefficients are the joint OAM probabilities.
class RotationCharacteristic {
public:
    explicit RotationCharacteristic(const PropagatedMoments& m);
    std::complex<double> operator()(double phi_s, double phi_i) const;

private:
    std::complex<double> root_det(double cs, double ss, double ci, double si, double cd,
                                  double sd) const;
    std::complex<double> q_[4][4];
    std::complex<double> root_det_origin_;
};

// P(l_s | l_i = 0) for |l_s| <= l_max. The result does not depend on
// analysis_waist, which is recorded for reference only.
OamSpectrum conditional_oam_distribution(const PropagatedMoments& m, const PhysicalSetup& setup,
                                         int l_max, double analysis_waist,
                                         const OamOptions& options = {});

// Standard deviation of l (units of hbar). Throws ConsistencyError when the
// mean departs from zero by more than 1e-6.
double conditional_oam_uncertainty(const OamSpectrum& spectrum);

}  // namespace turbilink
