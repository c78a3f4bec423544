#pragma once

#include <complex>
#include <utility>

#include <Eigen/Core>

#include "turbilink/extended_real.hpp"
#include "turbilink/params.hpp"
#include "turbilink/turbulence.hpp"

namespace turbilink {

// Parameters of one decoupled coordinate (sum or difference) of the
// propagated kernel, in the form the kernel consumes them.
struct ModeParameters {
    double width_sq;            // w^2 or sigma^2 (m^2)
    ExtendedReal curvature_sq;  // R^2; enters the phase as k/(2 R^2)
    double inv_coupling_sq;     // 1/C^2, zero without turbulence
};

// Closed-form moments of the propagated cross-spectral density at one
// distance. R_plus_sq/R_minus_sq are stored as the squared divisor itself.
struct PropagatedMoments {
    double z = 0;
    double wavenumber = 0;
    double w = 0;      // sum-coordinate width
    double sigma = 0;  // difference-coordinate width
    ExtendedReal r_plus_sq = ExtendedReal::infinite();
    ExtendedReal r_minus_sq = ExtendedReal::infinite();
    ExtendedReal c_plus = ExtendedReal::infinite();
    ExtendedReal c_minus = ExtendedReal::infinite();
    bool is_free_space = true;

    ModeParameters sum_mode() const;
    ModeParameters diff_mode() const;
};

PropagatedMoments propagated_moments(const PhysicalSetup& setup, const TurbulenceChannel& channel,
                                     double z);

using Vec2 = Eigen::Vector2d;

// Orthogonal sum/difference transform, (s + i)/sqrt2 and (s - i)/sqrt2.
std::pair<Vec2, Vec2> to_sum_diff(const Vec2& signal, const Vec2& idler);
std::pair<Vec2, Vec2> from_sum_diff(const Vec2& sum, const Vec2& diff);

// Two-photon positions for the two arguments of the kernel. Index 2 is the
// ket side: W(1; 2) = <2|rho|1>.
struct BiphotonCoords {
    Vec2 signal1{0, 0};
    Vec2 idler1{0, 0};
    Vec2 signal2{0, 0};
    Vec2 idler2{0, 0};

    Vec2 sum1() const;
    Vec2 diff1() const;
    Vec2 sum2() const;
    Vec2 diff2() const;
    BiphotonCoords swapped() const { return {signal2, idler2, signal1, idler1}; }
};

// Trace-normalized kernel W(1; 2) (units m^-4). On the diagonal it equals
// position_density_normalization() * joint_position_pdf().
std::complex<double> cross_spectral_density(const PropagatedMoments& m, const BiphotonCoords& c);

// One Cartesian axis of the kernel; the full kernel is the product of the
// x-axis and y-axis factors.
std::complex<double> axis_kernel(const PropagatedMoments& m, double x1s, double x1i, double x2s,
                                 double x2i);

// Complex symmetric Q with axis_kernel proportional to exp(-u^T Q u),
// u = (x1s, x1i, x2s, x2i).
Eigen::Matrix4cd axis_quadratic_form(const PropagatedMoments& m);

double position_density_normalization(const PropagatedMoments& m);

}  // namespace turbilink
