#pragma once

#include <vector>

#include "turbilink/propagation.hpp"

namespace turbilink {

// Conditional signal-angle distribution for an idler detected at angle 0.
struct AngleDistribution {
    std::vector<double> theta;    // grid over [center - pi, center + pi] (rad)
    std::vector<double> density;  // normalized conditional density (1/rad)
    double window_center = 0;     // circular mean: 0 or pi
    double boundary_density = 0;  // density at center +- pi (1/rad)
    double circular_std = 0;      // standard deviation inside the window (rad)
};

// tr(rho^2). Exactly 1 without turbulence.
double purity(const PropagatedMoments& m);

// Normalized signal/idler position correlation (w^2 - sigma^2)/(w^2 + sigma^2).
double spatial_correlation(const PropagatedMoments& m);

// Unnormalized coincidence density exp[-|s+i|^2/2w^2 - |s-i|^2/2sigma^2].
double joint_position_pdf(const PropagatedMoments& m, const Vec2& signal, const Vec2& idler);

// Radially traced joint angle density, unnormalized, by numerical
// quadrature. Depends on theta_s - theta_i only.
double joint_angle_pdf(const PropagatedMoments& m, double theta_s, double theta_i,
                       double rel_tol = 1e-10);

// grid_size >= 64 points including both window edges; rel_tol >= 1e-9
// (the density itself is evaluated ten times tighter).
AngleDistribution conditional_angle_stats(const PropagatedMoments& m, int grid_size = 256,
                                          double rel_tol = 1e-9);

}  // namespace turbilink
