#include "turbilink/statistics.hpp"

#include <cmath>
#include <numbers>

#include "turbilink/errors.hpp"
#include "turbilink/quadrature.hpp"

namespace turbilink {

namespace {

constexpr double kPi = std::numbers::pi;

// exp[-a (r^2 + s^2) - 2 b r s cos(dtheta)]
struct PolarExponent {
    double a;
    double b;
};

PolarExponent polar_exponent(const PropagatedMoments& m) {
    const double iw = 1.0 / (2.0 * m.w * m.w);
    const double is = 1.0 / (2.0 * m.sigma * m.sigma);
    return {iw + is, iw - is};
}

}  // namespace

double purity(const PropagatedMoments& m) {
    const ModeParameters p = m.sum_mode();
    const ModeParameters q = m.diff_mode();
    return 1.0 / ((1.0 + 4.0 * p.width_sq * p.inv_coupling_sq) *
                  (1.0 + 4.0 * q.width_sq * q.inv_coupling_sq));
}

double spatial_correlation(const PropagatedMoments& m) {
    const double w2 = m.w * m.w;
    const double s2 = m.sigma * m.sigma;
    return 1.0 - 2.0 * s2 / (s2 + w2);
}

double joint_position_pdf(const PropagatedMoments& m, const Vec2& signal, const Vec2& idler) {
    return std::exp(-(signal + idler).squaredNorm() / (2.0 * m.w * m.w) -
                    (signal - idler).squaredNorm() / (2.0 * m.sigma * m.sigma));
}

double joint_angle_pdf(const PropagatedMoments& m, double theta_s, double theta_i,
                       double rel_tol) {
    const PolarExponent e = polar_exponent(m);
    const double c = std::cos(theta_s - theta_i);
    // r = R cos(phi), s = R sin(phi); the integrand is symmetric about phi = pi/4
    auto angular = [&](double phi) {
        const double decay = e.a + e.b * c * std::sin(2.0 * phi);
        QuadratureSpec spec;
        spec.nodes = 16;
        spec.scale = 2.0 / std::sqrt(decay);
        spec.rel_tol = 0.1 * rel_tol;
        spec.max_levels = 6;
        const double trig = std::cos(phi) * std::sin(phi);
        return trig * integrate_radial(
                          [&](double r) { return r * r * r * std::exp(-decay * r * r); }, spec)
                          .value;
    };
    return 2.0 * integrate_interval(angular, 0.0, 0.25 * kPi, rel_tol).value;
}

AngleDistribution conditional_angle_stats(const PropagatedMoments& m, int grid_size,
                                          double rel_tol) {
    if (grid_size < 64) throw DomainError("grid_size", "must be >= 64");
    if (!(rel_tol >= 1e-9)) throw DomainError("rel_tol", "must be >= 1e-9");
    AngleDistribution out;
    out.window_center = spatial_correlation(m) < 0.0 ? kPi : 0.0;
    const double c = out.window_center;
    auto pdf = [&](double t) { return joint_angle_pdf(m, c + t, 0.0, 0.1 * rel_tol); };

    // symmetric about the center: integrate one half and double
    const double norm = 2.0 * integrate_interval(pdf, 0.0, kPi, rel_tol).value;
    const double second = 2.0 * integrate_interval([&](double t) { return t * t * pdf(t); }, 0.0,
                                                   kPi, rel_tol)
                                    .value;
    out.circular_std = std::sqrt(second / norm);
    out.boundary_density = pdf(kPi) / norm;

    out.theta.resize(grid_size);
    out.density.resize(grid_size);
    for (int j = 0; j < grid_size; ++j) {
        const double t = -kPi + 2.0 * kPi * j / (grid_size - 1);
        out.theta[j] = c + t;
        out.density[j] = pdf(t) / norm;
    }
    return out;
}

}  // namespace turbilink
