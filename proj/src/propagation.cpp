#include "turbilink/propagation.hpp"

#include <cmath>
#include <numbers>

#include "turbilink/errors.hpp"

namespace turbilink {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

struct ModeResult {
    double width_sq;
    ExtendedReal curvature_sq;
    ExtendedReal coupling;
};

// Moments of a single Gaussian coordinate of input width a after distance z.
// An infinite rho0 selects the free-space expressions.
ModeResult propagate_mode(double a, double k, double z, const ExtendedReal& rho0) {
    const double a2 = a * a;
    const double ka2 = k * a2;
    if (rho0.is_infinite()) {
        ModeResult r{a2 * (1.0 + (z * z) / (ka2 * ka2)), ExtendedReal::infinite(),
                     ExtendedReal::infinite()};
        if (z > 0.0) r.curvature_sq = ExtendedReal::finite((ka2 * ka2 + z * z) / z);
        return r;
    }
    const double eps = 1.0 / (rho0.value() * rho0.value());
    const double z2 = z * z;
    const double width_sq = a2 + z2 / (k * k) * (1.0 / a2 + 4.0 * eps);
    const double curv = (ka2 * ka2 + (1.0 + 4.0 * a2 * eps) * z2) / ((1.0 + 6.0 * a2 * eps) * z);
    const double inv_c2 = eps * (3.0 * ka2 * ka2 + (1.0 + 3.0 * a2 * eps) * z2) /
                          (ka2 * ka2 + (1.0 + 4.0 * a2 * eps) * z2);
    return {width_sq, ExtendedReal::finite(curv), ExtendedReal::finite(1.0 / std::sqrt(inv_c2))};
}

double phase_rate(const ExtendedReal& curvature_sq, double k) {
    return curvature_sq.is_infinite() ? 0.0 : k / (2.0 * curvature_sq.value());
}

double inv_sq(const ExtendedReal& v) {
    return v.is_infinite() ? 0.0 : 1.0 / (v.value() * v.value());
}

std::complex<double> mode_factor(const ModeParameters& p, double k, double a1, double a2) {
    const double g = phase_rate(p.curvature_sq, k);
    const double d = a2 - a1;
    const std::complex<double> e(-(a1 * a1 + a2 * a2) / (2.0 * p.width_sq) - p.inv_coupling_sq * d * d,
                                 g * (a2 * a2 - a1 * a1));
    return std::exp(e) / std::sqrt(std::numbers::pi * p.width_sq);
}

}  // namespace

ModeParameters PropagatedMoments::sum_mode() const {
    return {w * w, r_plus_sq, inv_sq(c_plus)};
}

ModeParameters PropagatedMoments::diff_mode() const {
    return {sigma * sigma, r_minus_sq, inv_sq(c_minus)};
}

PropagatedMoments propagated_moments(const PhysicalSetup& setup, const TurbulenceChannel& channel,
                                     double z) {
    if (!std::isfinite(z) || z < 0.0) throw DomainError("z", "must be finite and >= 0");
    const ExtendedReal rho0 = coherence_length(channel, setup, z);
    const double k = setup.wavenumber();
    const ModeResult plus = propagate_mode(setup.collimated_sum_waist(), k, z, rho0);
    const ModeResult minus = propagate_mode(setup.collimated_diff_waist(), k, z, rho0);

    PropagatedMoments m;
    m.z = z;
    m.wavenumber = k;
    m.w = std::sqrt(plus.width_sq);
    m.sigma = std::sqrt(minus.width_sq);
    m.r_plus_sq = plus.curvature_sq;
    m.r_minus_sq = minus.curvature_sq;
    m.c_plus = plus.coupling;
    m.c_minus = minus.coupling;
    m.is_free_space = channel.free_space();
    return m;
}

std::pair<Vec2, Vec2> to_sum_diff(const Vec2& signal, const Vec2& idler) {
    return {(signal + idler) * kInvSqrt2, (signal - idler) * kInvSqrt2};
}

std::pair<Vec2, Vec2> from_sum_diff(const Vec2& sum, const Vec2& diff) {
    return {(sum + diff) * kInvSqrt2, (sum - diff) * kInvSqrt2};
}

Vec2 BiphotonCoords::sum1() const { return (signal1 + idler1) * kInvSqrt2; }
Vec2 BiphotonCoords::diff1() const { return (signal1 - idler1) * kInvSqrt2; }
Vec2 BiphotonCoords::sum2() const { return (signal2 + idler2) * kInvSqrt2; }
Vec2 BiphotonCoords::diff2() const { return (signal2 - idler2) * kInvSqrt2; }

std::complex<double> axis_kernel(const PropagatedMoments& m, double x1s, double x1i, double x2s,
                                 double x2i) {
    const double k = m.wavenumber;
    return mode_factor(m.sum_mode(), k, (x1s + x1i) * kInvSqrt2, (x2s + x2i) * kInvSqrt2) *
           mode_factor(m.diff_mode(), k, (x1s - x1i) * kInvSqrt2, (x2s - x2i) * kInvSqrt2);
}

std::complex<double> cross_spectral_density(const PropagatedMoments& m, const BiphotonCoords& c) {
    return axis_kernel(m, c.signal1.x(), c.idler1.x(), c.signal2.x(), c.idler2.x()) *
           axis_kernel(m, c.signal1.y(), c.idler1.y(), c.signal2.y(), c.idler2.y());
}

Eigen::Matrix4cd axis_quadratic_form(const PropagatedMoments& m) {
    Eigen::Matrix4cd q = Eigen::Matrix4cd::Zero();
    const ModeParameters modes[2] = {m.sum_mode(), m.diff_mode()};
    const double sign[2] = {1.0, -1.0};
    for (int j = 0; j < 2; ++j) {
        const ModeParameters& p = modes[j];
        const double g = phase_rate(p.curvature_sq, m.wavenumber);
        const double h = p.inv_coupling_sq;
        Eigen::Matrix2cd b;
        b(0, 0) = {1.0 / (2.0 * p.width_sq) + h, g};
        b(1, 1) = {1.0 / (2.0 * p.width_sq) + h, -g};
        b(0, 1) = b(1, 0) = -h;
        // mode coordinate of argument 1 and argument 2 in terms of u
        Eigen::Matrix<double, 2, 4> t = Eigen::Matrix<double, 2, 4>::Zero();
        t(0, 0) = kInvSqrt2;
        t(0, 1) = sign[j] * kInvSqrt2;
        t(1, 2) = kInvSqrt2;
        t(1, 3) = sign[j] * kInvSqrt2;
        q += t.transpose().cast<std::complex<double>>() * b * t.cast<std::complex<double>>();
    }
    return q;
}

double position_density_normalization(const PropagatedMoments& m) {
    const double a = std::numbers::pi * m.w * m.sigma;
    return 1.0 / (a * a);
}

}  // namespace turbilink
