#pragma once

#include <cmath>
#include <limits>
#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "turbilink/errors.hpp"

namespace turbilink {

enum class QuadratureMethod {
    mapped_gauss_legendre,  // [0, inf) through r = scale * t / (1 - t)
    periodic_trapezoid,     // [lower, upper) treated as one period
    gauss_legendre,         // finite [lower, upper]
};

struct QuadratureSpec {
    QuadratureMethod method = QuadratureMethod::mapped_gauss_legendre;
    int nodes = 32;
    double scale = 1.0;
    double lower = 0.0;
    double upper = 2.0 * std::numbers::pi;
    double rel_tol = 1e-9;
    double abs_tol = 0.0;
    int max_levels = 8;

    // Throws DomainError on node count < 8, tolerance outside (1e-14, 1e-2),
    // non-positive scale or an empty interval.
    void validate() const;
};

struct QuadratureResult {
    double value = 0;
    double error = 0;
    int nodes = 0;
};

struct NdResult {
    std::complex<double> value;
    double error = 0;
    std::vector<int> nodes;
};

// Gauss-Legendre rule on [-1, 1]. Rules are computed once and cached.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_legendre_rule(int n);

// Nodes and weights of one axis at a given node count.
GaussRule axis_rule(const QuadratureSpec& spec, int nodes);

// Semi-infinite integral of a Gaussian-decaying f. The node count doubles
// until successive estimates agree; the difference is the error estimate.
template <class F>
QuadratureResult integrate_radial(F&& f, const QuadratureSpec& spec) {
    spec.validate();
    auto estimate = [&](int n) {
        const GaussRule& g = gauss_legendre_rule(n);
        double sum = 0.0;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            const double t = 0.5 * (g.nodes[i] + 1.0);
            const double u = 1.0 - t;
            sum += g.weights[i] * f(spec.scale * t / u) * (spec.scale / (u * u));
        }
        return 0.5 * sum;
    };
    int n = spec.nodes;
    double prev = estimate(n);
    double err = 0.0;
    for (int level = 1; level <= spec.max_levels; ++level) {
        n *= 2;
        const double cur = estimate(n);
        err = std::abs(cur - prev);
        if (err <= spec.rel_tol * std::abs(cur) || err <= spec.abs_tol) return {cur, err, n};
        prev = cur;
    }
    throw NumericalError("radial quadrature did not converge", prev, err);
}

// Uniform trapezoid over one period [0, 2 pi), scaled to the true integral.
template <class F>
auto integrate_periodic(F&& f, int nodes) {
    if (nodes < 1) throw DomainError("nodes", "must be >= 1");
    using R = decltype(f(0.0));
    R sum{};
    const double h = 2.0 * std::numbers::pi / nodes;
    for (int j = 0; j < nodes; ++j) sum += f(h * j);
    return sum * h;
}

// Adaptive Gauss-Kronrod (15/31) on a finite interval. rel_tol must be at
// least 1e-10; tighter requests chase rounding noise and recurse without end.
template <class F>
QuadratureResult integrate_interval(F&& f, double a, double b, double rel_tol,
                                    double abs_tol = 0.0, unsigned max_depth = 15) {
    if (!(rel_tol >= 1e-10)) throw DomainError("rel_tol", "must be >= 1e-10");
    double err = 0.0;
    double l1 = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, max_depth, rel_tol, &err, &l1);
    // below ~100 ulp of the L1 norm the estimate is rounding noise
    const double floor = 128.0 * std::numeric_limits<double>::epsilon() * l1;
    if (!std::isfinite(v) || (err > rel_tol * std::abs(v) && err > abs_tol && err > floor))
        throw NumericalError("adaptive interval quadrature did not converge", v, err);
    return {v, err, 0};
}

using NdIntegrand = std::function<std::complex<double>(std::span<const double>)>;

// Tensor-product rule, one QuadratureSpec per axis (at most 6). Each level tries
// doubling every axis separately and keeps the doublings that moved the
// result; the error estimate is the sum of those per-axis changes. The
// outermost axis is split into fixed blocks so the summation order is the
// same for any thread count.
NdResult integrate_nd(const NdIntegrand& f, const std::vector<QuadratureSpec>& axes,
                      int threads = 1);

// Exponent E of an integrand exp(E) that is at most quadratic in the
// integration variables.
using QuadraticExponent = std::function<std::complex<double>(std::span<const double>)>;

// Same rule and refinement as integrate_nd for exp(E). E is sampled only on
// the coordinate axes and planes and the grid sum is assembled from those
// factor tables; ConsistencyError if spot checks show E is not quadratic.
NdResult integrate_nd_gaussian(const QuadraticExponent& exponent,
                               const std::vector<QuadratureSpec>& axes, int threads = 1);

// Gauss-Hermite rule for weight exp(-x^2) (Golub-Welsch).
GaussRule gauss_hermite_rule(int n);

}  // namespace turbilink
