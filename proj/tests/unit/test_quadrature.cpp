#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "turbilink/errors.hpp"
#include "turbilink/quadrature.hpp"

using namespace turbilink;

namespace {

QuadratureSpec box(double lo, double hi, int nodes = 16) {
    QuadratureSpec q;
    q.method = QuadratureMethod::gauss_legendre;
    q.lower = lo;
    q.upper = hi;
    q.nodes = nodes;
    q.rel_tol = 1e-12;
    return q;
}

}  // namespace

TEST_SUITE("quadrature") {
    TEST_CASE("shifted Gaussian on the half line") {
        QuadratureSpec spec;
        spec.scale = 4.0;
        spec.rel_tol = 1e-13;
        const QuadratureResult r =
            integrate_radial([](double x) { return std::exp(-(x - 3.0) * (x - 3.0)); }, spec);
        CHECK(test::rel(r.value, 1.7724342737122792) < 1e-13);
        CHECK(r.error <= 1e-13 * r.value);
    }

    TEST_CASE("periodic trapezoid of exp(cos)") {
        const double v = integrate_periodic([](double t) { return std::exp(std::cos(t)); }, 32);
        CHECK(test::rel(v, 7.9549265210128453) < 1e-14);
    }

    TEST_CASE("Gauss-Legendre exactness") {
        const GaussRule& g = gauss_legendre_rule(5);
        double w = 0.0, x8 = 0.0, x9 = 0.0;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            w += g.weights[i];
            x8 += g.weights[i] * std::pow(g.nodes[i], 8);
            x9 += g.weights[i] * std::pow(g.nodes[i], 9);
        }
        CHECK(g.nodes.size() == 5);
        CHECK(w == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(x8 == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
        CHECK(std::abs(x9) < 1e-15);
        for (std::size_t i = 1; i < g.nodes.size(); ++i) CHECK(g.nodes[i] > g.nodes[i - 1]);
    }

    TEST_CASE("Gauss-Hermite moments") {
        const GaussRule g = gauss_hermite_rule(20);
        double m0 = 0.0, m2 = 0.0, m4 = 0.0;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            m0 += g.weights[i];
            m2 += g.weights[i] * g.nodes[i] * g.nodes[i];
            m4 += g.weights[i] * std::pow(g.nodes[i], 4);
        }
        const double sp = std::sqrt(std::numbers::pi);
        CHECK(m0 == doctest::Approx(sp).epsilon(1e-13));
        CHECK(m2 == doctest::Approx(sp / 2).epsilon(1e-13));
        CHECK(m4 == doctest::Approx(3 * sp / 4).epsilon(1e-13));
    }

    TEST_CASE("adaptive interval rule") {
        CHECK(integrate_interval([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-10).value ==
              doctest::Approx(2.0).epsilon(1e-13));
        // sharply peaked integrand
        const double eps = 1e-4;
        const double v = integrate_interval([&](double x) { return eps / (x * x + eps * eps); }, -1.0, 1.0, 1e-10).value;
        CHECK(v == doctest::Approx(2.0 * std::atan(1.0 / eps)).epsilon(1e-10));
        CHECK_THROWS_AS(integrate_interval([](double x) { return x; }, 0.0, 1.0, 1e-12), DomainError);
    }

    TEST_CASE("tensor rule converges and is thread-count independent") {
        auto f = [](std::span<const double> v) {
            return std::complex<double>(std::exp(-v[0] * v[0] - 2 * v[1] * v[1] - 0.5 * v[2] * v[2]),
                                        0.0);
        };
        const std::vector<QuadratureSpec> axes{box(-8, 8), box(-8, 8), box(-10, 10)};
        const NdResult one = integrate_nd(f, axes, 1);
        const NdResult three = integrate_nd(f, axes, 3);
        const double exact = std::pow(std::numbers::pi, 1.5) / std::sqrt(2.0 * 0.5);
        CHECK(test::rel(one.value.real(), exact) < 1e-12);
        CHECK(one.value == three.value);
        CHECK(one.nodes == three.nodes);
    }

    TEST_CASE("quadratic-exponent tensor rule agrees with the generic one") {
        auto e = [](std::span<const double> v) {
            return std::complex<double>(-v[0] * v[0] - v[1] * v[1] - 0.3 * v[0] * v[1] - v[2] * v[2] + 0.1 * v[1] * v[2],
                                        2.0 * v[0] * v[2] - v[1] * v[1]);
        };
        const std::vector<QuadratureSpec> axes{box(-7, 7, 24), box(-7, 7, 24), box(-7, 7, 24)};
        const NdResult a = integrate_nd([&](std::span<const double> v) { return std::exp(e(v)); }, axes);
        const NdResult b = integrate_nd_gaussian(e, axes);
        CHECK(test::rel(a.value, b.value) < 1e-11);
        CHECK(integrate_nd_gaussian(e, axes, 2).value == b.value);
        // in two variables any function splits into singles and pairs, so the
        // check needs a genuine three-variable term
        auto cubic = [](std::span<const double> v) {
            return std::complex<double>(-v[0] * v[0] - v[1] * v[1] - v[2] * v[2] + 0.5 * v[0] * v[1] * v[2], 0.0);
        };
        CHECK_THROWS_AS(integrate_nd_gaussian(cubic, {box(-3, 3), box(-3, 3), box(-3, 3)}), ConsistencyError);
    }

    TEST_CASE("non-convergence reports the best value") {
        QuadratureSpec spec;
        spec.nodes = 8;
        spec.max_levels = 1;
        spec.scale = 1e3;  // far too wide for a unit Gaussian
        spec.rel_tol = 1e-12;
        try {
            integrate_radial([](double x) { return std::exp(-x * x); }, spec);
            FAIL("expected NumericalError");
        } catch (const NumericalError& e) {
            CHECK(std::isfinite(e.best_value()));
            CHECK(e.error_estimate() > 0.0);
        }
    }

    TEST_CASE("quadrature settings are validated") {
        QuadratureSpec q;
        q.nodes = 4;
        CHECK_THROWS_AS(q.validate(), DomainError);
        q.nodes = 16;
        q.rel_tol = 0.5;
        CHECK_THROWS_AS(q.validate(), DomainError);
        q.rel_tol = 1e-9;
        q.scale = -1.0;
        CHECK_THROWS_AS(q.validate(), DomainError);
        q.method = QuadratureMethod::gauss_legendre;
        q.lower = 1.0;
        q.upper = 1.0;
        CHECK_THROWS_AS(q.validate(), DomainError);
    }
}
