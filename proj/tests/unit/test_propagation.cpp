#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "turbilink/errors.hpp"
#include "turbilink/propagation.hpp"
#include "turbilink/quadrature.hpp"

using namespace turbilink;

namespace {

BiphotonCoords sample_coords(const PropagatedMoments& m) {
    BiphotonCoords c;
    c.signal1 = {0.3 * m.w, -0.4 * m.sigma};
    c.idler1 = {-0.2 * m.w, 0.1 * m.sigma};
    c.signal2 = {0.5 * m.sigma, 0.2 * m.w};
    c.idler2 = {0.1 * m.w, -0.6 * m.sigma};
    return c;
}

}  // namespace

TEST_SUITE("propagation") {
    TEST_CASE("free-space moments follow Gaussian beam spreading") {
        const PhysicalSetup s = test::reference_setup();
        const double k = s.wavenumber();
        for (double z : {0.0, 1.0, 11.0, 250.0, 1000.0, 5000.0, 10000.0}) {
            const PropagatedMoments m = propagated_moments(s, TurbulenceChannel(0.0), z);
            for (auto [got, a, r2] : {std::tuple{m.w, s.collimated_sum_waist(), m.r_plus_sq},
                                      std::tuple{m.sigma, s.collimated_diff_waist(), m.r_minus_sq}}) {
                const double zr = k * a * a;
                CHECK(test::rel(got, a * std::sqrt(1.0 + z * z / (zr * zr))) < 1e-13);
                if (z == 0.0)
                    CHECK(r2.is_infinite());
                else
                    CHECK(test::rel(r2.value(), (zr * zr + z * z) / z) < 1e-13);
            }
            CHECK(m.c_plus.is_infinite());
            CHECK(m.c_minus.is_infinite());
            CHECK(m.is_free_space);
        }
    }

    TEST_CASE("golden moments") {
        const auto& f = test::fixture("moments");
        const double tol = test::tolerance("moments");
        const PhysicalSetup s = test::reference_setup();
        const PropagatedMoments m =
            propagated_moments(s, TurbulenceChannel(f["cn2"].get<double>()), f["z_m"].get<double>());
        CHECK(test::rel(m.w, f["w_m"].get<double>()) < tol);
        CHECK(test::rel(m.sigma, f["sigma_m"].get<double>()) < tol);
        CHECK(test::rel(m.r_plus_sq.value(), f["r_plus_sq_m"].get<double>()) < tol);
        CHECK(test::rel(m.r_minus_sq.value(), f["r_minus_sq_m"].get<double>()) < tol);
        CHECK(test::rel(m.c_plus.value(), f["c_plus_m"].get<double>()) < tol);
        CHECK(test::rel(m.c_minus.value(), f["c_minus_m"].get<double>()) < tol);
        CHECK(f["check_brute_force_max_rel_error"].get<double>() < 1e-6);
    }

    TEST_CASE("golden kernel probe from brute force") {
        const auto& f = test::fixture("kernel_probe");
        const auto& x = f["coords_m"];
        BiphotonCoords c;
        c.signal1 = {x[0].get<double>(), x[1].get<double>()};
        c.idler1 = {x[2].get<double>(), x[3].get<double>()};
        c.signal2 = {x[4].get<double>(), x[5].get<double>()};
        c.idler2 = {x[6].get<double>(), x[7].get<double>()};
        const PropagatedMoments m = propagated_moments(test::reference_setup(),
                                                       TurbulenceChannel(f["cn2"].get<double>()), f["z_m"].get<double>());
        const std::complex<double> expected(f["re"].get<double>(), f["im"].get<double>());
        CHECK(test::rel(cross_spectral_density(m, c), expected) < 1e-6);
    }

    TEST_CASE("turbulence leaves the collimated plane unchanged") {
        const PhysicalSetup s = test::reference_setup();
        const PropagatedMoments m = propagated_moments(s, TurbulenceChannel(1e-15), 0.0);
        CHECK(m.w == doctest::Approx(s.collimated_sum_waist()).epsilon(1e-15));
        CHECK(m.sigma == doctest::Approx(s.collimated_diff_waist()).epsilon(1e-15));
        CHECK(m.c_plus.is_infinite());
    }

    TEST_CASE("kernel is Hermitian and matches the position density on the diagonal") {
        const PhysicalSetup s = test::reference_setup();
        for (double z : {0.0, 200.0, 2000.0}) {
            const PropagatedMoments m = propagated_moments(s, TurbulenceChannel(1e-16), z);
            const BiphotonCoords c = sample_coords(m);
            CHECK(test::rel(cross_spectral_density(m, c), std::conj(cross_spectral_density(m, c.swapped()))) < 1e-14);
            BiphotonCoords d{c.signal1, c.idler1, c.signal1, c.idler1};
            const std::complex<double> w = cross_spectral_density(m, d);
            CHECK(std::abs(w.imag()) <= 1e-14 * std::abs(w.real()));
            const double diag = std::exp(-(c.signal1 + c.idler1).squaredNorm() / (2 * m.w * m.w) -
                                         (c.signal1 - c.idler1).squaredNorm() / (2 * m.sigma * m.sigma));
            CHECK(test::rel(w.real(), position_density_normalization(m) * diag) < 1e-13);
        }
    }

    TEST_CASE("unit trace") {
        const PhysicalSetup s = test::reference_setup();
        const PropagatedMoments m = propagated_moments(s, TurbulenceChannel(1e-15), 1500.0);
        // one axis of the diagonal over (signal, idler); the trace is its square
        auto box = [](double half) {
            QuadratureSpec q;
            q.method = QuadratureMethod::gauss_legendre;
            q.lower = -half;
            q.upper = half;
            q.nodes = 64;
            q.rel_tol = 1e-12;
            return q;
        };
        const double half = 8.0 * std::max(m.w, m.sigma);
        const NdResult r = integrate_nd(
            [&](std::span<const double> v) { return axis_kernel(m, v[0], v[1], v[0], v[1]); }, {box(half), box(half)});
        CHECK(std::norm(r.value) == doctest::Approx(1.0).epsilon(1e-10));
    }

    TEST_CASE("quadratic form reproduces the axis kernel") {
        const PhysicalSetup s = test::reference_setup();
        const PropagatedMoments m = propagated_moments(s, TurbulenceChannel(1e-16), 700.0);
        const Eigen::Matrix4cd q = axis_quadratic_form(m);
        CHECK((q - q.transpose()).norm() <= 1e-12 * q.norm());
        auto k = [&](double a, double b, double c, double d) {
            Eigen::Vector4cd u(a, b, c, d);
            return std::exp(-(u.transpose() * q * u)(0));
        };
        const double u1[4] = {0.2 * m.w, -0.1 * m.sigma, 0.3 * m.sigma, 0.5 * m.w};
        const double u2[4] = {-0.4 * m.sigma, 0.2 * m.w, 0.1 * m.w, -0.3 * m.sigma};
        const std::complex<double> ratio1 = axis_kernel(m, u1[0], u1[1], u1[2], u1[3]) / k(u1[0], u1[1], u1[2], u1[3]);
        const std::complex<double> ratio2 = axis_kernel(m, u2[0], u2[1], u2[2], u2[3]) / k(u2[0], u2[1], u2[2], u2[3]);
        CHECK(test::rel(ratio1, ratio2) < 1e-12);
        CHECK(test::rel(ratio1, axis_kernel(m, 0, 0, 0, 0)) < 1e-12);
    }

    TEST_CASE("sum and difference coordinates round trip") {
        const Vec2 s(1e-3, -2e-3), i(3e-3, 5e-4);
        const auto [p, q] = to_sum_diff(s, i);
        CHECK(p.x() == doctest::Approx((s.x() + i.x()) / std::sqrt(2.0)));
        const auto [s2, i2] = from_sum_diff(p, q);
        CHECK((s2 - s).norm() < 1e-18);
        CHECK((i2 - i).norm() < 1e-18);
    }

    TEST_CASE("negative distance is rejected") {
        CHECK_THROWS_AS(propagated_moments(test::reference_setup(), TurbulenceChannel(0.0), -1.0), DomainError);
    }
}
