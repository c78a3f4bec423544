#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "turbilink/errors.hpp"
#include "turbilink/oam.hpp"
#include "turbilink/oracle.hpp"
#include "turbilink/statistics.hpp"

using namespace turbilink;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("oracle") {
    TEST_CASE("free-space reference at the collimated plane and far away") {
        const PhysicalSetup s = test::reference_setup();
        const auto at0 = oracle::free_space_reference(s, 0.0);
        CHECK(at0.w == s.collimated_sum_waist());
        CHECK(at0.sigma == s.collimated_diff_waist());
        CHECK(at0.r_plus_sq.is_infinite());
        const auto far = oracle::free_space_reference(s, 1e5);
        const double zr = s.wavenumber() * s.collimated_diff_waist() * s.collimated_diff_waist();
        CHECK(far.sigma == doctest::Approx(s.collimated_diff_waist() * std::hypot(1.0, 1e5 / zr)).epsilon(1e-14));
    }

    TEST_CASE("brute-force kernel in free space") {
        const PhysicalSetup s = test::reference_setup();
        const TurbulenceChannel ch(0.0);
        const PropagatedMoments m = propagated_moments(s, ch, 300.0);
        // offsets on the scale of the sum and difference widths
        const auto [s1, i1] = from_sum_diff(Vec2(0.2 * m.w, -0.4 * m.w), Vec2(0.3 * m.sigma, 0.1 * m.sigma));
        const auto [s2, i2] = from_sum_diff(Vec2(-0.5 * m.w, 0.1 * m.w), Vec2(-0.2 * m.sigma, 0.6 * m.sigma));
        const BiphotonCoords c{s1, i1, s2, i2};
        CHECK(test::rel(oracle::brute_force_w2(s, ch, 300.0, c), cross_spectral_density(m, c)) < 1e-8);
    }

    TEST_CASE("input kernel is the propagated kernel at distance zero") {
        const PhysicalSetup s = test::reference_setup();
        const PropagatedMoments m = propagated_moments(s, TurbulenceChannel(0.0), 0.0);
        const double a = s.collimated_sum_waist(), b = s.collimated_diff_waist();
        const double ref = oracle::input_axis_kernel(s, 0.0, 0.0, 0.0, 0.0) / std::real(axis_kernel(m, 0, 0, 0, 0));
        const double pts[3][4] = {{0.3 * a, 0.1 * a, -0.2 * a, 0.4 * b}, {b, -b, 0.5 * b, 0.2 * a}, {0.0, a, -a, 0.0}};
        for (const auto& p : pts) {
            const auto k = axis_kernel(m, p[0], p[1], p[2], p[3]);
            CHECK(std::abs(k.imag()) < 1e-12 * std::abs(k));
            CHECK(oracle::input_axis_kernel(s, p[0], p[1], p[2], p[3]) == doctest::Approx(ref * k.real()).epsilon(1e-12));
        }
    }

    TEST_CASE("Laguerre completeness converges") {
        for (int l : {0, 1, 2}) {
            const auto rep = oracle::verify_identity(l, 1e-3, oracle::matched_test_function(l, 1e-3), 150);
            REQUIRE(rep.rel_error.size() == 151);
            CHECK(rep.rel_error[150] < 1e-3);
            CHECK(rep.rel_error[150] < rep.rel_error[10]);
            CHECK(rep.collapsed > 0.0);
        }
    }

    TEST_CASE("matched test function shape") {
        const auto g = oracle::matched_test_function(2, 1.0);
        CHECK(g(0.0) == 0.0);
        CHECK(g(1.0) == doctest::Approx(std::exp(-1.5) + std::exp(-12.0)).epsilon(1e-14));
    }

    TEST_CASE("trace purity quadrature") {
        const PhysicalSetup s = test::reference_setup();
        const TurbulenceChannel ch(1e-16);
        CHECK(oracle::trace_purity_check(s, TurbulenceChannel(0.0), 700.0) == doctest::Approx(1.0).epsilon(1e-10));
        const double closed = purity(propagated_moments(s, ch, 1000.0));
        CHECK(test::rel(oracle::trace_purity_check(s, ch, 1000.0), closed) < 1e-8);
    }

    TEST_CASE("mode-basis overlaps against the main path") {
        const PhysicalSetup s = test::compact_setup();
        const TurbulenceChannel ch(1e-9);
        OamOptions o;
        o.grow_l_max = true;
        const OamSpectrum sp =
            conditional_oam_distribution(propagated_moments(s, ch, 2.0), s, 4, s.collimated_diff_waist(), o);
        oracle::FullOamOptions fo;
        fo.analysis_waist = 1.5 * s.collimated_sum_waist();
        for (int l = 0; l <= 2; ++l)
            CHECK(test::rel(oracle::full_oam_check(s, ch, 2.0, l, 14, fo), sp.at(l) * sp.idler_zero) < 1e-2);
        CHECK_THROWS_AS(oracle::full_oam_check(s, ch, 2.0, 0, 41, fo), DomainError);
    }

    TEST_CASE("closed-form angle statistics, uniform limit") {
        PropagatedMoments m;
        m.w = 2e-3;
        m.sigma = 2e-3;
        const auto ref = oracle::angle_stats_reference(m);
        CHECK(ref.delta_theta == doctest::Approx(kPi / std::sqrt(3.0)).epsilon(1e-10));
        CHECK(ref.boundary_density == doctest::Approx(0.5 / kPi).epsilon(1e-10));
    }

    TEST_CASE("closed-form angle statistics against the main path") {
        const PhysicalSetup s = test::reference_setup();
        for (double z : {0.0, 3.0, 40.0, 1000.0}) {
            const PropagatedMoments m = propagated_moments(s, TurbulenceChannel(1e-16), z);
            const auto ref = oracle::angle_stats_reference(m);
            const AngleDistribution d = conditional_angle_stats(m);
            CHECK(test::rel(d.circular_std, ref.delta_theta) < 1e-7);
            CHECK(std::abs(d.boundary_density - ref.boundary_density) < 1e-7 * (0.5 / kPi));
        }
    }

    TEST_CASE("Laguerre series") {
        CHECK(oracle::laguerre_series(5, 2.0, 1.5) == doctest::Approx(-2.52421875).epsilon(1e-15));
        CHECK(oracle::laguerre_series(0, 1.0, 9.0) == 1.0);
        CHECK(oracle::laguerre_series(2, 0.0, 1.0) == doctest::Approx(-0.5).epsilon(1e-15));
    }
}
