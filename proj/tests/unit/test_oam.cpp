#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "turbilink/errors.hpp"
#include "turbilink/oam.hpp"
#include "turbilink/quadrature.hpp"

using namespace turbilink;

namespace {

constexpr double kPi = std::numbers::pi;

OamSpectrum spectrum(double cn2, double z, int l_max = 15, bool grow = true) {
    const PhysicalSetup s = test::reference_setup();
    OamOptions o;
    o.grow_l_max = grow;
    return conditional_oam_distribution(propagated_moments(s, TurbulenceChannel(cn2), z), s, l_max,
                                        s.collimated_diff_waist(), o);
}

// <a|b> over the plane by polar quadrature
std::complex<double> overlap(const LgIndex& a, const LgIndex& b, double waist) {
    QuadratureSpec r;
    r.scale = waist;
    r.nodes = 64;
    r.rel_tol = 1e-12;
    r.abs_tol = 1e-13;  // orthogonal pairs integrate to zero
    QuadratureSpec t;
    t.method = QuadratureMethod::periodic_trapezoid;
    t.lower = 0.0;
    t.upper = 2.0 * kPi;
    t.nodes = 32;
    t.rel_tol = 1e-12;
    t.abs_tol = 1e-13;
    return integrate_nd(
               [&](std::span<const double> v) {
                   return v[0] * std::conj(lg_mode(a, waist, v[0], v[1])) * lg_mode(b, waist, v[0], v[1]);
               },
               {r, t})
        .value;
}

}  // namespace

TEST_SUITE("oam") {
    TEST_CASE("generalized Laguerre values") {
        CHECK(laguerre_poly(5, 2.0, 1.5) == doctest::Approx(-2.52421875).epsilon(1e-14));
        const auto& f = test::fixture("laguerre");
        CHECK(test::rel(laguerre_poly(f["p"].get<int>(), f["alpha"].get<double>(), f["x"].get<double>()),
                        f["value"].get<double>()) < test::tolerance("laguerre"));
        CHECK(laguerre_poly(0, 3.0, 7.0) == 1.0);
        CHECK(laguerre_poly(1, 3.0, 7.0) == doctest::Approx(-3.0));
        CHECK_THROWS_AS(laguerre_poly(301, 0.0, 1.0), DomainError);
        CHECK_THROWS_AS(laguerre_poly(-1, 0.0, 1.0), DomainError);
    }

    TEST_CASE("Laguerre-Gauss modes are orthonormal") {
        const double w = 1e-3;
        CHECK(std::abs(overlap({0, 0}, {0, 0}, w) - 1.0) < 1e-11);
        CHECK(std::abs(overlap({3, 2}, {3, 2}, w) - 1.0) < 1e-11);
        CHECK(std::abs(overlap({-2, 1}, {-2, 1}, w) - 1.0) < 1e-11);
        CHECK(std::abs(overlap({1, 0}, {1, 1}, w)) < 1e-11);
        CHECK(std::abs(overlap({1, 2}, {-1, 2}, w)) < 1e-11);
    }

    TEST_CASE("rotation characteristic") {
        const PhysicalSetup s = test::reference_setup();
        const RotationCharacteristic chi(propagated_moments(s, TurbulenceChannel(1e-16), 800.0));
        const RotationCharacteristic pure(propagated_moments(s, TurbulenceChannel(0.0), 800.0));
        CHECK(std::abs(chi(0.0, 0.0) - 1.0) < 1e-14);
        for (double a : {0.3, 1.1, 2.9, 5.0}) {
            // without turbulence l_s + l_i = 0, so a joint rotation is the identity;
            // turbulence spreads the total OAM
            CHECK(std::abs(pure(a, a) - 1.0) < 1e-12);
            CHECK(std::abs(chi(a, a)) < 1.0 - 1e-3);
            CHECK(std::abs(chi(a, 0.4)) <= 1.0 + 1e-12);
            CHECK(std::abs(chi(a, 0.0) - std::conj(chi(-a, 0.0))) < 1e-12);
        }
    }

    TEST_CASE("spectra are normalized and symmetric") {
        for (double cn2 : {0.0, 1e-17, 1e-16, 1e-15})
            for (double z : {0.0, 50.0, 1000.0}) {
                const OamSpectrum sp = spectrum(cn2, z);
                CHECK(std::abs(sp.total() - 1.0) < 1e-6);
                for (int l = 1; l <= sp.l_max; ++l) CHECK(std::abs(sp.at(l) - sp.at(-l)) < 1e-8);
                CHECK(sp.tail_mass < 1e-6);
                CHECK(sp.idler_zero > 0.0);
                CHECK(sp.joint_zero == doctest::Approx(sp.at(0) * sp.idler_zero).epsilon(1e-12));
            }
    }

    TEST_CASE("broadening with distance and with turbulence") {
        const double zs[] = {500.0, 1000.0, 1500.0, 2000.0};
        double prev_row[4] = {0, 0, 0, 0};
        for (double cn2 : {1e-17, 1e-16, 1e-15}) {
            double prev = 0.0;
            for (int i = 0; i < 4; ++i) {
                const double u = conditional_oam_uncertainty(spectrum(cn2, zs[i]));
                CHECK(u > prev);
                CHECK(u > prev_row[i]);
                prev = prev_row[i] = u;
            }
        }
    }

    TEST_CASE("golden widths") {
        const double tol = test::tolerance("oam");
        for (const auto& f : test::fixture("oam")) {
            const OamSpectrum sp = spectrum(f["cn2"].get<double>(), f["z_m"].get<double>());
            CHECK(test::rel(conditional_oam_uncertainty(sp), f["std_hbar"].get<double>()) < tol);
            CHECK(test::rel(sp.at(0), f["p0"].get<double>()) < tol);
            CHECK(test::rel(sp.at(1), f["p1"].get<double>()) < tol);
        }
    }

    TEST_CASE("analysis waist does not change the spectrum") {
        const PhysicalSetup s = test::reference_setup();
        const PropagatedMoments m = propagated_moments(s, TurbulenceChannel(1e-16), 1000.0);
        OamOptions o;
        o.grow_l_max = true;
        const OamSpectrum a = conditional_oam_distribution(m, s, 15, s.collimated_diff_waist(), o);
        const OamSpectrum b = conditional_oam_distribution(m, s, 15, 3.0 * s.collimated_sum_waist(), o);
        for (int l = -a.l_max; l <= a.l_max; ++l) CHECK(std::abs(a.at(l) - b.at(l)) < 1e-12);
        CHECK(b.analysis_waist == 3.0 * s.collimated_sum_waist());
    }

    TEST_CASE("truncation is reported") {
        const PhysicalSetup s = test::reference_setup();
        const PropagatedMoments m = propagated_moments(s, TurbulenceChannel(1e-15), 2000.0);
        CHECK_THROWS_AS(conditional_oam_distribution(m, s, 5, s.collimated_diff_waist()), TruncationError);
        OamOptions o;
        o.grow_l_max = true;
        const OamSpectrum sp = conditional_oam_distribution(m, s, 5, s.collimated_diff_waist(), o);
        CHECK(sp.l_max > 5);
        CHECK(sp.tail_mass <= o.tail_target);
    }

    TEST_CASE("free space at the crystal is nearly pure l = 0") {
        const OamSpectrum sp = spectrum(0.0, 0.0);
        CHECK(sp.at(0) > 0.99);
    }

    TEST_CASE("uncertainty requires a centred spectrum") {
        OamSpectrum sp;
        sp.l_max = 1;
        sp.probabilities = {0.2, 0.5, 0.3};
        CHECK_THROWS_AS(conditional_oam_uncertainty(sp), ConsistencyError);
        sp.probabilities = {0.25, 0.5, 0.25};
        CHECK(conditional_oam_uncertainty(sp) == doctest::Approx(std::sqrt(0.5)));
    }
}
