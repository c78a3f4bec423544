#include <doctest.h>

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "support.hpp"
#include "turbilink/app/commands.hpp"
#include "turbilink/app/config.hpp"
#include "turbilink/app/format.hpp"
#include "turbilink/app/validate.hpp"
#include "turbilink/errors.hpp"

using namespace turbilink;
using namespace turbilink::app;

namespace {

SweepConfig small_config() {
    SweepConfig c;
    c.cn2 = {0.0, 1e-16};
    c.z_min = 0.0;
    c.z_max = 1000.0;
    c.z_count = 5;
    return c;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::string field_of(const DomainError& e) { return e.field(); }

}  // namespace

TEST_SUITE("app") {
    TEST_CASE("lengths with units") {
        CHECK(parse_length("2000", "z") == 2000.0);
        CHECK(parse_length("1km", "z") == 1000.0);
        CHECK(parse_length("2.5 km", "z") == 2500.0);
        CHECK(parse_length("50cm", "z") == doctest::Approx(0.5));
        CHECK(parse_length("355nm", "z") == doctest::Approx(355e-9));
        CHECK(parse_length("7um", "z") == doctest::Approx(7e-6));
        CHECK_THROWS_AS(parse_length("3 furlongs", "z"), DomainError);
        CHECK_THROWS_AS(parse_length("far", "z"), DomainError);
    }

    TEST_CASE("z scale names") {
        CHECK(parse_z_scale("log") == ZScale::log);
        CHECK(to_string(parse_z_scale("linear")) == "linear");
        CHECK_THROWS_AS(parse_z_scale("cubic"), DomainError);
    }

    TEST_CASE("config validation names the key") {
        auto field_for = [](SweepConfig c) {
            try {
                c.validate();
            } catch (const DomainError& e) {
                return field_of(e);
            }
            return std::string();
        };
        SweepConfig c;
        CHECK(field_for(c).empty());
        c.z_count = 1;
        CHECK(field_for(c) == "z_count");
        c = {};
        c.z_max = 0.0;
        CHECK(field_for(c) == "z_max");
        c = {};
        c.cn2 = {1e-16, -1.0};
        CHECK(field_for(c) == "cn2");
        c = {};
        c.z_scale = ZScale::log;
        CHECK(field_for(c) == "z_min");
        c = {};
        c.pump_waist_um = std::numeric_limits<double>::quiet_NaN();
        CHECK(field_for(c) == "pump_waist_um");
        c = {};
        c.window_fraction = 0.0;
        CHECK(field_for(c) == "window_fraction");
        c = {};
        c.angle_tolerance = 1e-12;
        CHECK(field_for(c) == "angle_tolerance");
    }

    TEST_CASE("grids hit both endpoints exactly") {
        SweepConfig c;
        c.z_min = 0.1;
        c.z_max = 5000.0;
        c.z_count = 37;
        c.z_scale = ZScale::log;
        const auto z = c.z_grid();
        CHECK(z.front() == 0.1);
        CHECK(z.back() == 5000.0);
        for (std::size_t i = 1; i < z.size(); ++i) CHECK(z[i] / z[i - 1] == doctest::Approx(z[1] / z[0]).epsilon(1e-12));
        c.z_scale = ZScale::linear;
        c.z_min = 0.0;
        c.z_max = 2000.0;
        c.z_count = 101;
        CHECK(c.z_grid()[50] == 1000.0);
    }

    TEST_CASE("setup from config units") {
        const PhysicalSetup s = SweepConfig{}.setup();
        const PhysicalSetup r = test::reference_setup();
        CHECK(s.collimated_sum_waist() == doctest::Approx(r.collimated_sum_waist()).epsilon(1e-15));
        CHECK(s.collimated_diff_waist() == doctest::Approx(r.collimated_diff_waist()).epsilon(1e-15));
    }

    TEST_CASE("numbers round trip") {
        for (double v : {0.1, 1.0 / 3.0, 5.070256619039947e-6, 1e-300, -2.5e17, 0.0}) {
            const std::string t = format_number(v);
            double back = 0.0;
            std::from_chars(t.data(), t.data() + t.size(), back);
            CHECK(back == v);
        }
        CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
        CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
        CHECK(format_number(std::nan("")) == "nan");
        CHECK(format_number(ExtendedReal::infinite()) == "inf");
        CHECK(format_number(ExtendedReal::finite(2.0)) == "2");
    }

    TEST_CASE("every output starts with the configuration") {
        std::ostringstream out;
        write_moments(small_config(), out);
        const auto ls = lines(out.str());
        const auto entries = small_config().entries();
        REQUIRE(ls.size() == 1 + entries.size() + 1 + 10);
        CHECK(ls[0] == "# command=moments");
        for (std::size_t i = 0; i < entries.size(); ++i)
            CHECK(ls[1 + i] == "# " + entries[i].first + "=" + entries[i].second);
        CHECK(ls[1 + entries.size()] == "cn2,z_m,w_m,sigma_m,r_plus_sq_m2,r_minus_sq_m2,c_plus_m,c_minus_m");
        // free space at z = 0: infinite curvature and coupling
        CHECK(ls[2 + entries.size()].find(",inf,inf,inf,inf") != std::string::npos);
    }

    TEST_CASE("purity table values") {
        std::ostringstream out;
        write_purity_correlation(small_config(), out);
        const auto ls = lines(out.str());
        CHECK(ls.back().rfind("1e-16,1000,", 0) == 0);
        CHECK(ls[ls.size() - 6].rfind("0,1000,1,", 0) == 0);
    }

    TEST_CASE("output does not depend on thread count") {
        SweepConfig one = small_config();
        one.threads = 1;
        SweepConfig four = one;
        four.threads = 4;
        std::ostringstream a, b, c, d;
        write_oam_width(one, a);
        write_oam_width(four, b);
        CHECK(a.str() == b.str());
        write_oam_spectrum(one, c);
        write_oam_spectrum(four, d);
        CHECK(c.str() == d.str());
    }

    TEST_CASE("thread count from the environment") {
        SweepConfig c;
        c.threads = 3;
        CHECK(effective_threads(c) == 3);
        c.threads = 0;
        CHECK(effective_threads(c) >= 1);
    }

    TEST_CASE("entanglement scan report") {
        SweepConfig c;
        c.cn2 = {1e-16};
        c.z_min = 0.5;
        c.z_max = 2000.0;
        c.z_count = 16;
        c.z_scale = ZScale::log;
        std::ostringstream js, csv;
        write_epr_scan(c, js, &csv);
        const auto doc = nlohmann::json::parse(js.str());
        CHECK(doc["command"] == "epr-scan");
        CHECK(doc["config"]["z_count"] == "16");
        REQUIRE(doc["scans"].size() == 1);
        const auto& s = doc["scans"][0];
        CHECK(s["entangled_at_grid_start"].get<bool>());
        CHECK(s["intervals"].size() >= 2);
        CHECK(s["intervals"][0]["lo_at_grid_start"].get<bool>());
        CHECK(s["max_violation"].get<double>() > 0.0);
        const auto ls = lines(csv.str());
        CHECK(ls.size() == c.entries().size() + 2 + 16);
        CHECK(ls[c.entries().size() + 1] == "cn2,z_m,lhs,rhs,entangled");
    }

    TEST_CASE("fixture diff flags drift") {
        const nlohmann::json& g = test::golden();
        CHECK(g["metadata"].contains("oracle_version"));
        CHECK(g["metadata"].contains("regenerate"));
        auto same = diff_fixtures(g, g);
        for (const auto& r : same) CHECK(r.passed);
        nlohmann::json moved = g;
        moved["fixtures"]["laguerre"]["value"] = g["fixtures"]["laguerre"]["value"].get<double>() * (1 + 1e-9);
        moved["fixtures"]["moments"]["check_brute_force_max_rel_error"] = 1.0;  // diagnostic only
        int failed = 0;
        for (const auto& r : diff_fixtures(g, moved)) {
            if (!r.passed) {
                ++failed;
                CHECK(r.name == "fixture laguerre");
            }
        }
        CHECK(failed == 1);
        CHECK_THROWS(load_fixtures("/nonexistent/golden.json"));
    }

    TEST_CASE("validation levels") {
        CHECK(parse_validation_level("quick") == ValidationLevel::quick);
        CHECK(parse_validation_level("full") == ValidationLevel::full);
        CHECK_THROWS_AS(parse_validation_level("medium"), DomainError);
    }
}
