#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include <json.hpp>

#include "turbilink/app/validate.hpp"
#include "turbilink/params.hpp"

namespace test {

inline turbilink::PhysicalSetup reference_setup() {
    return turbilink::derive_setup(355e-9, 507e-6, 1e-3, 0.5);
}

inline turbilink::PhysicalSetup compact_setup() {
    return turbilink::derive_setup(355e-9, 10e-6, 1e-3, 0.05);
}

inline double rel(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

inline double rel(std::complex<double> a, std::complex<double> b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

inline const nlohmann::json& golden() {
    static const nlohmann::json doc = turbilink::app::load_fixtures(TURBILINK_GOLDEN);
    return doc;
}

inline const nlohmann::json& fixture(const char* group) { return golden().at("fixtures").at(group); }

inline double tolerance(const char* group) {
    return golden().at("metadata").at("tolerances").at(group).get<double>();
}

}  // namespace test
