#include "turbilink/app/config.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

#include "turbilink/app/format.hpp"
#include "turbilink/errors.hpp"

namespace turbilink::app {

namespace {

void require(bool ok, const char* field, const char* what) {
    if (!ok) throw DomainError(field, what);
}

}  // namespace

double parse_length(const std::string& text, const std::string& field) {
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw DomainError(field, "not a number: '" + text + "'");
    }
    std::string unit;
    for (std::size_t i = pos; i < text.size(); ++i)
        if (!std::isspace(static_cast<unsigned char>(text[i]))) unit += text[i];
    double scale = 1.0;
    if (unit.empty() || unit == "m")
        scale = 1.0;
    else if (unit == "km")
        scale = 1e3;
    else if (unit == "cm")
        scale = 1e-2;
    else if (unit == "mm")
        scale = 1e-3;
    else if (unit == "um")
        scale = 1e-6;
    else if (unit == "nm")
        scale = 1e-9;
    else
        throw DomainError(field, "unknown unit '" + unit + "'");
    return value * scale;
}

ZScale parse_z_scale(const std::string& text) {
    if (text == "linear") return ZScale::linear;
    if (text == "log") return ZScale::log;
    throw DomainError("z_scale", "must be 'linear' or 'log'");
}

std::string to_string(ZScale s) { return s == ZScale::linear ? "linear" : "log"; }

void SweepConfig::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    require(positive(pump_wavelength_nm), "pump_wavelength_nm", "must be finite and > 0");
    require(positive(pump_waist_um), "pump_waist_um", "must be finite and > 0");
    require(positive(crystal_length_mm), "crystal_length_mm", "must be finite and > 0");
    require(positive(focal_length_cm), "focal_length_cm", "must be finite and > 0");
    require(!cn2.empty(), "cn2", "needs at least one value");
    for (double c : cn2) require(std::isfinite(c) && c >= 0.0, "cn2", "values must be finite and >= 0");
    require(std::isfinite(z_min) && z_min >= 0.0, "z_min", "must be finite and >= 0");
    require(std::isfinite(z_max), "z_max", "must be finite");
    require(z_min < z_max, "z_max", "must exceed z_min");
    require(z_count >= 2, "z_count", "must be >= 2");
    require(z_scale == ZScale::linear || z_min > 0.0, "z_min", "must be > 0 for a log grid");
    require(l_max >= 1, "l_max", "must be >= 1");
    require(std::isfinite(oam_offset) && oam_offset >= 0.0, "oam_offset", "must be finite and >= 0");
    require(window_fraction > 0.0 && window_fraction <= 1.0, "window_fraction", "must lie in (0, 1]");
    require(angle_grid >= 64, "angle_grid", "must be >= 64");
    require(angle_tolerance >= 1e-9 && angle_tolerance < 1e-2, "angle_tolerance", "must lie in [1e-9, 1e-2)");
    require(oam_tolerance > 1e-14 && oam_tolerance < 1e-2, "oam_tolerance", "must lie in (1e-14, 1e-2)");
    require(tail_target > 0.0 && tail_target < 1e-2, "tail_target", "must lie in (0, 1e-2)");
    require(std::isfinite(analysis_waist_um) && analysis_waist_um >= 0.0, "analysis_waist_um", "must be >= 0");
    require(threads >= 0, "threads", "must be >= 0");
}

PhysicalSetup SweepConfig::setup() const {
    return derive_setup(pump_wavelength_nm * 1e-9, pump_waist_um * 1e-6, crystal_length_mm * 1e-3,
                        focal_length_cm * 1e-2);
}

std::vector<double> SweepConfig::z_grid() const {
    std::vector<double> z(z_count);
    for (int i = 0; i < z_count; ++i) {
        const double t = static_cast<double>(i) / (z_count - 1);
        z[i] = z_scale == ZScale::linear ? z_min + (z_max - z_min) * t
                                         : z_min * std::pow(z_max / z_min, t);
    }
    z.front() = z_min;
    z.back() = z_max;
    return z;
}

std::vector<std::pair<std::string, std::string>> SweepConfig::entries() const {
    std::string cn2_list;
    for (std::size_t i = 0; i < cn2.size(); ++i) cn2_list += (i ? "," : "") + format_number(cn2[i]);
    return {
        {"pump_wavelength_nm", format_number(pump_wavelength_nm)},
        {"pump_waist_um", format_number(pump_waist_um)},
        {"crystal_length_mm", format_number(crystal_length_mm)},
        {"focal_length_cm", format_number(focal_length_cm)},
        {"cn2", cn2_list},
        {"z_min", format_number(z_min)},
        {"z_max", format_number(z_max)},
        {"z_count", std::to_string(z_count)},
        {"z_scale", to_string(z_scale)},
        {"l_max", std::to_string(l_max)},
        {"oam_offset", format_number(oam_offset)},
        {"window_fraction", format_number(window_fraction)},
        {"angle_grid", std::to_string(angle_grid)},
        {"angle_tolerance", format_number(angle_tolerance)},
        {"oam_tolerance", format_number(oam_tolerance)},
        {"tail_target", format_number(tail_target)},
        {"analysis_waist_um", format_number(analysis_waist_um)},
    };
}

}  // namespace turbilink::app
