#pragma once

#include <string>
#include <utility>
#include <vector>

#include "turbilink/params.hpp"

namespace turbilink::app {

enum class ZScale { linear, log };

// Everything a sweep command needs. Field names double as config-file keys
// and as long flags (underscores or dashes).
struct SweepConfig {
    double pump_wavelength_nm = 355.0;
    double pump_waist_um = 507.0;
    double crystal_length_mm = 1.0;
    double focal_length_cm = 50.0;
    std::vector<double> cn2 = {0.0, 1e-17, 1e-16, 1e-15};
    double z_min = 0.0;  // metres
    double z_max = 2000.0;
    int z_count = 101;
    ZScale z_scale = ZScale::linear;
    int l_max = 15;
    double oam_offset = 1.0;
    double window_fraction = 0.9;
    int angle_grid = 256;
    double angle_tolerance = 1e-9;
    double oam_tolerance = 1e-8;
    double tail_target = 1e-7;
    double analysis_waist_um = 0.0;  // 0 selects the collimated difference waist
    std::string out;                 // empty or "-" writes to stdout
    std::string csv_out;             // epr-scan per-point table
    int threads = 0;                 // 0 defers to TURBILINK_THREADS

    // Throws DomainError naming the offending key.
    void validate() const;
    PhysicalSetup setup() const;
    std::vector<double> z_grid() const;
    // Ordered key/value pairs echoed into output headers.
    std::vector<std::pair<std::string, std::string>> entries() const;
};

// Length with optional unit suffix (nm, um, mm, cm, m, km); bare numbers are metres.
double parse_length(const std::string& text, const std::string& field);

ZScale parse_z_scale(const std::string& text);
std::string to_string(ZScale s);

}  // namespace turbilink::app
