#pragma once

#include <iosfwd>
#include <string>

#include "turbilink/app/config.hpp"

namespace turbilink::app {

// Each command validates the config, evaluates every (cn2, z) point
// (concurrently when threads > 1) and writes in grid order, so the output
// is byte-identical for any thread count.

// cn2,z_m,w_m,sigma_m,r_plus_sq_m2,r_minus_sq_m2,c_plus_m,c_minus_m
void write_moments(const SweepConfig& config, std::ostream& out);
// cn2,z_m,purity,f_c
void write_purity_correlation(const SweepConfig& config, std::ostream& out);
// cn2,z_m,l,probability; l runs over the range actually needed per point
void write_oam_spectrum(const SweepConfig& config, std::ostream& out);
// cn2,z_m,std_hbar
void write_oam_width(const SweepConfig& config, std::ostream& out);
// JSON summary (intervals, peak, maximal window, config) and, when csv is
// non-null, the per-point table cn2,z_m,lhs,rhs,entangled.
void write_epr_scan(const SweepConfig& config, std::ostream& json, std::ostream* csv);

// "# command=..." followed by one "# key=value" line per config entry.
void write_header(const std::string& command, const SweepConfig& config, std::ostream& out);

int effective_threads(const SweepConfig& config);

}  // namespace turbilink::app
