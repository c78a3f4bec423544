#include "turbilink/app/commands.hpp"

#include <ostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "turbilink/app/format.hpp"
#include "turbilink/epr.hpp"
#include "turbilink/oam.hpp"
#include "turbilink/parallel.hpp"
#include "turbilink/propagation.hpp"
#include "turbilink/statistics.hpp"

namespace turbilink::app {

namespace {

struct Point {
    double cn2;
    double z;
};

std::vector<Point> sweep_points(const SweepConfig& config) {
    const std::vector<double> z = config.z_grid();
    std::vector<Point> pts;
    pts.reserve(config.cn2.size() * z.size());
    for (double c : config.cn2)
        for (double zi : z) pts.push_back({c, zi});
    return pts;
}

// Rows are rendered concurrently, then written in order.
template <class Row>
void emit_rows(const SweepConfig& config, const std::string& command, const std::string& columns,
               std::ostream& out, Row&& row) {
    config.validate();
    const PhysicalSetup setup = config.setup();
    const std::vector<Point> pts = sweep_points(config);
    std::vector<std::string> text(pts.size());
    parallel_for(pts.size(), effective_threads(config),
                 [&](std::size_t i) { text[i] = row(setup, pts[i]); });
    write_header(command, config, out);
    out << columns << '\n';
    for (const auto& t : text) out << t;
}

std::string prefix(const Point& p) { return format_number(p.cn2) + ',' + format_number(p.z) + ','; }

OamOptions oam_options(const SweepConfig& config) {
    OamOptions o;
    o.tolerance = config.oam_tolerance;
    o.tail_target = config.tail_target;
    o.grow_l_max = true;
    return o;
}

double analysis_waist(const SweepConfig& config, const PhysicalSetup& setup) {
    return config.analysis_waist_um > 0.0 ? config.analysis_waist_um * 1e-6 : setup.collimated_diff_waist();
}

OamSpectrum spectrum_at(const SweepConfig& config, const PhysicalSetup& setup, const Point& p) {
    const PropagatedMoments m = propagated_moments(setup, TurbulenceChannel(p.cn2), p.z);
    return conditional_oam_distribution(m, setup, config.l_max, analysis_waist(config, setup),
                                        oam_options(config));
}

nlohmann::json interval_json(const ZInterval& iv) {
    return {{"z_lo_m", iv.lo}, {"z_hi_m", iv.hi}, {"lo_at_grid_start", iv.lo_clipped},
            {"hi_at_grid_end", iv.hi_clipped}};
}

}  // namespace

int effective_threads(const SweepConfig& config) { return resolve_threads(config.threads); }

void write_header(const std::string& command, const SweepConfig& config, std::ostream& out) {
    out << "# command=" << command << '\n';
    for (const auto& [k, v] : config.entries()) out << "# " << k << '=' << v << '\n';
}

void write_moments(const SweepConfig& config, std::ostream& out) {
    emit_rows(config, "moments", "cn2,z_m,w_m,sigma_m,r_plus_sq_m2,r_minus_sq_m2,c_plus_m,c_minus_m", out,
              [](const PhysicalSetup& setup, const Point& p) {
                  const PropagatedMoments m = propagated_moments(setup, TurbulenceChannel(p.cn2), p.z);
                  return prefix(p) + format_number(m.w) + ',' + format_number(m.sigma) + ',' +
                         format_number(m.r_plus_sq) + ',' + format_number(m.r_minus_sq) + ',' +
                         format_number(m.c_plus) + ',' + format_number(m.c_minus) + '\n';
              });
}

void write_purity_correlation(const SweepConfig& config, std::ostream& out) {
    emit_rows(config, "purity-correlation", "cn2,z_m,purity,f_c", out,
              [](const PhysicalSetup& setup, const Point& p) {
                  const PropagatedMoments m = propagated_moments(setup, TurbulenceChannel(p.cn2), p.z);
                  return prefix(p) + format_number(purity(m)) + ',' + format_number(spatial_correlation(m)) +
                         '\n';
              });
}

void write_oam_spectrum(const SweepConfig& config, std::ostream& out) {
    emit_rows(config, "oam-spectrum", "cn2,z_m,l,probability", out,
              [&](const PhysicalSetup& setup, const Point& p) {
                  const OamSpectrum s = spectrum_at(config, setup, p);
                  std::string rows;
                  for (int l = -s.l_max; l <= s.l_max; ++l)
                      rows += prefix(p) + std::to_string(l) + ',' + format_number(s.at(l)) + '\n';
                  return rows;
              });
}

void write_oam_width(const SweepConfig& config, std::ostream& out) {
    emit_rows(config, "oam-width", "cn2,z_m,std_hbar", out, [&](const PhysicalSetup& setup, const Point& p) {
        return prefix(p) + format_number(conditional_oam_uncertainty(spectrum_at(config, setup, p))) + '\n';
    });
}

void write_epr_scan(const SweepConfig& config, std::ostream& json_out, std::ostream* csv) {
    config.validate();
    const PhysicalSetup setup = config.setup();
    const std::vector<double> grid = config.z_grid();

    EprOptions opt;
    opt.oam_offset = config.oam_offset;
    opt.l_max = config.l_max;
    opt.angle_grid = config.angle_grid;
    opt.angle_tolerance = config.angle_tolerance;
    opt.oam = oam_options(config);
    opt.window_fraction = config.window_fraction;
    opt.threads = effective_threads(config);

    nlohmann::json doc;
    doc["command"] = "epr-scan";
    nlohmann::json cfg = nlohmann::json::object();
    for (const auto& [k, v] : config.entries()) cfg[k] = v;
    doc["config"] = cfg;
    doc["scans"] = nlohmann::json::array();

    if (csv) {
        write_header("epr-scan", config, *csv);
        *csv << "cn2,z_m,lhs,rhs,entangled\n";
    }
    for (double cn2 : config.cn2) {
        const EntanglementScan scan = scan_entanglement(setup, TurbulenceChannel(cn2), grid, opt);
        nlohmann::json s;
        s["cn2"] = cn2;
        s["intervals"] = nlohmann::json::array();
        for (const auto& iv : scan.intervals) s["intervals"].push_back(interval_json(iv));
        s["z_max_violation_m"] = scan.z_max_violation ? nlohmann::json(*scan.z_max_violation) : nlohmann::json();
        s["max_violation"] = scan.max_violation;
        s["maximal_window"] = scan.maximal_window ? interval_json(*scan.maximal_window) : nlohmann::json();
        s["window_fraction"] = scan.window_fraction;
        s["entangled_at_grid_start"] = scan.reports.front().entangled;
        s["entangled_at_grid_end"] = scan.reports.back().entangled;
        doc["scans"].push_back(s);
        if (csv)
            for (const auto& r : scan.reports)
                *csv << format_number(cn2) << ',' << format_number(r.z) << ',' << format_number(r.lhs) << ','
                     << format_number(r.rhs) << ',' << (r.entangled ? 1 : 0) << '\n';
    }
    json_out << doc.dump(2) << '\n';
}

}  // namespace turbilink::app
