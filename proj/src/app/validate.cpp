#include "turbilink/app/validate.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "turbilink/epr.hpp"
#include "turbilink/errors.hpp"
#include "turbilink/oam.hpp"
#include "turbilink/oracle.hpp"
#include "turbilink/parallel.hpp"
#include "turbilink/propagation.hpp"
#include "turbilink/quadrature.hpp"
#include "turbilink/statistics.hpp"

namespace turbilink::app {

namespace {

using json = nlohmann::json;
using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

PhysicalSetup reference_setup() { return derive_setup(355e-9, 507e-6, 1e-3, 0.5); }

// Short collimated ranges, small enough for the explicit mode-basis oracle.
PhysicalSetup compact_setup() { return derive_setup(355e-9, 10e-6, 1e-3, 0.05); }

double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

double rel_diff(cplx a, cplx b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

std::string sci(double v) {
    std::ostringstream s;
    s.precision(3);
    s << std::scientific << v;
    return s.str();
}

CheckResult verdict(std::string name, bool ok, std::string detail) {
    return {std::move(name), ok, std::move(detail), 0.0};
}

// Deterministic probe coordinates on the scale of each Gaussian width.
BiphotonCoords probe(const PropagatedMoments& m, int index) {
    const double g[8][8] = {
        {0.3, -0.2, 0.5, 0.1, -0.4, 0.2, 0.1, -0.3},  {-0.6, 0.4, 0.2, -0.1, 0.3, 0.5, -0.2, 0.2},
        {0.1, 0.7, -0.3, 0.4, 0.2, -0.6, 0.5, 0.1},   {0.8, -0.1, 0.1, 0.6, -0.2, 0.3, -0.7, -0.4},
        {-0.2, -0.5, 0.6, 0.3, 0.4, 0.1, 0.2, 0.6},   {0.4, 0.2, -0.7, -0.5, 0.1, 0.4, 0.3, -0.1},
        {-0.1, 0.3, 0.4, -0.6, -0.5, -0.2, 0.6, 0.4}, {0.6, 0.6, -0.1, 0.2, 0.5, -0.4, -0.3, 0.5}};
    const double* r = g[index % 8];
    // positions built from sum and difference offsets so both widths are probed
    auto pos = [&](double p, double q) { return (p * m.w + q * m.sigma) / std::numbers::sqrt2; };
    BiphotonCoords c;
    c.signal1 = {pos(r[0], r[1]), pos(r[2], r[3])};
    c.idler1 = {pos(r[0], -r[1]), pos(r[2], -r[3])};
    c.signal2 = {pos(r[4], r[5]), pos(r[6], r[7])};
    c.idler2 = {pos(r[4], -r[5]), pos(r[6], -r[7])};
    return c;
}

// Largest relative error of the closed-form kernel against brute force.
double brute_force_error(const PhysicalSetup& setup, double cn2, double z, int probes, int threads) {
    const TurbulenceChannel ch(cn2);
    const PropagatedMoments m = propagated_moments(setup, ch, z);
    std::vector<double> err(probes);
    parallel_for(probes, threads, [&](std::size_t i) {
        const BiphotonCoords c = probe(m, static_cast<int>(i));
        err[i] = rel_diff(cross_spectral_density(m, c), oracle::brute_force_w2(setup, ch, z, c));
    });
    double worst = 0.0;
    for (double e : err) worst = std::max(worst, e);
    return worst;
}

// ---- quick checks ----------------------------------------------------------

CheckResult check_free_space_moments() {
    const PhysicalSetup s = reference_setup();
    const TurbulenceChannel ch(0.0);
    double worst = 0.0;
    bool sentinels = true;
    for (int i = 0; i <= 200; ++i) {
        const double z = 50.0 * i;
        const PropagatedMoments m = propagated_moments(s, ch, z);
        const oracle::FreeSpaceMoments ref = oracle::free_space_reference(s, z);
        worst = std::max({worst, rel_diff(m.w, ref.w), rel_diff(m.sigma, ref.sigma)});
        if (z > 0) {
            worst = std::max({worst, rel_diff(m.r_plus_sq.value(), ref.r_plus_sq.value()),
                              rel_diff(m.r_minus_sq.value(), ref.r_minus_sq.value())});
        } else {
            sentinels = sentinels && m.r_plus_sq.is_infinite() && m.r_minus_sq.is_infinite();
        }
        sentinels = sentinels && m.c_plus.is_infinite() && m.c_minus.is_infinite() &&
                    std::abs(purity(m) - 1.0) <= 1e-15;
    }
    return verdict("free-space moments over 0..10 km", worst < 1e-12 && sentinels,
                   "max rel error " + sci(worst) + (sentinels ? "" : ", sentinel or purity mismatch"));
}

CheckResult check_brute_force_free_space(int threads) {
    const double e = brute_force_error(reference_setup(), 0.0, 500.0, 2, threads);
    return verdict("brute-force kernel, free space", e < 1e-8, "max rel error " + sci(e));
}

CheckResult check_brute_force_short_range() {
    const PhysicalSetup s = reference_setup();
    const double z = 1e-3;
    const PropagatedMoments m = propagated_moments(s, TurbulenceChannel(0.0), z);
    double worst = 0.0;
    for (int i = 0; i < 2; ++i) {
        const BiphotonCoords c = probe(m, i);
        const cplx bf = oracle::brute_force_axis(s, TurbulenceChannel(0.0), z, c.signal1.x(), c.idler1.x(),
                                                 c.signal2.x(), c.idler2.x());
        worst = std::max(worst, rel_diff(axis_kernel(m, c.signal1.x(), c.idler1.x(), c.signal2.x(), c.idler2.x()), bf));
    }
    return verdict("brute-force kernel at z = 1 mm against closed form", worst < 1e-6, "max rel error " + sci(worst));
}

CheckResult check_trace_purity_limits() {
    const PhysicalSetup s = reference_setup();
    const double a = oracle::trace_purity_check(s, TurbulenceChannel(0.0), 1000.0);
    const double b = oracle::trace_purity_check(s, TurbulenceChannel(1e-15), 0.0);
    const bool ok = std::abs(a - 1.0) < 1e-6 && std::abs(b - 1.0) < 1e-6;
    return verdict("trace purity, free space and z = 0", ok, "values " + sci(a) + ", " + sci(b));
}

CheckResult check_uniform_angle() {
    // equal widths make the angle density flat
    PropagatedMoments m;
    m.w = m.sigma = 1e-3;
    const AngleDistribution d = conditional_angle_stats(m);
    const double e1 = std::abs(d.circular_std - kPi / std::sqrt(3.0));
    const double e2 = std::abs(d.boundary_density - 0.5 / kPi);
    return verdict("uniform angle statistics", e1 < 1e-9 && e2 < 1e-9,
                   "errors " + sci(e1) + ", " + sci(e2));
}

CheckResult check_identity() {
    double worst = 0.0;
    for (int l : {0, 1, 2}) {
        const auto rep = oracle::verify_identity(l, 1e-3, oracle::matched_test_function(l, 1e-3), 150);
        worst = std::max(worst, rep.rel_error[150]);
    }
    return verdict("Laguerre completeness at p_max = 150", worst < 1e-3, "max rel error " + sci(worst));
}

CheckResult check_laguerre() {
    double worst = 0.0;
    for (int p : {0, 1, 5, 12})
        for (double alpha : {0.0, 2.0, 7.0})
            for (double x : {0.1, 1.5, 4.0})
                worst = std::max(worst, std::abs(laguerre_poly(p, alpha, x) - oracle::laguerre_series(p, alpha, x)) /
                                            std::max(1.0, std::abs(oracle::laguerre_series(p, alpha, x))));
    return verdict("Laguerre recurrence against series", worst < 1e-10, "max error " + sci(worst));
}

CheckResult check_quadrature_references() {
    QuadratureSpec spec;
    spec.scale = 4.0;
    spec.rel_tol = 1e-12;
    const double a = integrate_radial([](double r) { return std::exp(-(r - 3.0) * (r - 3.0)); }, spec).value;
    const double a_ref = 0.5 * std::sqrt(kPi) * (1.0 + boost::math::erf(3.0));
    const double b = integrate_periodic([](double t) { return std::exp(std::cos(t)); }, 64);
    const double b_ref = 2.0 * kPi * boost::math::cyl_bessel_i(0, 1.0);
    const double e = std::max(rel_diff(a, a_ref), rel_diff(b, b_ref));
    return verdict("quadrature reference integrals", e < 1e-11, "max rel error " + sci(e));
}

CheckResult check_oam_spectrum_shape() {
    const PhysicalSetup s = reference_setup();
    const PropagatedMoments m = propagated_moments(s, TurbulenceChannel(1e-16), 1000.0);
    OamOptions o;
    o.grow_l_max = true;
    const OamSpectrum sp = conditional_oam_distribution(m, s, 15, s.collimated_diff_waist(), o);
    double asym = 0.0;
    for (int l = 1; l <= sp.l_max; ++l) asym = std::max(asym, std::abs(sp.at(l) - sp.at(-l)));
    const double norm = std::abs(sp.total() - 1.0);
    return verdict("OAM spectrum normalization and symmetry", norm < 1e-6 && asym < 1e-8,
                   "|sum-1| " + sci(norm) + ", asymmetry " + sci(asym));
}

// ---- full checks -----------------------------------------------------------

CheckResult check_brute_force_turbulent(int threads) {
    const PhysicalSetup s = reference_setup();
    const std::pair<double, double> pairs[] = {{1e-16, 200.0}, {1e-16, 1000.0}, {1e-15, 500.0}, {1e-15, 2000.0}, {1e-17, 1500.0}};
    double worst = 0.0;
    for (const auto& [cn2, z] : pairs) worst = std::max(worst, brute_force_error(s, cn2, z, 4, threads));
    return verdict("brute-force kernel, turbulent pairs", worst < 1e-6, "max rel error " + sci(worst));
}

CheckResult check_trace_purity_turbulent() {
    const PhysicalSetup s = reference_setup();
    const std::pair<double, double> pts[] = {{1e-15, 2000.0}, {1e-16, 1000.0}, {1e-17, 500.0}};
    double worst = 0.0;
    for (const auto& [cn2, z] : pts) {
        const double closed = purity(propagated_moments(s, TurbulenceChannel(cn2), z));
        worst = std::max(worst, rel_diff(closed, oracle::trace_purity_check(s, TurbulenceChannel(cn2), z)));
    }
    return verdict("trace purity against closed form", worst < 1e-4, "max rel error " + sci(worst));
}

CheckResult check_oam_literal(int threads) {
    const PhysicalSetup s = compact_setup();
    const PropagatedMoments m = propagated_moments(s, TurbulenceChannel(3e-14), 100.0);
    const OamSpectrum sp = conditional_oam_distribution(m, s, 3, s.collimated_diff_waist());
    const std::vector<double> lit = oracle::literal_oam_joint(m, 3, 32, 48, threads);
    double worst = 0.0;
    for (int l = 0; l <= 3; ++l) worst = std::max(worst, std::abs(sp.at(l) * sp.idler_zero - lit[l]));
    return verdict("reduced vs four-angle OAM quadrature", worst < 1e-6, "max abs difference " + sci(worst));
}

CheckResult check_oam_mode_basis() {
    const PhysicalSetup s = compact_setup();
    const TurbulenceChannel ch(1e-9);
    const double z = 2.0;
    const PropagatedMoments m = propagated_moments(s, ch, z);
    OamOptions o;
    o.grow_l_max = true;
    const OamSpectrum sp = conditional_oam_distribution(m, s, 4, s.collimated_diff_waist(), o);
    oracle::FullOamOptions fo;
    fo.analysis_waist = 1.5 * s.collimated_sum_waist();
    double worst = 0.0, asym = 0.0;
    for (int l = 0; l <= 2; ++l) {
        const double full = oracle::full_oam_check(s, ch, z, l, 14, fo);
        worst = std::max(worst, rel_diff(full, sp.at(l) * sp.idler_zero));
        if (l > 0) asym = std::max(asym, rel_diff(full, oracle::full_oam_check(s, ch, z, -l, 14, fo)));
    }
    return verdict("mode-basis OAM overlaps against main path", worst < 1e-2 && asym < 1e-8,
                   "max rel error " + sci(worst) + ", asymmetry " + sci(asym));
}

// ---- fixtures --------------------------------------------------------------

json setup_json(const PhysicalSetup& s) {
    return {{"pump_wavelength_m", s.pump_wavelength()},
            {"pump_waist_m", s.pump_waist()},
            {"crystal_length_m", s.crystal_length()},
            {"focal_length_m", s.focal_length()}};
}

json tolerances() {
    return {{"moments", 1e-12},   {"kernel_probe", 1e-8}, {"purity", 1e-8}, {"angle_pdf", 1e-8},
            {"angle_stats", 1e-7}, {"laguerre", 1e-12},   {"oam", 1e-6},    {"epr", 5e-3}};
}

std::vector<double> epr_fixture_grid() {
    std::vector<double> z(64);
    for (int i = 0; i < 64; ++i) z[i] = 0.1 * std::pow(5000.0 / 0.1, i / 63.0);
    return z;
}

json interval_json(const ZInterval& iv) { return {{"z_lo_m", iv.lo}, {"z_hi_m", iv.hi}}; }

bool compare_node(const json& e, const json& a, double tol, const std::string& path, std::string& why) {
    if (e.is_number() && a.is_number()) {
        const double x = e.get<double>(), y = a.get<double>();
        if (rel_diff(x, y) <= tol) return true;
        why = path + ": expected " + e.dump() + ", got " + a.dump();
        return false;
    }
    if (e.type() != a.type()) {
        why = path + ": type mismatch";
        return false;
    }
    if (e.is_array()) {
        if (e.size() != a.size()) {
            why = path + ": length " + std::to_string(e.size()) + " vs " + std::to_string(a.size());
            return false;
        }
        for (std::size_t i = 0; i < e.size(); ++i)
            if (!compare_node(e[i], a[i], tol, path + "[" + std::to_string(i) + "]", why)) return false;
        return true;
    }
    if (e.is_object()) {
        for (auto it = e.begin(); it != e.end(); ++it) {
            if (it.key().rfind("check_", 0) == 0) continue;
            if (!a.contains(it.key())) {
                why = path + "." + it.key() + ": missing";
                return false;
            }
            if (!compare_node(it.value(), a.at(it.key()), tol, path + "." + it.key(), why)) return false;
        }
        return true;
    }
    if (e != a) {
        why = path + ": expected " + e.dump() + ", got " + a.dump();
        return false;
    }
    return true;
}

}  // namespace

ValidationLevel parse_validation_level(const std::string& text) {
    if (text == "quick") return ValidationLevel::quick;
    if (text == "full") return ValidationLevel::full;
    throw DomainError("level", "must be 'quick' or 'full'");
}

bool ValidationReport::passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return !checks.empty();
}

json generate_fixtures(int threads, std::ostream* progress) {
    auto note = [&](const std::string& s) {
        if (progress) *progress << "  fixture: " << s << std::endl;
    };
    const PhysicalSetup s = reference_setup();
    json fx;

    note("moments");
    {
        const TurbulenceChannel ch(1e-16);
        const PropagatedMoments m = propagated_moments(s, ch, 1000.0);
        fx["moments"] = {{"cn2", 1e-16},
                         {"z_m", 1000.0},
                         {"w_m", m.w},
                         {"sigma_m", m.sigma},
                         {"r_plus_sq_m", m.r_plus_sq.value()},
                         {"r_minus_sq_m", m.r_minus_sq.value()},
                         {"c_plus_m", m.c_plus.value()},
                         {"c_minus_m", m.c_minus.value()},
                         {"check_brute_force_max_rel_error", brute_force_error(s, 1e-16, 1000.0, 4, threads)}};
    }

    note("kernel probe");
    {
        const TurbulenceChannel ch(1e-16);
        const PropagatedMoments m = propagated_moments(s, ch, 200.0);
        const BiphotonCoords c = probe(m, 3);
        const cplx bf = oracle::brute_force_w2(s, ch, 200.0, c);
        fx["kernel_probe"] = {
            {"cn2", 1e-16},
            {"z_m", 200.0},
            {"coords_m", {c.signal1.x(), c.signal1.y(), c.idler1.x(), c.idler1.y(), c.signal2.x(), c.signal2.y(),
                          c.idler2.x(), c.idler2.y()}},
            {"re", bf.real()},
            {"im", bf.imag()},
            {"check_closed_form_rel_error", rel_diff(bf, cross_spectral_density(m, c))}};
    }

    note("purity");
    fx["purity"] = json::array();
    for (const auto& [cn2, z] : {std::pair{1e-15, 2000.0}, std::pair{1e-16, 1000.0}, std::pair{1e-17, 500.0}}) {
        const double v = oracle::trace_purity_check(s, TurbulenceChannel(cn2), z);
        fx["purity"].push_back({{"cn2", cn2}, {"z_m", z}, {"value", v},
                                {"check_closed_form", purity(propagated_moments(s, TurbulenceChannel(cn2), z))}});
    }

    note("angle density");
    {
        const PropagatedMoments m = propagated_moments(s, TurbulenceChannel(1e-16), 100.0);
        fx["angle_pdf"] = json::array();
        for (double d : {0.0, 0.5 * kPi, kPi})
            fx["angle_pdf"].push_back({{"cn2", 1e-16}, {"z_m", 100.0}, {"theta_diff", d},
                                       {"value", oracle::joint_angle_pdf_reference(m, d, 0.0)}});
        const PropagatedMoments m2 = propagated_moments(s, TurbulenceChannel(1e-16), 1000.0);
        const auto ref = oracle::angle_stats_reference(m2);
        fx["angle_stats"] = {{"cn2", 1e-16}, {"z_m", 1000.0}, {"delta_theta", ref.delta_theta},
                             {"boundary_density", ref.boundary_density}};
    }

    note("laguerre");
    fx["laguerre"] = {{"p", 5}, {"alpha", 2.0}, {"x", 1.5}, {"value", oracle::laguerre_series(5, 2.0, 1.5)}};

    note("oam widths");
    {
        struct Pt {
            double cn2, z;
        };
        std::vector<Pt> pts;
        for (double cn2 : {1e-17, 1e-16, 1e-15})
            for (double z : {500.0, 1000.0, 1500.0, 2000.0}) pts.push_back({cn2, z});
        std::vector<json> rows(pts.size());
        parallel_for(pts.size(), threads, [&](std::size_t i) {
            const PropagatedMoments m = propagated_moments(s, TurbulenceChannel(pts[i].cn2), pts[i].z);
            OamOptions o;
            o.grow_l_max = true;
            const OamSpectrum sp = conditional_oam_distribution(m, s, 15, s.collimated_diff_waist(), o);
            rows[i] = {{"cn2", pts[i].cn2}, {"z_m", pts[i].z}, {"std_hbar", conditional_oam_uncertainty(sp)},
                       {"p0", sp.at(0)}, {"p1", sp.at(1)}};
        });
        fx["oam"] = rows;
    }

    note("entanglement window (about a minute)");
    {
        EprOptions opt;
        opt.threads = threads;
        const EntanglementScan scan = scan_entanglement(s, TurbulenceChannel(1e-16), epr_fixture_grid(), opt);
        json iv = json::array();
        for (const auto& i : scan.intervals) iv.push_back(interval_json(i));
        fx["epr"] = {{"cn2", 1e-16},
                     {"grid", "log 0.1 m to 5 km, 64 points"},
                     {"intervals", iv},
                     {"z_max_violation_m", scan.z_max_violation ? json(*scan.z_max_violation) : json()},
                     {"max_violation", scan.max_violation},
                     {"maximal_window", scan.maximal_window ? interval_json(*scan.maximal_window) : json()}};
    }

    json doc;
    doc["metadata"] = {{"oracle_version", oracle::kVersion},
                       {"regenerate", "turbilink validate --level full --write-fixtures PATH"},
                       {"setup", setup_json(s)},
                       {"tolerances", tolerances()}};
    doc["fixtures"] = fx;
    return doc;
}

std::vector<CheckResult> diff_fixtures(const json& expected, const json& actual) {
    std::vector<CheckResult> out;
    const json& tol = expected.at("metadata").at("tolerances");
    if (expected.at("metadata").at("oracle_version") != actual.at("metadata").at("oracle_version"))
        out.push_back(verdict("fixture oracle version", false, "golden file was minted by another oracle version"));
    const json& e = expected.at("fixtures");
    const json& a = actual.at("fixtures");
    for (auto it = e.begin(); it != e.end(); ++it) {
        const std::string group = it.key();
        const double t = tol.contains(group) ? tol.at(group).get<double>() : 1e-12;
        std::string why;
        const bool ok = a.contains(group) && compare_node(it.value(), a.at(group), t, group, why);
        out.push_back(verdict("fixture " + group, ok, ok ? "within " + sci(t) : (why.empty() ? "missing" : why)));
    }
    return out;
}

json load_fixtures(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open fixture file " + path);
    return json::parse(in);
}

ValidationReport run_validation(const ValidationOptions& options, std::ostream* progress) {
    using Check = std::function<CheckResult()>;
    const int threads = resolve_threads(options.threads);
    std::vector<Check> checks = {
        check_free_space_moments,
        [&] { return check_brute_force_free_space(threads); },
        check_brute_force_short_range,
        check_trace_purity_limits,
        check_uniform_angle,
        check_identity,
        check_laguerre,
        check_quadrature_references,
        check_oam_spectrum_shape,
    };
    if (options.level == ValidationLevel::full) {
        checks.push_back([&] { return check_brute_force_turbulent(threads); });
        checks.push_back(check_trace_purity_turbulent);
        checks.push_back([&] { return check_oam_literal(threads); });
        checks.push_back(check_oam_mode_basis);
    }

    ValidationReport rep;
    auto timed = [&](const std::function<std::vector<CheckResult>()>& run, const std::string& label) {
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<CheckResult> rs;
        try {
            rs = run();
        } catch (const std::exception& e) {
            rs = {verdict(label, false, std::string("error: ") + e.what())};
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        for (auto& r : rs) {
            r.seconds = dt / rs.size();
            if (progress)
                *progress << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ", "
                          << sci(r.seconds) << " s)" << std::endl;
            rep.checks.push_back(r);
        }
    };
    for (std::size_t i = 0; i < checks.size(); ++i)
        timed([&] { return std::vector<CheckResult>{checks[i]()}; }, "check " + std::to_string(i + 1));

    if (options.level == ValidationLevel::full) {
        timed(
            [&] {
                const json fresh = generate_fixtures(threads, progress);
                if (!options.write_path.empty()) {
                    std::ofstream outf(options.write_path);
                    if (!outf) throw std::runtime_error("cannot write " + options.write_path);
                    outf << fresh.dump(2) << '\n';
                }
                if (options.fixtures_path.empty()) return std::vector<CheckResult>{};
                return diff_fixtures(load_fixtures(options.fixtures_path), fresh);
            },
            "golden fixtures");
    }
    return rep;
}

}  // namespace turbilink::app
