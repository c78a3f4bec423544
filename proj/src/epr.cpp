#include "turbilink/epr.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "turbilink/errors.hpp"
#include "turbilink/parallel.hpp"
#include "turbilink/propagation.hpp"
#include "turbilink/statistics.hpp"

namespace turbilink {

namespace {

double midpoint(double a, double b) { return a > 0.0 ? std::sqrt(a * b) : 0.5 * (a + b); }

// Last point where pred(a) holds, given pred(a) != pred(b).
double bisect(const std::function<bool(double)>& pred, double a, double b, double rel_tol) {
    const bool at_a = pred(a);
    while (b - a > rel_tol * b) {
        const double m = midpoint(a, b);
        if (pred(m) == at_a)
            a = m;
        else
            b = m;
    }
    return midpoint(a, b);
}

// Golden-section search for a maximum of f inside [a, b], in log z when a > 0.
std::pair<double, double> maximize(const std::function<double(double)>& f, double a, double b,
                                   double rel_tol) {
    const bool use_log = a > 0.0;
    auto to_x = [&](double z) { return use_log ? std::log(z) : z; };
    auto to_z = [&](double x) { return use_log ? std::exp(x) : x; };
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = to_x(a), hi = to_x(b);
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(to_z(x1)), f2 = f(to_z(x2));
    while (to_z(hi) - to_z(lo) > rel_tol * to_z(hi)) {
        if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(to_z(x1));
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(to_z(x2));
        }
    }
    return f1 >= f2 ? std::pair{to_z(x1), f1} : std::pair{to_z(x2), f2};
}

}  // namespace

EprReport epr_report(const PhysicalSetup& setup, const TurbulenceChannel& channel, double z,
                     const EprOptions& options) {
    const PropagatedMoments m = propagated_moments(setup, channel, z);
    const AngleDistribution angle = conditional_angle_stats(m, options.angle_grid, options.angle_tolerance);
    const OamSpectrum oam = conditional_oam_distribution(m, setup, options.l_max,
                                                         setup.collimated_diff_waist(), options.oam);
    EprReport r;
    r.z = z;
    r.delta_theta = angle.circular_std;
    r.delta_oam = conditional_oam_uncertainty(oam);
    r.oam_offset = options.oam_offset;
    r.lhs = r.delta_theta * (r.delta_oam + r.oam_offset);
    r.boundary_density = angle.boundary_density;
    r.rhs = 0.5 * (1.0 - 2.0 * std::numbers::pi * r.boundary_density);
    r.violation = r.rhs - r.lhs;
    r.entangled = r.violation > 0.0;
    r.l_max = oam.l_max;
    r.oam_tail = oam.tail_mass;
    return r;
}

EntanglementScan scan_entanglement(const PhysicalSetup& setup, const TurbulenceChannel& channel,
                                   const std::vector<double>& z_grid, const EprOptions& options) {
    if (z_grid.empty()) throw DomainError("z_grid", "must not be empty");
    if (z_grid.size() < 16) throw DomainError("z_grid", "needs at least 16 points");
    for (std::size_t i = 0; i < z_grid.size(); ++i) {
        if (!std::isfinite(z_grid[i]) || z_grid[i] < 0.0) throw DomainError("z_grid", "must be finite and >= 0");
        if (i > 0 && !(z_grid[i] > z_grid[i - 1])) throw DomainError("z_grid", "must be strictly increasing");
    }
    if (!(options.window_fraction > 0.0 && options.window_fraction <= 1.0))
        throw DomainError("window_fraction", "must lie in (0, 1]");

    EntanglementScan scan;
    scan.z_grid = z_grid;
    scan.window_fraction = options.window_fraction;
    const std::size_t n = z_grid.size();
    scan.reports.resize(n);
    parallel_for(n, options.threads,
                 [&](std::size_t i) { scan.reports[i] = epr_report(setup, channel, z_grid[i], options); });

    auto violation = [&](double z) { return epr_report(setup, channel, z, options).violation; };
    auto entangled = [&](double z) { return violation(z) > 0.0; };

    for (std::size_t i = 0; i < n;) {
        if (!scan.reports[i].entangled) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && scan.reports[j + 1].entangled) ++j;
        ZInterval iv;
        iv.lo_clipped = i == 0;
        iv.hi_clipped = j == n - 1;
        iv.lo = iv.lo_clipped ? z_grid[0] : bisect(entangled, z_grid[i - 1], z_grid[i], options.z_rel_tol);
        iv.hi = iv.hi_clipped ? z_grid[n - 1] : bisect(entangled, z_grid[j], z_grid[j + 1], options.z_rel_tol);
        scan.intervals.push_back(iv);
        i = j + 1;
    }

    std::optional<std::size_t> peak;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double v = scan.reports[i].violation;
        if (v <= 0.0 || v < scan.reports[i - 1].violation || v < scan.reports[i + 1].violation) continue;
        if (!peak || v > scan.reports[*peak].violation) peak = i;
    }
    if (!peak) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (scan.reports[i].violation > scan.reports[best].violation) best = i;
        if (scan.reports[best].violation > 0.0) peak = best;
    }
    if (!peak) return scan;

    const std::size_t ip = *peak;
    double z_peak = z_grid[ip];
    double v_peak = scan.reports[ip].violation;
    if (ip > 0 && ip + 1 < n) {
        const auto [zr, vr] = maximize(violation, z_grid[ip - 1], z_grid[ip + 1], options.z_rel_tol);
        if (vr > v_peak) {
            z_peak = zr;
            v_peak = vr;
        }
    }
    scan.z_max_violation = z_peak;
    scan.max_violation = v_peak;

    const double threshold = options.window_fraction * v_peak;
    auto above = [&](double z) { return violation(z) >= threshold; };
    ZInterval win;
    if (scan.reports[ip].violation < threshold) {
        // grid too coarse to hold a point above the threshold; the peak was
        // refined inside (z[ip-1], z[ip+1]) so the window lies there too
        win.lo = bisect(above, z_grid[ip - 1], z_peak, options.z_rel_tol);
        win.hi = bisect(above, z_peak, z_grid[ip + 1], options.z_rel_tol);
    } else {
        std::size_t a = ip, b = ip;
        while (a > 0 && scan.reports[a - 1].violation >= threshold) --a;
        while (b + 1 < n && scan.reports[b + 1].violation >= threshold) ++b;
        win.lo_clipped = a == 0;
        win.hi_clipped = b == n - 1;
        win.lo = win.lo_clipped ? z_grid[0] : bisect(above, z_grid[a - 1], z_grid[a], options.z_rel_tol);
        win.hi = win.hi_clipped ? z_grid[n - 1] : bisect(above, z_grid[b], z_grid[b + 1], options.z_rel_tol);
    }
    scan.maximal_window = win;
    return scan;
}

}  // namespace turbilink
