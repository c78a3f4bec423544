#pragma once

#include <optional>
#include <vector>

#include "turbilink/oam.hpp"
#include "turbilink/params.hpp"
#include "turbilink/turbulence.hpp"

namespace turbilink {

struct EprOptions {
    double oam_offset = 1.0;  // hbar units, added to the OAM uncertainty
    int l_max = 15;
    int angle_grid = 256;
    double angle_tolerance = 1e-9;
    OamOptions oam = default_oam();
    double window_fraction = 0.9;
    double z_rel_tol = 1e-3;
    int threads = 1;

    static OamOptions default_oam() {
        OamOptions o;
        o.grow_l_max = true;
        return o;
    }
};

// Angle-OAM criterion at one distance: entangled when lhs < rhs.
struct EprReport {
    double z = 0;
    double delta_theta = 0;
    double delta_oam = 0;
    double oam_offset = 0;
    double lhs = 0;               // delta_theta * (delta_oam + oam_offset)
    double boundary_density = 0;  // conditional angle density at the window edge
    double rhs = 0;               // 0.5 * (1 - 2 pi boundary_density)
    bool entangled = false;
    double violation = 0;         // rhs - lhs
    int l_max = 0;                // OAM range actually used
    double oam_tail = 0;
};

struct ZInterval {
    double lo = 0;
    double hi = 0;
    bool lo_clipped = false;  // ends at the first grid point rather than a crossing
    bool hi_clipped = false;  // ends at the last grid point
};

struct EntanglementScan {
    std::vector<double> z_grid;
    std::vector<EprReport> reports;
    std::vector<ZInterval> intervals;
    std::optional<double> z_max_violation;
    double max_violation = 0;
    std::optional<ZInterval> maximal_window;
    double window_fraction = 0.9;
};

EprReport epr_report(const PhysicalSetup& setup, const TurbulenceChannel& channel, double z,
                     const EprOptions& options = {});

// z_grid strictly increasing with at least 16 points. Sign changes of the
// violation are refined by bisection to options.z_rel_tol. The peak is the
// largest interior local maximum of the violation (the global maximum when
// there is none), and the maximal window is the contiguous range around it
// where violation >= window_fraction * peak.
EntanglementScan scan_entanglement(const PhysicalSetup& setup, const TurbulenceChannel& channel,
                                   const std::vector<double>& z_grid,
                                   const EprOptions& options = {});

}  // namespace turbilink
