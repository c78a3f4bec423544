#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "turbilink/app/commands.hpp"
#include "turbilink/app/config.hpp"
#include "turbilink/app/validate.hpp"
#include "turbilink/errors.hpp"

using namespace turbilink;
using namespace turbilink::app;

namespace {

// Holds a file stream or borrows std::cout for "" and "-".
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path.empty() || path == "-") return;
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file_) throw std::runtime_error("cannot open output file " + path);
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    void close() {
        if (!file_) return;
        file_->close();
        if (!*file_) throw std::runtime_error("write failed");
    }

private:
    std::unique_ptr<std::ofstream> file_;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-photon spatial state through weak atmospheric turbulence"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Flat key = value file; keys match the long flag names");

    SweepConfig cfg;
    std::string z_min = "0", z_max = "2000", z_scale = "linear";
    // every option answers to both dash and underscore spellings so that
    // config-file keys can use either
    auto opt = [&](const std::string& name, auto& target, const std::string& help) {
        std::string dashed = name;
        for (auto& ch : dashed)
            if (ch == '_') ch = '-';
        std::string names = "--" + dashed;
        if (dashed != name) names += ",--" + name;
        return app.add_option(names, target, help)->capture_default_str();
    };
    opt("pump_wavelength_nm", cfg.pump_wavelength_nm, "Pump wavelength (nm)");
    opt("pump_waist_um", cfg.pump_waist_um, "Pump waist at the crystal (um)");
    opt("crystal_length_mm", cfg.crystal_length_mm, "Crystal length (mm)");
    opt("focal_length_cm", cfg.focal_length_cm, "Collimating lens focal length (cm)");
    opt("cn2", cfg.cn2, "Refractive-index structure constant (m^-2/3); repeatable or comma separated")
        ->delimiter(',');
    opt("z_min", z_min, "First distance; bare numbers are metres, or suffix nm/um/mm/cm/m/km");
    opt("z_max", z_max, "Last distance, same units as --z-min");
    opt("z_count", cfg.z_count, "Number of distances (>= 2)");
    opt("z_scale", z_scale, "linear or log")->check(CLI::IsMember({"linear", "log"}));
    opt("l_max", cfg.l_max, "Initial OAM range |l| <= l_max (grown until the tail is negligible)");
    opt("oam_offset", cfg.oam_offset, "Offset added to the OAM uncertainty in the EPR product (hbar)");
    opt("window_fraction", cfg.window_fraction, "Fraction of the peak violation defining the maximal window");
    opt("angle_grid", cfg.angle_grid, "Points in the tabulated conditional angle density");
    opt("angle_tolerance", cfg.angle_tolerance, "Relative tolerance of the angle quadrature");
    opt("oam_tolerance", cfg.oam_tolerance, "Grid-refinement tolerance of the OAM spectrum");
    opt("tail_target", cfg.tail_target, "Largest OAM probability left outside the range");
    opt("analysis_waist_um", cfg.analysis_waist_um, "OAM analysis waist (um); 0 = collimated difference width");
    opt("out", cfg.out, "Output file; '-' or empty for stdout");
    opt("threads", cfg.threads, "Worker threads; 0 uses TURBILINK_THREADS or all cores");
    app.fallthrough();

    auto* moments = app.add_subcommand("moments", "Propagated widths, curvatures and coherence widths");
    auto* purity = app.add_subcommand("purity-correlation", "Purity and position correlation");
    auto* spectrum = app.add_subcommand("oam-spectrum", "Conditional OAM distribution for an idler with l = 0");
    auto* width = app.add_subcommand("oam-width", "Standard deviation of the conditional OAM distribution");
    auto* epr = app.add_subcommand("epr-scan", "Angle-OAM EPR criterion along the distance grid");
    epr->add_option("--csv-out,--csv_out", cfg.csv_out, "Per-point CSV table (cn2,z_m,lhs,rhs,entangled)");
    auto* validate = app.add_subcommand("validate", "Oracle cross-checks and golden fixture regeneration");
    std::string level = "quick";
    std::string fixtures = TURBILINK_DEFAULT_FIXTURES;
    std::string write_fixtures;
    validate->add_option("--level", level, "quick or full")
        ->check(CLI::IsMember({"quick", "full"}))
        ->capture_default_str();
    validate->add_option("--fixtures", fixtures, "Golden fixture file diffed by the full level")->capture_default_str();
    validate->add_option("--write-fixtures,--write_fixtures", write_fixtures, "Write regenerated fixtures here");

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.z_min = parse_length(z_min, "z_min");
        cfg.z_max = parse_length(z_max, "z_max");
        cfg.z_scale = parse_z_scale(z_scale);

        if (validate->parsed()) {
            ValidationOptions vo;
            vo.level = parse_validation_level(level);
            vo.fixtures_path = fixtures;
            vo.write_path = write_fixtures;
            vo.threads = cfg.threads;
            const ValidationReport rep = run_validation(vo, &std::cerr);
            Sink sink(cfg.out);
            int failed = 0;
            for (const auto& c : rep.checks) {
                sink.stream() << (c.passed ? "PASS" : "FAIL") << "  " << c.name << "  (" << c.detail << ")\n";
                failed += c.passed ? 0 : 1;
            }
            sink.stream() << (rep.passed() ? "all checks passed" : std::to_string(failed) + " check(s) failed")
                          << '\n';
            sink.close();
            return rep.passed() ? 0 : 1;
        }

        Sink sink(cfg.out);
        if (moments->parsed()) write_moments(cfg, sink.stream());
        if (purity->parsed()) write_purity_correlation(cfg, sink.stream());
        if (spectrum->parsed()) write_oam_spectrum(cfg, sink.stream());
        if (width->parsed()) write_oam_width(cfg, sink.stream());
        if (epr->parsed()) {
            if (cfg.csv_out.empty()) {
                write_epr_scan(cfg, sink.stream(), nullptr);
            } else {
                Sink csv(cfg.csv_out);
                write_epr_scan(cfg, sink.stream(), &csv.stream());
                csv.close();
            }
        }
        sink.close();
    } catch (const DomainError& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
