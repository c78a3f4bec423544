#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace turbilink::app {

enum class ValidationLevel { quick, full };

ValidationLevel parse_validation_level(const std::string& text);

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0;
};

struct ValidationOptions {
    ValidationLevel level = ValidationLevel::quick;
    std::string fixtures_path;  // golden file diffed by the full level
    std::string write_path;     // when set, regenerated fixtures are written here
    int threads = 1;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool passed() const;
};

// quick: closed-form limits and cheap oracles (well under a minute).
// full: adds the turbulent brute-force and OAM oracles, regenerates every
// golden fixture and diffs it against fixtures_path.
ValidationReport run_validation(const ValidationOptions& options, std::ostream* progress);

// Every golden fixture, computed from scratch. Oracle-minted values are
// cross-checked against the main path while being generated.
nlohmann::json generate_fixtures(int threads, std::ostream* progress);

// One check per fixture group, using the tolerances recorded in the
// expected file's metadata. Keys starting with "check_" are diagnostics and
// are not compared.
std::vector<CheckResult> diff_fixtures(const nlohmann::json& expected, const nlohmann::json& actual);

nlohmann::json load_fixtures(const std::string& path);

}  // namespace turbilink::app
