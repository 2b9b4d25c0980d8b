#pragma once
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace choreo {

// Full pipeline for one scenario config: curve -> real topology ->
// orientations -> cutting family -> divisor tracking -> tracing vector,
// monodromy and verdicts, reported as one JSON document. Optional side
// effects (report file, trajectory CSV, plot SVG) are driven by the
// "outputs" block of the config.
//
// Pipeline failures never escape; the report carries an "error" object and
// exit_code maps it for the CLI: 0 success, 2 discriminant hit, 3 tracking
// or analysis failure, 4 invalid config / curve / family.
struct ScenarioResult {
    nlohmann::json report;
    int exit_code = 0;
};

ScenarioResult run_scenario(const nlohmann::json& config);

// Canonical ready-to-run configs for the worked scenarios. Throws
// ConfigError for unknown names. `seed` only matters for presets with
// random ingredients (thm3-null's perturbation directions).
nlohmann::json preset_config(const std::string& name, unsigned seed = 0);

const std::vector<std::string>& preset_names();

// Runs every preset in order. A preset counts as failed when it exits with
// code 3 or 4, or when any applicable verdict in its report is unsatisfied.
// Discriminant hits are legitimate endings and do not count as failures.
struct VerifyAllResult {
    int failures = 0;
    std::vector<std::string> lines;  // one human-readable summary per preset
};
VerifyAllResult verify_all();

}  // namespace choreo
