#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "choreo/errors.hpp"
#include "choreo/scenario.hpp"

namespace {

// Applies CLI output overrides, runs the scenario, prints the report to
// stdout and returns the contract exit code (0 ok, 2 discriminant hit,
// 3 tracking failure, 4 bad config).
int run_config(nlohmann::json cfg, const std::string& out, const std::string& traj,
               const std::string& plot, bool have_seed, unsigned seed) {
    try {
        if (!out.empty()) cfg["outputs"]["report"] = out;
        if (!traj.empty()) cfg["outputs"]["trajectory"] = traj;
        if (!plot.empty()) cfg["outputs"]["plot"] = plot;
        if (have_seed) cfg["seed"] = seed;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 4;
    }
    const choreo::ScenarioResult res = choreo::run_scenario(cfg);
    std::cout << res.report.dump(2) << "\n";
    return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"moves curve-cut divisors around closed families and reports tracing data"};
    app.require_subcommand(1);

    std::string config_path, out_path, traj_path, plot_path;
    unsigned seed = 0;

    CLI::App* run = app.add_subcommand("run", "run one scenario config file");
    run->add_option("--config", config_path, "scenario config JSON file")->required();
    run->add_option("--out", out_path, "write the report JSON here");
    run->add_option("--traj", traj_path, "write the trajectory CSV here");
    run->add_option("--plot", plot_path, "write the SVG plot here");
    CLI::Option* run_seed = run->add_option("--seed", seed, "override the config seed");

    std::string preset_name;
    bool emit_config = false;
    CLI::App* preset = app.add_subcommand("preset", "run a named preset scenario");
    preset->add_option("name", preset_name, "preset name")->required();
    preset->add_flag("--emit-config", emit_config, "print the config instead of running it");
    preset->add_option("--out", out_path, "write the report JSON here");
    preset->add_option("--traj", traj_path, "write the trajectory CSV here");
    preset->add_option("--plot", plot_path, "write the SVG plot here");
    CLI::Option* preset_seed = preset->add_option("--seed", seed, "seed for random ingredients");

    app.add_subcommand("verify-all", "run every preset and check all applicable verdicts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int r = app.exit(e);
        return r == 0 ? 0 : 4;
    }

    if (run->parsed()) {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) {
            std::cerr << "cannot open config: " << config_path << "\n";
            return 4;
        }
        nlohmann::json cfg;
        try {
            in >> cfg;
        } catch (const nlohmann::json::exception& e) {
            std::cerr << "config parse error: " << e.what() << "\n";
            return 4;
        }
        return run_config(std::move(cfg), out_path, traj_path, plot_path,
                          run_seed->count() > 0, seed);
    }

    if (preset->parsed()) {
        nlohmann::json cfg;
        try {
            cfg = choreo::preset_config(preset_name, preset_seed->count() > 0 ? seed : 0);
        } catch (const choreo::ConfigError& e) {
            std::cerr << e.what() << "\n";
            return 4;
        }
        if (emit_config) {
            std::cout << cfg.dump(2) << "\n";
            return 0;
        }
        return run_config(std::move(cfg), out_path, traj_path, plot_path, false, 0);
    }

    const choreo::VerifyAllResult v = choreo::verify_all();
    for (const auto& line : v.lines) std::cout << line << "\n";
    if (v.failures > 0) {
        std::cout << v.failures << " preset(s) failed\n";
        return 1;
    }
    std::cout << "all presets ok\n";
    return 0;
}
