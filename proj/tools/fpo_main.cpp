#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "fpo/harness.hpp"

namespace {

fpo::ExperimentConfig build_config(const std::string& config_path,
                                   const std::string& preset, const std::string& out,
                                   long seed, bool seed_set) {
    fpo::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = fpo::load_config(config_path);
    else if (!preset.empty()) cfg = fpo::ExperimentConfig::preset_defaults(preset);
    if (!preset.empty() && !config_path.empty() && cfg.preset != preset) {
        cfg = fpo::ExperimentConfig::preset_defaults(preset);
        // flags after preset: re-apply the file on top of the preset defaults
        fpo::ExperimentConfig file_cfg = fpo::load_config(config_path);
        cfg = file_cfg;
        cfg.preset = preset;
    }
    if (!out.empty()) cfg.out_dir = out;
    if (seed_set) cfg.seed = seed;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fractional parabolic obstacle laboratory"};
    app.require_subcommand(1);

    std::string config_path, preset, out;
    long seed = 0;
    bool seed_set = false;
    app.add_option("--config", config_path, "flat key/value config file")
        ->check(CLI::ExistingFile);
    app.add_option("--preset", preset, "named preset (overrides the config's preset)");
    app.add_option("--out", out, "output directory");
    app.add_option("--seed", seed, "random seed for synthetic perturbation tests")
        ->each([&](const std::string&) { seed_set = true; });

    auto* run = app.add_subcommand("run", "run one experiment");
    auto* sweep = app.add_subcommand("sweep", "run one experiment per axis value");
    auto* price = app.add_subcommand("price", "price an American option");
    auto* validate = app.add_subcommand("validate-config", "validate a config and exit");

    std::string axis;
    std::vector<double> values;
    sweep->add_option("--axis", axis, "numeric config field to sweep")->required();
    sweep->add_option("--values", values, "comma-separated axis values")
        ->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        fpo::ExperimentConfig cfg = build_config(config_path, preset, out, seed, seed_set);
        if (run->parsed()) return fpo::run_experiment(cfg);
        if (sweep->parsed()) return fpo::run_sweep(cfg, axis, values);
        if (price->parsed()) return fpo::run_price(cfg);
        if (validate->parsed()) return fpo::run_validate(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
