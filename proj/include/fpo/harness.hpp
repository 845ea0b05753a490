#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fpo/fb_analysis.hpp"
#include "fpo/obstacle.hpp"
#include "fpo/params.hpp"
#include "fpo/solver.hpp"

namespace fpo {

/// Flat key/value experiment description; see README for the schema.
struct ExperimentConfig {
    std::string preset = "benchmark";
    double s = 0.75;
    int n_x = 1024;
    int n_t = 256;
    double half_width = 3.5;   ///< truncation half-width L; domain [-L, L]
    double t_final = 1.0;

    // solver
    double eps_pen = 1e-3;
    double penalty_tol = 1e-10;
    double relaxation = 1.5;
    double tol_c = 1e-7;
    int max_iters = 20000;
    std::string scheme = "lcp";  ///< lcp | penalized | both

    // obstacle
    std::string obstacle = "builtin:two-scale-bump";
    double obstacle_a = 0.22;   ///< center hump amplitude
    double obstacle_sc = 0.5;   ///< center hump scale
    double obstacle_b = 0.35;   ///< wide hump amplitude
    double obstacle_sw = 3.0;   ///< wide hump scale

    // analysis
    double analysis_t0 = 0.5;
    double analysis_r0 = 0.56;
    int analysis_levels = 5;   ///< dyadic radii r0 2^{-k}, k = 0..levels-1
    bool audits = true;

    // option pricing
    std::string payoff = "put";  ///< put | call-spread
    double strike = 0.0;
    double spread_width = 1.0;
    double smoothing_width = 0.0;  ///< 0 = 4h
    double expiry = 0.5;

    std::string out_dir = "out";
    long seed = 0;

    /// Defaults for a named preset; throws on unknown names.
    static ExperimentConfig preset_defaults(const std::string& name);
    static std::vector<std::string> preset_names();

    /// Apply one key = value override; throws on unknown keys or bad values.
    void apply(const std::string& key, const std::string& value);

    /// Validation messages, each naming the offending field; empty when valid.
    std::vector<std::string> validate() const;

    bool numeric_key(const std::string& key) const;

    ObstacleSpec make_obstacle() const;
    SolverConfig solver_config() const;
};

/// Parse a flat key/value config file ('#' comments). A `preset` line loads
/// that preset's defaults first; remaining lines override.
ExperimentConfig load_config(const std::string& path);

/// Runs the configured experiment; writes field_u.csv, boundary.csv and
/// report.json under out_dir. Returns the process exit status: 0 when all
/// hard invariants pass, 2 when only audit soft-failures occurred, 1 on
/// errors or hard invariant violations.
int run_experiment(const ExperimentConfig& cfg);

/// Runs one instance per value of the named numeric config field and writes
/// an aggregated sweep.json; instance failures are recorded, not fatal.
int run_sweep(const ExperimentConfig& base, const std::string& axis,
              const std::vector<double>& values);

/// American option front end: builds the smoothed payoff, solves the forward
/// problem, maps t = T - tau back, writes price_surface.csv and
/// exercise_boundary.csv.
int run_price(const ExperimentConfig& cfg);

/// Validates a config and prints the messages; returns 0 when valid, 1 otherwise.
int run_validate(const ExperimentConfig& cfg);

}  // namespace fpo
