#pragma once

#include <string>
#include <vector>

#include "cfseq/config_file.hpp"
#include "cfseq/diversity.hpp"
#include "cfseq/explanation.hpp"
#include "cfseq/nsga2.hpp"
#include "cfseq/policy.hpp"
#include "cfseq/registry.hpp"

namespace cfseq {

struct BaselineSettings {
    double temperature = 1.0; // Boltzmann temperature for the entropy selectors
    int trials = 30;          // continuous single-change samples
};

/// Everything one end-to-end run needs. Environment-specific defaults
/// (window k, population, generations, episode counts) are applied by
/// load_run_config; every value can be overridden in the config file.
struct RunConfig {
    std::string env = "mini-highway";
    std::string out_dir = "runs/out";
    std::uint64_t seed = 1;
    int episodes = 0;  // 0 = env default
    int k = 0;         // 0 = env default
    int max_cases = 200;
    std::vector<std::string> methods; // empty = env default, canonical order
    TrainConfig train;
    NsgaConfig nsga;
    BaselineSettings baselines;
    PropertySettings props;
    EnvParams env_params;
};

RunConfig load_run_config(const ConfigFile& file);

/// Per-method aggregate row. Property means are macro-averaged: first within
/// each non-empty explanation set, then across non-empty sets. Empty sets are
/// counted separately and excluded from the means.
struct MethodStats {
    int failures = 0;
    int empty_sets = 0;
    double generated_pct = 0.0;
    double mean_validity = 0.0;
    double mean_proximity = 0.0;
    double mean_sparsity = 0.0;
    double mean_certainty = 0.0;
    double mean_recency = 0.0;
    DiversityReport diversity;

    int nonempty() const { return failures - empty_sets; }
};

struct ResultsTable {
    std::string env;
    std::vector<std::string> methods; // column order
    std::map<std::string, MethodStats> stats;
    int failures_total = 0;
};

/// Full protocol: train -> collect -> explain -> evaluate -> report. All
/// artifacts are persisted under cfg.out_dir; the whole run is a pure
/// function of the config (child seeds are derived per stage and per case).
/// Zero collected failures is a legal outcome with empty tables.
ResultsTable run_pipeline(const RunConfig& cfg);

/// Individual stages; each loads what it needs from cfg.out_dir.
void stage_train(const RunConfig& cfg);
std::vector<FailureCase> stage_collect(const RunConfig& cfg);
void stage_explain(const RunConfig& cfg);
ResultsTable stage_evaluate(const RunConfig& cfg);

enum class ReportFormat { Csv, Markdown };

/// Renders the stored results of a completed run. Throws ConfigError listing
/// the missing artifacts when the directory is incomplete.
std::string render_report(const std::string& results_dir, ReportFormat format);

/// The scripted controller used in place of a trained policy on continuous
/// environments.
PolicyFn scripted_controller(const std::string& env_name);

/// Canonical method column order (baselines first, evolutionary search last).
std::vector<std::string> canonical_methods();

} // namespace cfseq
