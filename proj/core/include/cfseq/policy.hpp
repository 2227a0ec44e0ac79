#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cfseq/environment.hpp"
#include "cfseq/failure_case.hpp"

namespace cfseq {

/// Per-field state binning. `Identity` keeps the rounded value, `Ignore`
/// drops the field, `Uniform` bins into [lo, hi], `CyclicDelta` keys the
/// clipped cyclic distance to a reference field (for ring-road positions).
struct FieldBin {
    enum class Mode { Identity, Ignore, Uniform, CyclicDelta };

    Mode mode = Mode::Identity;
    double lo = 0.0, hi = 1.0;
    int bins = 1;        // Uniform
    int ref = 0;         // CyclicDelta: index of the reference field
    int modulus = 1;     // CyclicDelta
    int clip = 0;        // CyclicDelta: distances clamped to [-clip, clip]

    static FieldBin identity() { return {}; }
    static FieldBin ignore();
    static FieldBin uniform(double lo, double hi, int bins);
    static FieldBin cyclic_delta(int ref, int modulus, int clip);
};

struct Discretizer {
    std::vector<FieldBin> fields;

    /// Stable string key for a state; one token per non-ignored field.
    std::string key(const State& s) const;
};

/// The default per-environment featurization used by the harness.
Discretizer default_discretizer(const Environment& env);

/// Tabular state-action values over discretized state keys. Lookups of
/// unseen keys return the zero vector.
struct QFunction {
    std::string env;
    int action_count = 0;
    Discretizer discretizer;
    std::map<std::string, std::vector<double>> table;

    std::vector<double> values(const State& s) const;
    /// Argmax over values(s) with lowest-index tie-breaking.
    int greedy(const State& s) const;
};

void to_json(nlohmann::json& j, const QFunction& q);
void from_json(const nlohmann::json& j, QFunction& q);

struct TrainConfig {
    long steps = 20000;
    double alpha = 0.2;
    double gamma = 0.95;
    double eps_start = 1.0;
    double eps_end = 0.05;
    long eps_decay_steps = 15000;
    std::uint64_t seed = 0;
};

/// One-step Q-learning with epsilon-greedy exploration; deterministic given
/// the seed. Throws UnsupportedError on continuous action spaces.
QFunction train_tabular_q(const Environment& proto, const TrainConfig& config);

using PolicyFn = std::function<Action(const State&)>;

/// Runs greedy rollouts under per-episode sampled configs and cuts a
/// FailureCase around every episode whose failure predicate fires. Windows
/// that would start before the episode keep the available prefix.
std::vector<FailureCase> collect_failures(const Environment& proto, const PolicyFn& policy,
                                          int episodes, int k, std::uint64_t seed);

std::vector<FailureCase> collect_failures(const Environment& proto, const QFunction& policy,
                                          int episodes, int k, std::uint64_t seed);

} // namespace cfseq
