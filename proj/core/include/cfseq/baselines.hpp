#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cfseq/explanation.hpp"
#include "cfseq/policy.hpp"
#include "cfseq/properties.hpp"

namespace cfseq {

/// One selected timestep within the factual window, with its importance score.
struct ImportanceScore {
    int timestep = 0;
    double score = 0.0;
};

enum class EntropyMode { Certain, Uncertain };
enum class ExtremumMode { MinReward, MaxValue };

/// Timestep maximizing max(Q(s,.)) - min(Q(s,.)); lowest-index tie-break.
ImportanceScore highlights_index(const QFunction& policy, std::span<const State> window_states);

/// Shannon entropy of the Boltzmann distribution over Q(s,.) at temperature
/// tau. Certain picks the argmin-entropy state, Uncertain the argmax.
ImportanceScore entropy_index(const QFunction& policy, std::span<const State> window_states,
                              EntropyMode mode, double temperature);

/// First local minimum of the reward series (MinReward) or first local
/// maximum of the state-value series max_a Q(s,a) (MaxValue). Boundary
/// entries compare against +/- infinity. Returns nullopt when no point
/// qualifies; callers fall back to the global extremum.
std::optional<ImportanceScore> local_extremum_index(std::span<const State> window_states,
                                                    std::span<const double> window_rewards,
                                                    const QFunction* policy,
                                                    ExtremumMode mode);

/// Tries alternative actions at one timestep, keeping every sequence that
/// satisfies validity. Discrete spaces are enumerated exhaustively;
/// continuous spaces draw `trials` uniform samples within bounds. Every kept
/// member differs from the factual sequence in exactly that position.
ExplanationSet single_change_search(const Environment& proto, const FailureCase& c,
                                    int timestep, int trials, std::uint64_t seed,
                                    const PropertySettings& props);

/// The five importance-based explainers. Q-based selectors need `policy`;
/// "local-min" runs without one.
inline const std::vector<std::string>& baseline_names() {
    static const std::vector<std::string> names{"highlights", "certain", "uncertain",
                                                "local-min", "local-max"};
    return names;
}

/// Replays the factual window, picks the method's important timestep, and
/// searches single-action replacements there.
ExplanationSet run_baseline(const Environment& proto, const FailureCase& c,
                            const std::string& method, const QFunction* policy,
                            double temperature, int trials, std::uint64_t seed,
                            const PropertySettings& props);

} // namespace cfseq
