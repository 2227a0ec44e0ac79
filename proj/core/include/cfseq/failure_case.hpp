#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cfseq/actions.hpp"
#include "cfseq/snapshot.hpp"
#include "cfseq/stochastic.hpp"

namespace cfseq {

/// A failure state plus the factual action window that leads to it: the
/// snapshot at the window start, the k factual actions, and the slice of the
/// episode's draw stream covering those steps. Replaying the factual actions
/// from the snapshot under the window config reproduces the failure.
struct FailureCase {
    std::string id;
    std::string env;
    Snapshot start_snapshot;
    std::vector<Action> factual_actions;
    StochasticConfig window_config;
    int horizon_k = 0;     // == |factual_actions|; may be shorter than requested
    int failure_step = 0;  // absolute episode step of the failing state
    int episode = 0;       // rollout index the case came from

    bool operator==(const FailureCase&) const = default;
};

void to_json(nlohmann::json& j, const FailureCase& c);
void from_json(const nlohmann::json& j, FailureCase& c);

/// JSON for a draw stream: seed plus base64-packed doubles.
void to_json(nlohmann::json& j, const StochasticConfig& c);
void from_json(const nlohmann::json& j, StochasticConfig& c);

} // namespace cfseq
