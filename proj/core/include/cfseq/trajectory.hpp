#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "cfseq/environment.hpp"
#include "cfseq/stochastic.hpp"

namespace cfseq {

struct Transition {
    State state;
    Action action;
    double reward = 0.0;
    State next_state;
    bool done = false;

    bool operator==(const Transition&) const = default;
};

/// A recorded episode (or episode window): transitions, the draw stream it
/// consumed, and the index of the first failing state if any.
struct Trajectory {
    std::vector<Transition> transitions;
    StochasticConfig config;
    std::optional<int> failure_index; // state index; state i closes transition i-1

    int steps() const { return static_cast<int>(transitions.size()); }
    bool failed() const { return failure_index.has_value(); }

    /// State i along the episode, i in [0, steps()].
    const State& state_at(int i) const;
    const State& last_state() const { return state_at(steps()); }
};

/// Deterministic replay: clones `proto`, restores `start`, then steps through
/// `actions`, consuming config.draws[t] at step t. Stops early when the
/// environment reports done. Reactive processes recompute their responses to
/// the replayed actions, but their randomness comes only from the fixed draws.
///
/// Throws ReplayLengthError when |actions| exceeds the recorded draws and
/// InputError on action-space mismatches.
Trajectory replay(const Environment& proto, const Snapshot& start,
                  std::span<const Action> actions, const StochasticConfig& config);

/// JSON-lines serialization: one transition object per line, then a trailer
/// object holding the config (seed + base64 draws) and the failure index.
void write_trajectory_jsonl(const Trajectory& t, std::ostream& os);
Trajectory read_trajectory_jsonl(std::istream& is);

} // namespace cfseq
