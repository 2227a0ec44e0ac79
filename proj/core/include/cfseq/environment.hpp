#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cfseq/actions.hpp"
#include "cfseq/snapshot.hpp"

namespace cfseq {

using State = std::vector<double>;

struct StepOut {
    double reward = 0.0;
    bool done = false;
};

/// Replayable-environment contract: deterministic stepping under recorded
/// exogenous draws, snapshot/restore, and a pure failure predicate.
///
/// Environments are single-owner mutable objects. Concurrent replays clone
/// the prototype and restore independent snapshot copies; all randomness
/// flows through the per-step draw vectors, never through ambient state.
class Environment {
public:
    virtual ~Environment() = default;

    virtual std::string name() const = 0;
    virtual int schema_version() const { return 1; }
    virtual ActionSpace action_space() const = 0;

    /// Entries consumed from the draw stream on every step. Fixed per
    /// environment; unused entries are permitted.
    virtual int draw_arity() const = 0;

    /// Episode step cap.
    virtual int step_limit() const = 0;

    /// Canonical start state.
    virtual void reset() = 0;

    virtual State observe() const = 0;

    /// 1 exactly when the failure condition holds in `s`; pure.
    /// Throws InputError on malformed state vectors.
    virtual int failure(const State& s) const = 0;

    /// Advances one step. `draw` must have draw_arity() entries.
    virtual StepOut step(const Action& a, std::span<const double> draw) = 0;

    virtual Snapshot snapshot() const = 0;
    virtual void restore(const Snapshot& s) = 0;

    virtual std::unique_ptr<Environment> clone() const = 0;
};

} // namespace cfseq
