#pragma once

#include <map>
#include <string>

#include "cfseq/environment.hpp"

namespace cfseq {

/// Ring-road lane/cell grid. The ego vehicle picks one of five discrete
/// actions; other vehicles run a rule-based controller (keep speed, brake to
/// the gap ahead, occasionally change lanes using their slice of the draw
/// vector). Failure = two vehicles sharing a (lane, cell).
struct MiniHighwayParams {
    int lanes = 3;
    int cells = 20;
    int vehicles = 5;       // other vehicles
    int ego_max_speed = 3;
    int other_max_speed = 1;
    double p_lane = 0.2;    // per-vehicle per-step lane change probability
    double w_speed = 0.1;
    double w_crash = 1.0;
    double w_lane = 0.05;   // penalty while not in the rightmost lane
    int step_cap = 40;

    static MiniHighwayParams from_map(const std::map<std::string, double>& kv);
};

class MiniHighway final : public Environment {
public:
    enum ActionIndex { kLeft = 0, kRight = 1, kFaster = 2, kSlower = 3, kIdle = 4 };

    explicit MiniHighway(MiniHighwayParams params = {});

    std::string name() const override { return "mini-highway"; }
    ActionSpace action_space() const override { return ActionSpace::discrete(5); }
    int draw_arity() const override { return 2 * params_.vehicles; }
    int step_limit() const override { return params_.step_cap; }

    void reset() override;
    State observe() const override;
    int failure(const State& s) const override;
    StepOut step(const Action& a, std::span<const double> draw) override;
    Snapshot snapshot() const override;
    void restore(const Snapshot& s) override;
    std::unique_ptr<Environment> clone() const override;

    const MiniHighwayParams& params() const { return params_; }

    /// Places vehicle i at (lane, cell, speed); i = 0 is the ego. For
    /// scripting scenarios in tests and case construction.
    void place_vehicle(int i, int lane, int cell, int speed);

private:
    struct Vehicle {
        int lane = 0, cell = 0, speed = 0;
    };

    int gap_ahead(const std::vector<Vehicle>& vs, int self) const;
    bool occupied(const std::vector<Vehicle>& vs, int lane, int cell, int except) const;

    MiniHighwayParams params_;
    std::vector<Vehicle> fleet_; // fleet_[0] is the ego
    int step_ = 0;
};

} // namespace cfseq
