#pragma once

#include <map>
#include <string>

#include "cfseq/environment.hpp"

namespace cfseq {

/// 1-D point navigation with a continuous thrust action in [-1, 1].
/// Velocity picks up the thrust plus a wind term scaled from the draw;
/// failure is landing inside the obstacle interval.
struct ContinuousNavParams {
    double pos_lo = 0.0, pos_hi = 10.0;
    double vel_lo = -2.0, vel_hi = 2.0;
    double act_lo = -1.0, act_hi = 1.0;
    double obstacle_lo = 6.0, obstacle_hi = 7.0;
    double goal = 9.0;
    double goal_tol = 0.25;
    double sigma_wind = 0.05;
    int step_cap = 25;

    static ContinuousNavParams from_map(const std::map<std::string, double>& kv);
};

class ContinuousNav final : public Environment {
public:
    explicit ContinuousNav(ContinuousNavParams params = {});

    std::string name() const override { return "continuous-nav"; }
    ActionSpace action_space() const override {
        return ActionSpace::continuous({params_.act_lo}, {params_.act_hi});
    }
    int draw_arity() const override { return 1; } // wind
    int step_limit() const override { return params_.step_cap; }

    void reset() override;
    State observe() const override;
    int failure(const State& s) const override;
    StepOut step(const Action& a, std::span<const double> draw) override;
    Snapshot snapshot() const override;
    void restore(const Snapshot& s) override;
    std::unique_ptr<Environment> clone() const override;

    const ContinuousNavParams& params() const { return params_; }

private:
    ContinuousNavParams params_;
    double position_ = 0.0;
    double velocity_ = 0.0;
    int step_ = 0;
};

} // namespace cfseq
