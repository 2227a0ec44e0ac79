#include "cfseq/envs/continuous_nav.hpp"

#include <algorithm>
#include <cmath>

#include "cfseq/errors.hpp"

namespace cfseq {

ContinuousNavParams ContinuousNavParams::from_map(const std::map<std::string, double>& kv) {
    ContinuousNavParams p;
    auto get = [&](const char* key, double fallback) {
        auto it = kv.find(key);
        return it == kv.end() ? fallback : it->second;
    };
    p.pos_lo = get("pos_lo", p.pos_lo);
    p.pos_hi = get("pos_hi", p.pos_hi);
    p.vel_lo = get("vel_lo", p.vel_lo);
    p.vel_hi = get("vel_hi", p.vel_hi);
    p.act_lo = get("act_lo", p.act_lo);
    p.act_hi = get("act_hi", p.act_hi);
    p.obstacle_lo = get("obstacle_lo", p.obstacle_lo);
    p.obstacle_hi = get("obstacle_hi", p.obstacle_hi);
    p.goal = get("goal", p.goal);
    p.goal_tol = get("goal_tol", p.goal_tol);
    p.sigma_wind = get("sigma_wind", p.sigma_wind);
    p.step_cap = static_cast<int>(get("step_cap", p.step_cap));
    return p;
}

ContinuousNav::ContinuousNav(ContinuousNavParams params) : params_(params) { reset(); }

void ContinuousNav::reset() {
    position_ = params_.pos_lo;
    velocity_ = 0.0;
    step_ = 0;
}

State ContinuousNav::observe() const { return {position_, velocity_}; }

int ContinuousNav::failure(const State& s) const {
    if (s.size() != 2) throw InputError("continuous-nav: malformed state vector");
    return (s[0] >= params_.obstacle_lo && s[0] <= params_.obstacle_hi) ? 1 : 0;
}

StepOut ContinuousNav::step(const Action& a, std::span<const double> draw) {
    check_action(action_space(), a);
    if (static_cast<int>(draw.size()) != draw_arity())
        throw InputError("continuous-nav: wrong draw arity");

    velocity_ = std::clamp(velocity_ + a.vec[0] + params_.sigma_wind * draw[0],
                           params_.vel_lo, params_.vel_hi);
    position_ = std::clamp(position_ + velocity_, params_.pos_lo, params_.pos_hi);
    ++step_;

    const int crash = failure(observe());
    StepOut out;
    out.reward = -std::abs(position_ - params_.goal);
    out.done = crash == 1 || std::abs(position_ - params_.goal) <= params_.goal_tol ||
               step_ >= params_.step_cap;
    return out;
}

Snapshot ContinuousNav::snapshot() const {
    return Snapshot::pack(name(), schema_version(),
                          {position_, velocity_, static_cast<double>(step_)});
}

void ContinuousNav::restore(const Snapshot& snap) {
    const auto p = snap.unpack(name(), schema_version());
    if (p.size() != 3) throw InputError("continuous-nav: snapshot payload size mismatch");
    position_ = p[0];
    velocity_ = p[1];
    step_ = static_cast<int>(p[2]);
}

std::unique_ptr<Environment> ContinuousNav::clone() const {
    return std::make_unique<ContinuousNav>(*this);
}

} // namespace cfseq
