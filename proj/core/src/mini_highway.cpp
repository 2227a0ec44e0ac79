#include "cfseq/envs/mini_highway.hpp"

#include <algorithm>

#include "cfseq/errors.hpp"

namespace cfseq {

namespace {
int positive_mod(int v, int m) { return ((v % m) + m) % m; }
} // namespace

MiniHighwayParams MiniHighwayParams::from_map(const std::map<std::string, double>& kv) {
    MiniHighwayParams p;
    auto get = [&](const char* key, double fallback) {
        auto it = kv.find(key);
        return it == kv.end() ? fallback : it->second;
    };
    p.lanes = static_cast<int>(get("lanes", p.lanes));
    p.cells = static_cast<int>(get("cells", p.cells));
    p.vehicles = static_cast<int>(get("vehicles", p.vehicles));
    p.ego_max_speed = static_cast<int>(get("ego_max_speed", p.ego_max_speed));
    p.other_max_speed = static_cast<int>(get("other_max_speed", p.other_max_speed));
    p.p_lane = get("p_lane", p.p_lane);
    p.w_speed = get("w_speed", p.w_speed);
    p.w_crash = get("w_crash", p.w_crash);
    p.w_lane = get("w_lane", p.w_lane);
    p.step_cap = static_cast<int>(get("step_cap", p.step_cap));
    if (p.lanes < 1 || p.cells < 4 || p.vehicles < 0)
        throw InputError("mini-highway: bad geometry");
    return p;
}

MiniHighway::MiniHighway(MiniHighwayParams params) : params_(params) { reset(); }

void MiniHighway::reset() {
    step_ = 0;
    fleet_.assign(static_cast<std::size_t>(params_.vehicles) + 1, Vehicle{});
    // Ego starts mid-grid; traffic is seeded ahead at staggered lanes/speeds.
    fleet_[0] = {std::min(1, params_.lanes - 1), 0, 1};
    const int spread = std::max(3, params_.cells / (params_.vehicles + 1));
    for (int i = 0; i < params_.vehicles; ++i) {
        Vehicle v;
        v.lane = i % params_.lanes;
        v.cell = positive_mod(4 + i * spread, params_.cells);
        v.speed = 1 + (i % std::max(1, params_.other_max_speed));
        fleet_[static_cast<std::size_t>(i) + 1] = v;
    }
}

void MiniHighway::place_vehicle(int i, int lane, int cell, int speed) {
    if (i < 0 || i >= static_cast<int>(fleet_.size()))
        throw InputError("mini-highway: vehicle index out of range");
    fleet_[static_cast<std::size_t>(i)] = {lane, positive_mod(cell, params_.cells), speed};
}

State MiniHighway::observe() const {
    State s;
    s.reserve(fleet_.size() * 3);
    for (const auto& v : fleet_) {
        s.push_back(static_cast<double>(v.lane));
        s.push_back(static_cast<double>(v.cell));
        s.push_back(static_cast<double>(v.speed));
    }
    return s;
}

int MiniHighway::failure(const State& s) const {
    const std::size_t n = fleet_.size();
    if (s.size() != n * 3) throw InputError("mini-highway: malformed state vector");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (s[i * 3] == s[j * 3] && s[i * 3 + 1] == s[j * 3 + 1]) return 1;
    return 0;
}

bool MiniHighway::occupied(const std::vector<Vehicle>& vs, int lane, int cell,
                           int except) const {
    for (int i = 0; i < static_cast<int>(vs.size()); ++i)
        if (i != except && vs[static_cast<std::size_t>(i)].lane == lane &&
            vs[static_cast<std::size_t>(i)].cell == cell)
            return true;
    return false;
}

int MiniHighway::gap_ahead(const std::vector<Vehicle>& vs, int self) const {
    // Empty cells between `self` and the nearest vehicle ahead in its lane.
    const auto& me = vs[static_cast<std::size_t>(self)];
    int best = params_.cells - 1;
    for (int i = 0; i < static_cast<int>(vs.size()); ++i) {
        if (i == self) continue;
        const auto& other = vs[static_cast<std::size_t>(i)];
        if (other.lane != me.lane) continue;
        const int ahead = positive_mod(other.cell - me.cell, params_.cells);
        if (ahead == 0) continue; // already overlapping; collision handles it
        best = std::min(best, ahead - 1);
    }
    return best;
}

StepOut MiniHighway::step(const Action& a, std::span<const double> draw) {
    check_action(action_space(), a);
    if (static_cast<int>(draw.size()) != draw_arity())
        throw InputError("mini-highway: wrong draw arity");

    Vehicle& ego = fleet_[0];
    switch (a.index) {
        case kLeft: ego.lane = std::max(0, ego.lane - 1); break;
        case kRight: ego.lane = std::min(params_.lanes - 1, ego.lane + 1); break;
        case kFaster: ego.speed = std::min(params_.ego_max_speed, ego.speed + 1); break;
        case kSlower: ego.speed = std::max(0, ego.speed - 1); break;
        case kIdle: break;
        default: throw InputError("mini-highway: action index out of range");
    }

    // Other vehicles decide in index order against current occupancy; all
    // positions advance simultaneously afterwards.
    for (int i = 0; i < params_.vehicles; ++i) {
        Vehicle& v = fleet_[static_cast<std::size_t>(i) + 1];
        const double u_change = draw[static_cast<std::size_t>(2 * i)];
        const double u_dir = draw[static_cast<std::size_t>(2 * i + 1)];
        if (u_change < params_.p_lane) {
            const int dir = (u_dir < 0.5) ? -1 : 1;
            const int target = v.lane + dir;
            if (target >= 0 && target < params_.lanes &&
                !occupied(fleet_, target, v.cell, i + 1))
                v.lane = target;
        }
        v.speed = std::min(v.speed + 1, params_.other_max_speed);
        v.speed = std::min(v.speed, gap_ahead(fleet_, i + 1)); // never drive through
        v.speed = std::max(v.speed, 0);
    }

    for (auto& v : fleet_) v.cell = positive_mod(v.cell + v.speed, params_.cells);
    ++step_;

    const int crash = failure(observe());
    StepOut out;
    out.reward = params_.w_speed * ego.speed - params_.w_crash * crash -
                 params_.w_lane * (ego.lane != params_.lanes - 1 ? 1.0 : 0.0);
    out.done = crash == 1 || step_ >= params_.step_cap;
    return out;
}

Snapshot MiniHighway::snapshot() const {
    std::vector<double> payload;
    payload.push_back(static_cast<double>(step_));
    const State s = observe();
    payload.insert(payload.end(), s.begin(), s.end());
    return Snapshot::pack(name(), schema_version(), payload);
}

void MiniHighway::restore(const Snapshot& snap) {
    const auto payload = snap.unpack(name(), schema_version());
    if (payload.size() != 1 + fleet_.size() * 3)
        throw InputError("mini-highway: snapshot payload size mismatch");
    step_ = static_cast<int>(payload[0]);
    for (std::size_t i = 0; i < fleet_.size(); ++i) {
        fleet_[i].lane = static_cast<int>(payload[1 + i * 3]);
        fleet_[i].cell = static_cast<int>(payload[2 + i * 3]);
        fleet_[i].speed = static_cast<int>(payload[3 + i * 3]);
    }
}

std::unique_ptr<Environment> MiniHighway::clone() const {
    return std::make_unique<MiniHighway>(*this);
}

} // namespace cfseq
