#include "cfseq/envs/mini_farm.hpp"

#include <algorithm>
#include <cmath>

#include "cfseq/errors.hpp"

namespace cfseq {

MiniFarmParams MiniFarmParams::from_map(const std::map<std::string, double>& kv) {
    MiniFarmParams p;
    auto get = [&](const char* key, double fallback) {
        auto it = kv.find(key);
        return it == kv.end() ? fallback : it->second;
    };
    p.water_lo = get("water_lo", p.water_lo);
    p.water_hi = get("water_hi", p.water_hi);
    p.water_max = get("water_max", p.water_max);
    p.evap = get("evap", p.evap);
    p.rain_mean = get("rain_mean", p.rain_mean);
    p.d_stage = static_cast<int>(get("d_stage", p.d_stage));
    p.d_die = static_cast<int>(get("d_die", p.d_die));
    p.d_overripe = static_cast<int>(get("d_overripe", p.d_overripe));
    p.d_ripe = static_cast<int>(get("d_ripe", p.d_ripe));
    p.r_harvest = get("r_harvest", p.r_harvest);
    p.r_stage = get("r_stage", p.r_stage);
    p.r_bad_harvest = get("r_bad_harvest", p.r_bad_harvest);
    p.start_water = get("start_water", p.start_water);
    p.step_cap = static_cast<int>(get("step_cap", p.step_cap));
    if (!(p.water_lo < p.water_hi) || p.water_max <= 0)
        throw InputError("mini-farm: bad water band");
    return p;
}

MiniFarm::MiniFarm(MiniFarmParams params) : params_(params) { reset(); }

void MiniFarm::reset() {
    stage_ = kSeed;
    soil_water_ = params_.start_water;
    day_ = 0;
    consec_in_ = consec_out_ = ripe_days_ = 0;
}

void MiniFarm::force_state(Stage stage, double soil_water, int day, int consec_in,
                           int consec_out, int ripe_days) {
    stage_ = stage;
    soil_water_ = soil_water;
    day_ = day;
    consec_in_ = consec_in;
    consec_out_ = consec_out;
    ripe_days_ = ripe_days;
}

State MiniFarm::observe() const {
    return {static_cast<double>(stage_), soil_water_,      static_cast<double>(day_),
            static_cast<double>(consec_in_), static_cast<double>(consec_out_),
            static_cast<double>(ripe_days_)};
}

int MiniFarm::failure(const State& s) const {
    if (s.size() != 6) throw InputError("mini-farm: malformed state vector");
    return static_cast<int>(s[0]) == kDead ? 1 : 0;
}

StepOut MiniFarm::step(const Action& a, std::span<const double> draw) {
    check_action(action_space(), a);
    if (static_cast<int>(draw.size()) != draw_arity())
        throw InputError("mini-farm: wrong draw arity");

    StepOut out;
    if (stage_ == kDead || stage_ == kHarvested) {
        out.done = true; // absorbing
        return out;
    }
    const Stage entry_stage = stage_;

    double water_applied = 0.0;
    if (a.index == kHarvestAction) {
        if (stage_ == kRipe) {
            stage_ = kHarvested;
            out.reward = params_.r_harvest;
            out.done = true;
            return out;
        }
        out.reward += params_.r_bad_harvest; // the day still passes, unwatered
    } else {
        water_applied = static_cast<double>(a.index + 1);
    }

    // Inverse-CDF exponential rain from the uniform draw; u = 0 means no rain.
    const double rain = -params_.rain_mean * std::log(1.0 - draw[0]);
    soil_water_ = std::clamp(soil_water_ * (1.0 - params_.evap) + water_applied + rain,
                             0.0, params_.water_max);

    const bool in_band = soil_water_ >= params_.water_lo && soil_water_ <= params_.water_hi;
    if (in_band) {
        ++consec_in_;
        consec_out_ = 0;
    } else {
        ++consec_out_;
        consec_in_ = 0;
    }

    if (stage_ <= kGrowing && consec_in_ >= params_.d_stage) {
        stage_ = static_cast<Stage>(stage_ + 1);
        consec_in_ = 0;
        out.reward += params_.r_stage;
    }

    if (consec_out_ >= params_.d_die) stage_ = kDead;

    // The ripe clock counts full days spent unharvested after ripening, so
    // the day the plant ripens does not count against it.
    if (stage_ != kDead && (entry_stage == kRipe || entry_stage == kOverripe)) {
        ++ripe_days_;
        if (ripe_days_ >= params_.d_ripe)
            stage_ = kDead;
        else if (ripe_days_ >= params_.d_overripe)
            stage_ = kOverripe;
    }

    ++day_;
    out.done = stage_ == kDead || day_ >= params_.step_cap;
    return out;
}

Snapshot MiniFarm::snapshot() const {
    return Snapshot::pack(name(), schema_version(),
                          {static_cast<double>(stage_), soil_water_,
                           static_cast<double>(day_), static_cast<double>(consec_in_),
                           static_cast<double>(consec_out_),
                           static_cast<double>(ripe_days_)});
}

void MiniFarm::restore(const Snapshot& snap) {
    const auto p = snap.unpack(name(), schema_version());
    if (p.size() != 6) throw InputError("mini-farm: snapshot payload size mismatch");
    stage_ = static_cast<Stage>(static_cast<int>(p[0]));
    soil_water_ = p[1];
    day_ = static_cast<int>(p[2]);
    consec_in_ = static_cast<int>(p[3]);
    consec_out_ = static_cast<int>(p[4]);
    ripe_days_ = static_cast<int>(p[5]);
}

std::unique_ptr<Environment> MiniFarm::clone() const {
    return std::make_unique<MiniFarm>(*this);
}

} // namespace cfseq
