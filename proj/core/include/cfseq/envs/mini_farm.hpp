#pragma once

#include <map>
#include <string>

#include "cfseq/environment.hpp"

namespace cfseq {

/// Single-plant farm. Actions 0..9 apply (index + 1) liters of water; action
/// 10 harvests. Growth advances after enough consecutive days with soil
/// water inside the healthy band; the plant dies after too many consecutive
/// days outside it, or when left unharvested too long after ripening.
struct MiniFarmParams {
    double water_lo = 6.0;   // healthy band, liters
    double water_hi = 12.0;
    double water_max = 20.0; // soil capacity
    double evap = 0.3;       // fraction evaporating per day
    double rain_mean = 1.0;  // exponential rain, liters/day
    int d_stage = 3;         // in-band days per growth stage
    int d_die = 3;           // out-of-band days until death
    int d_overripe = 2;      // unharvested ripe days until overripe
    int d_ripe = 4;          // unharvested ripe days until death
    double r_harvest = 10.0;
    double r_stage = 1.0;
    double r_bad_harvest = -1.0; // harvesting anything that is not ripe
    double start_water = 8.0;
    int step_cap = 30;

    static MiniFarmParams from_map(const std::map<std::string, double>& kv);
};

class MiniFarm final : public Environment {
public:
    enum Stage { kSeed = 0, kSprout, kGrowing, kRipe, kOverripe, kDead, kHarvested };
    static constexpr int kHarvestAction = 10;

    explicit MiniFarm(MiniFarmParams params = {});

    std::string name() const override { return "mini-farm"; }
    ActionSpace action_space() const override { return ActionSpace::discrete(11); }
    int draw_arity() const override { return 1; } // rain
    int step_limit() const override { return params_.step_cap; }

    void reset() override;
    State observe() const override;
    int failure(const State& s) const override;
    StepOut step(const Action& a, std::span<const double> draw) override;
    Snapshot snapshot() const override;
    void restore(const Snapshot& s) override;
    std::unique_ptr<Environment> clone() const override;

    const MiniFarmParams& params() const { return params_; }

    /// Forces the internal state; for scripting scenarios in tests.
    void force_state(Stage stage, double soil_water, int day, int consec_in,
                     int consec_out, int ripe_days);

private:
    MiniFarmParams params_;
    Stage stage_ = kSeed;
    double soil_water_ = 0.0;
    int day_ = 0;
    int consec_in_ = 0;   // consecutive in-band days
    int consec_out_ = 0;  // consecutive out-of-band days
    int ripe_days_ = 0;   // days since ripening without harvest
};

} // namespace cfseq
