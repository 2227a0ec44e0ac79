#include <doctest.h>

#include <cmath>
#include <numeric>

#include "cfseq/envs/continuous_nav.hpp"
#include "cfseq/errors.hpp"
#include "cfseq/properties.hpp"
#include "test_support.hpp"

using namespace cfseq;

namespace {

std::vector<Action> seq(std::initializer_list<int> idx) {
    std::vector<Action> out;
    for (const int i : idx) out.push_back(Action::of(i));
    return out;
}

std::vector<Action> cseq(std::initializer_list<double> vals) {
    std::vector<Action> out;
    for (const double v : vals) out.push_back(Action::of(std::vector<double>{v}));
    return out;
}

const ActionSpace kD5 = ActionSpace::discrete(5);
const ActionSpace kC1 = ActionSpace::continuous({-1.0}, {1.0});

std::vector<Action> random_seq(Rng& rng, int k, int count) {
    std::vector<Action> out;
    for (int i = 0; i < k; ++i) out.push_back(Action::of(rng.next_below(count)));
    return out;
}

} // namespace

TEST_CASE("proximity of identical sequences is zero") {
    const auto a = seq({0, 1, 2, 3, 4});
    CHECK(proximity(a, a, kD5) == 0.0);
    CHECK(sparsity(a, a, kD5) == 0);
    CHECK(recency(a, a, kD5) == 0.0);
}

TEST_CASE("discrete proximity: one change in five is 0.2") {
    const auto a = seq({0, 0, 0, 0, 0});
    const auto b = seq({0, 0, 1, 0, 0});
    CHECK(proximity(a, b, kD5) == 0.2);
}

TEST_CASE("continuous proximity is range-normalized") {
    const auto a = cseq({0.0, 0.0});
    const auto b = cseq({0.5, -0.5});
    CHECK(proximity(a, b, kC1) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("sparsity counts changed positions") {
    CHECK(sparsity(seq({0, 1, 2}), seq({1, 1, 3}), kD5) == 2);
    // a 0.005 wiggle is below an explicit eps of 0.01
    CHECK(sparsity(cseq({0.0}), cseq({0.005}), kC1, 0.01) == 0);
    CHECK(sparsity(cseq({0.0}), cseq({0.005}), kC1) == 1); // default eps is tiny
}

TEST_CASE("recency hand values") {
    const auto a = seq({0, 0, 0, 0, 0});
    CHECK(recency(a, seq({1, 0, 0, 0, 0}), kD5) == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(recency(a, seq({0, 0, 0, 0, 1}), kD5) ==
          doctest::Approx(2.0 / 30).epsilon(1e-12)); // most recent is cheapest
    CHECK(recency(a, seq({1, 1, 1, 1, 1}), kD5) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("recency weights sum to one for k up to 20") {
    for (int k = 1; k <= 20; ++k) {
        const auto w = recency_weights(k);
        const double sum = std::accumulate(w.begin(), w.end(), 0.0);
        CHECK(std::abs(sum - 1.0) < 1e-12);
        for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i] > w[i - 1]);
    }
}

TEST_CASE("length mismatches are input errors") {
    CHECK_THROWS_AS(proximity(seq({0, 1}), seq({0}), kD5), InputError);
    CHECK_THROWS_AS(sparsity(seq({0}), seq({0, 1}), kD5), InputError);
    CHECK_THROWS_AS(recency(seq({}), seq({}), kD5), InputError);
}

TEST_CASE("symmetry and the discrete identity over random pairs") {
    Rng rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const int k = 1 + rng.next_below(8);
        const auto a = random_seq(rng, k, 5);
        const auto b = random_seq(rng, k, 5);
        CHECK(proximity(a, b, kD5) == proximity(b, a, kD5));
        CHECK(sparsity(a, b, kD5) == sparsity(b, a, kD5));
        CHECK(recency(a, b, kD5) == recency(b, a, kD5));
        CHECK(proximity(a, b, kD5) == static_cast<double>(sparsity(a, b, kD5)) / k);
    }
}

TEST_CASE("changing one more position never decreases the change metrics") {
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const int k = 2 + rng.next_below(7);
        const auto a = random_seq(rng, k, 5);
        auto b = a;
        double last_prox = 0.0, last_rec = 0.0;
        int last_sparse = 0;
        std::vector<int> order(k);
        std::iota(order.begin(), order.end(), 0);
        for (int i = k - 1; i > 0; --i) std::swap(order[i], order[rng.next_below(i + 1)]);
        for (const int pos : order) {
            b[pos].index = (a[pos].index + 1 + rng.next_below(4)) % 5;
            const double prox = proximity(a, b, kD5);
            const double rec = recency(a, b, kD5);
            const int sparse = sparsity(a, b, kD5);
            CHECK(prox >= last_prox);
            CHECK(rec >= last_rec);
            CHECK(sparse >= last_sparse);
            last_prox = prox;
            last_rec = rec;
            last_sparse = sparse;
        }
    }
}

TEST_CASE("validity: the factual sequence never qualifies") {
    MiniHighway env;
    const auto c = test::highway_rear_end_case(env);
    CHECK(validity(env, c, c.factual_actions) == 0);
}

TEST_CASE("validity: braking avoids the scripted rear-end crash") {
    MiniHighway env;
    const auto c = test::highway_rear_end_case(env);
    const std::vector<Action> slower{Action::of(MiniHighway::kSlower)};
    const std::vector<Action> right{Action::of(MiniHighway::kRight)};
    const std::vector<Action> idle{Action::of(MiniHighway::kIdle)};
    CHECK(validity(env, c, slower) == 1);
    CHECK(validity(env, c, right) == 1);
    CHECK(validity(env, c, idle) == 1); // lands one cell short of the stopped car
    CHECK_THROWS_AS(validity(env, c, seq({0, 0})), InputError);
}

TEST_CASE("validity: harvesting at the first ripe day saves the plant") {
    MiniFarm env;
    const auto c = test::farm_overripe_case(env);
    auto candidate = c.factual_actions;
    candidate[6] = Action::of(MiniFarm::kHarvestAction);
    CHECK(validity(env, c, candidate) == 1);
    candidate = c.factual_actions;
    candidate[8] = Action::of(MiniFarm::kHarvestAction); // already overripe
    CHECK(validity(env, c, candidate) == 0);
}

TEST_CASE("full-window validity implies terminal-only validity") {
    MiniFarm env;
    const auto c = test::farm_overripe_case(env);
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        auto candidate = c.factual_actions;
        candidate[rng.next_below(10)] = Action::of(rng.next_below(11));
        const int full = validity(env, c, candidate, ValidityMode::FullWindow);
        const int term = validity(env, c, candidate, ValidityMode::TerminalOnly);
        if (full == 1) CHECK(term == 1);
    }
}

TEST_CASE("stochastic uncertainty is deterministic and quantized") {
    MiniFarm env;
    const auto c = test::farm_overripe_case(env);
    auto candidate = c.factual_actions;
    candidate[6] = Action::of(MiniFarm::kHarvestAction);
    const double a = stochastic_uncertainty(env, c, candidate, 20, 99);
    const double b = stochastic_uncertainty(env, c, candidate, 20, 99);
    CHECK(a == b);
    CHECK(a >= 0.0);
    CHECK(a <= 1.0);
    const double scaled = a * 20.0;
    CHECK(std::abs(scaled - std::round(scaled)) < 1e-9);
}

TEST_CASE("zero-variance draws make certainty equal validity") {
    // p_lane = 0 means the highway ignores its draws entirely.
    MiniHighwayParams p;
    p.vehicles = 1;
    p.other_max_speed = 0;
    p.p_lane = 0.0;
    MiniHighway env(p);
    env.place_vehicle(0, 0, 0, 1);
    env.place_vehicle(1, 0, 2, 0);
    StochasticConfig cfg;
    cfg.draws = {std::vector<double>(2, 0.0)};
    const auto c = test::finish_case(env, env.snapshot(), {Action::of(MiniHighway::kFaster)},
                                     cfg, "zero-var");
    const std::vector<Action> slower{Action::of(MiniHighway::kSlower)};
    const std::vector<Action> faster{Action::of(MiniHighway::kFaster)};
    for (const int m : {1, 5, 20}) {
        CHECK(stochastic_uncertainty(env, c, slower, m, 3) == 1.0);
        CHECK(stochastic_uncertainty(env, c, faster, m, 3) == 0.0);
    }
}

TEST_CASE("a candidate that fails under every config scores zero") {
    MiniHighway env;
    const auto c = test::highway_walled_case(env);
    for (const auto action : {MiniHighway::kIdle, MiniHighway::kFaster, MiniHighway::kLeft}) {
        const std::vector<Action> candidate{Action::of(action)};
        CHECK(stochastic_uncertainty(env, c, candidate, 20, 7) == 0.0);
    }
}

TEST_CASE("evaluate_properties composes the five evaluators") {
    MiniFarm env;
    const auto c = test::farm_overripe_case(env);
    PropertySettings settings;
    settings.mc_samples = 10;
    const std::uint64_t mc_seed = 31337;
    PropertyEvaluator eval(env, c, settings, mc_seed);

    auto candidate = c.factual_actions;
    candidate[6] = Action::of(MiniFarm::kHarvestAction);
    candidate[2] = Action::of(3);
    const PropertyVector got = eval.evaluate(candidate);

    const ActionSpace space = env.action_space();
    CHECK(got.validity == validity(env, c, candidate, settings.mode));
    CHECK(got.proximity == proximity(c.factual_actions, candidate, space));
    CHECK(got.sparsity == sparsity(c.factual_actions, candidate, space, settings.eps));
    CHECK(got.stochastic_certainty ==
          stochastic_uncertainty(env, c, candidate, settings.mc_samples, mc_seed, settings.mode));
    CHECK(got.recency == recency(c.factual_actions, candidate, space, settings.eps));
}

TEST_CASE("self-comparison yields the degenerate property vector") {
    MiniFarm env;
    const auto c = test::farm_overripe_case(env);
    PropertySettings settings;
    settings.mc_samples = 5;
    PropertyEvaluator eval(env, c, settings, 1);
    const PropertyVector p = eval.evaluate(c.factual_actions);
    CHECK(p.validity == 0);
    CHECK(p.proximity == 0.0);
    CHECK(p.sparsity == 0);
    CHECK(p.recency == 0.0);
}

TEST_CASE("recency is zero exactly when sparsity is zero") {
    Rng rng(808);
    for (int trial = 0; trial < 200; ++trial) {
        const int k = 1 + rng.next_below(10);
        const auto a = random_seq(rng, k, 5);
        const auto b = rng.next_bernoulli(0.3) ? a : random_seq(rng, k, 5);
        const bool zero_sparse = sparsity(a, b, kD5) == 0;
        const bool zero_recent = recency(a, b, kD5) == 0.0;
        CHECK(zero_sparse == zero_recent);
    }
}
