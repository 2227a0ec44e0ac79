#include <doctest.h>

#include "cfseq/envs/mini_farm.hpp"
#include "cfseq/envs/mini_highway.hpp"
#include "cfseq/errors.hpp"
#include "cfseq/policy.hpp"
#include "cfseq/registry.hpp"
#include "cfseq/trajectory.hpp"

using namespace cfseq;

TEST_CASE("untrained policy has an empty table and picks action 0") {
    const auto env = make_env("mini-farm");
    TrainConfig cfg;
    cfg.steps = 0;
    const QFunction q = train_tabular_q(*env, cfg);
    CHECK(q.table.empty());
    CHECK(q.greedy(env->observe()) == 0);
}

TEST_CASE("training is deterministic given the seed") {
    const auto env = make_env("mini-farm");
    TrainConfig cfg;
    cfg.steps = 3000;
    cfg.seed = 42;
    const QFunction a = train_tabular_q(*env, cfg);
    const QFunction b = train_tabular_q(*env, cfg);
    CHECK(a.table == b.table);
    cfg.seed = 43;
    const QFunction c = train_tabular_q(*env, cfg);
    CHECK(a.table != c.table);
}

TEST_CASE("training rejects continuous action spaces") {
    const auto env = make_env("continuous-nav");
    CHECK_THROWS_AS(train_tabular_q(*env, TrainConfig{}), UnsupportedError);
}

TEST_CASE("q_values contract") {
    const auto env = make_env("mini-farm");
    TrainConfig cfg;
    cfg.steps = 2000;
    cfg.seed = 7;
    const QFunction q = train_tabular_q(*env, cfg);

    // unseen state: zero vector of the right length
    State unseen{static_cast<double>(MiniFarm::kOverripe), 19.5, 29, 0, 2, 3};
    if (q.table.count(q.discretizer.key(unseen)) == 0) {
        const auto v = q.values(unseen);
        CHECK(v == std::vector<double>(11, 0.0));
    }
    // seen state: the stored row, and always the full action count
    REQUIRE_FALSE(q.table.empty());
    for (const auto& [key, row] : q.table) CHECK(row.size() == 11);
    const State start = env->observe();
    CHECK(q.values(start) == q.table.at(q.discretizer.key(start)));
}

TEST_CASE("greedy argmax is invariant under positive scaling") {
    QFunction q;
    q.env = "mini-farm";
    q.action_count = 4;
    q.discretizer.fields = {FieldBin::identity()};
    q.table["3"] = {0.5, 2.0, 2.0, -1.0};
    const State s{3.0};
    const int before = q.greedy(s);
    CHECK(before == 1); // lowest-index tie break between actions 1 and 2
    for (const double scale : {0.25, 3.0, 100.0}) {
        QFunction scaled = q;
        for (auto& [k, row] : scaled.table)
            for (auto& v : row) v *= scale;
        CHECK(scaled.greedy(s) == before);
    }
}

TEST_CASE("qfunction json round trip") {
    const auto env = make_env("mini-highway");
    TrainConfig cfg;
    cfg.steps = 1500;
    cfg.seed = 3;
    const QFunction q = train_tabular_q(*env, cfg);
    const nlohmann::json j = q;
    const QFunction back = j.get<QFunction>();
    CHECK(back.table == q.table);
    CHECK(back.action_count == q.action_count);
    CHECK(nlohmann::json(back).dump() == j.dump());
}

TEST_CASE("a policy that never fails yields no cases") {
    MiniHighwayParams p;
    p.vehicles = 0; // nothing to collide with
    MiniHighway env(p);
    const auto cases = collect_failures(
        env, [](const State&) { return Action::of(MiniHighway::kIdle); }, 20, 5, 11);
    CHECK(cases.empty());
}

TEST_CASE("early failures truncate the window to the available prefix") {
    // Watering 10 liters every day drowns the plant on day 3.
    const auto env = make_env("mini-farm");
    const auto cases = collect_failures(
        *env, [](const State&) { return Action::of(9); }, 3, 5, 17);
    REQUIRE_FALSE(cases.empty());
    for (const auto& c : cases) {
        CHECK(c.horizon_k == 3);
        CHECK(c.factual_actions.size() == 3);
        CHECK(c.failure_step == 3);
    }
}

TEST_CASE("collected highway cases replay to their failure") {
    const auto env = make_env("mini-highway");
    TrainConfig tc;
    tc.steps = 4000;
    tc.seed = 5;
    const QFunction q = train_tabular_q(*env, tc);
    const auto cases = collect_failures(*env, q, 60, 5, 23);
    REQUIRE_FALSE(cases.empty());
    for (const auto& c : cases) {
        const auto t = replay(*env, c.start_snapshot, c.factual_actions, c.window_config);
        REQUIRE(t.failed());
        CHECK(*t.failure_index == c.horizon_k);
        CHECK(c.window_config.length() == c.horizon_k);
    }
    // ids are unique and ordered
    for (std::size_t i = 1; i < cases.size(); ++i) CHECK(cases[i - 1].id < cases[i].id);
}

TEST_CASE("collect rejects k < 1") {
    const auto env = make_env("mini-farm");
    CHECK_THROWS_AS(collect_failures(
                        *env, [](const State&) { return Action::of(0); }, 1, 0, 1),
                    InputError);
}
