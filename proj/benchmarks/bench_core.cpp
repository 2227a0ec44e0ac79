#include <benchmark/benchmark.h>

#include "cfseq/envs/mini_highway.hpp"
#include "cfseq/nsga2.hpp"
#include "cfseq/registry.hpp"
#include "cfseq/trajectory.hpp"

using namespace cfseq;

namespace {

std::vector<Candidate> random_population(int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Candidate> pop;
    for (int i = 0; i < n; ++i) {
        Candidate c;
        c.objectives = {rng.next_u01(), static_cast<double>(rng.next_below(6)), rng.next_u01(),
                        rng.next_u01()};
        c.feasible = rng.next_bernoulli(0.7);
        pop.push_back(c);
    }
    return pop;
}

FailureCase scripted_case(MiniHighway& env) {
    MiniHighwayParams p;
    p.vehicles = 1;
    p.other_max_speed = 0;
    env = MiniHighway(p);
    env.place_vehicle(0, 0, 0, 1);
    env.place_vehicle(1, 0, 2, 0);
    FailureCase c;
    c.id = "bench";
    c.env = env.name();
    c.start_snapshot = env.snapshot();
    c.factual_actions = {Action::of(MiniHighway::kFaster)};
    c.window_config.draws = {std::vector<double>(2, 0.0)};
    c.horizon_k = 1;
    return c;
}

} // namespace

static void BM_SampleConfig(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(sample_config(42, static_cast<int>(state.range(0)), 10));
}
BENCHMARK(BM_SampleConfig)->Arg(40)->Arg(400);

static void BM_HighwayEpisodeReplay(benchmark::State& state) {
    const auto env = make_env("mini-highway");
    const auto start = env->snapshot();
    const auto cfg = sample_config(7, env->step_limit(), env->draw_arity());
    const std::vector<Action> actions(static_cast<std::size_t>(env->step_limit()),
                                      Action::of(MiniHighway::kIdle));
    for (auto _ : state) benchmark::DoNotOptimize(replay(*env, start, actions, cfg));
}
BENCHMARK(BM_HighwayEpisodeReplay);

static void BM_NondominatedSort(benchmark::State& state) {
    const auto pop = random_population(static_cast<int>(state.range(0)), 5);
    for (auto _ : state) benchmark::DoNotOptimize(fast_nondominated_sort(pop));
}
BENCHMARK(BM_NondominatedSort)->Arg(64)->Arg(256);

static void BM_CrowdingDistance(benchmark::State& state) {
    const auto pop = random_population(static_cast<int>(state.range(0)), 6);
    std::vector<int> front(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) front[i] = static_cast<int>(i);
    for (auto _ : state) benchmark::DoNotOptimize(crowding_distance(pop, front));
}
BENCHMARK(BM_CrowdingDistance)->Arg(64)->Arg(256);

static void BM_EvolveScriptedCase(benchmark::State& state) {
    MiniHighway env;
    const FailureCase c = scripted_case(env);
    NsgaConfig cfg;
    cfg.population = 20;
    cfg.generations = 3;
    cfg.seed = 1;
    PropertySettings props;
    props.mc_samples = 10;
    for (auto _ : state) benchmark::DoNotOptimize(evolve(env, c, cfg, props));
}
BENCHMARK(BM_EvolveScriptedCase);

BENCHMARK_MAIN();
