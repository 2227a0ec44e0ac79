#include "cfseq/policy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cfseq/envs/mini_highway.hpp"
#include "cfseq/errors.hpp"
#include "cfseq/stochastic.hpp"
#include "cfseq/trajectory.hpp"

namespace cfseq {

using nlohmann::json;

FieldBin FieldBin::ignore() {
    FieldBin b;
    b.mode = Mode::Ignore;
    return b;
}

FieldBin FieldBin::uniform(double lo, double hi, int bins) {
    if (!(lo < hi) || bins < 1) throw InputError("uniform bin needs lo < hi and bins >= 1");
    FieldBin b;
    b.mode = Mode::Uniform;
    b.lo = lo;
    b.hi = hi;
    b.bins = bins;
    return b;
}

FieldBin FieldBin::cyclic_delta(int ref, int modulus, int clip) {
    if (modulus < 1 || clip < 0) throw InputError("cyclic bin needs modulus >= 1, clip >= 0");
    FieldBin b;
    b.mode = Mode::CyclicDelta;
    b.ref = ref;
    b.modulus = modulus;
    b.clip = clip;
    return b;
}

std::string Discretizer::key(const State& s) const {
    if (s.size() != fields.size())
        throw InputError("discretizer: state has " + std::to_string(s.size()) +
                         " fields, expected " + std::to_string(fields.size()));
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const FieldBin& f = fields[i];
        long token = 0;
        switch (f.mode) {
            case FieldBin::Mode::Ignore:
                continue;
            case FieldBin::Mode::Identity:
                token = std::lround(s[i]);
                break;
            case FieldBin::Mode::Uniform: {
                const double x = std::clamp(s[i], f.lo, f.hi);
                token = std::min<long>(f.bins - 1,
                                       static_cast<long>((x - f.lo) / (f.hi - f.lo) * f.bins));
                break;
            }
            case FieldBin::Mode::CyclicDelta: {
                const long raw = std::lround(s[i]) - std::lround(s[static_cast<std::size_t>(f.ref)]);
                long d = ((raw % f.modulus) + f.modulus) % f.modulus;
                if (d > f.modulus / 2) d -= f.modulus; // signed shortest distance
                token = std::clamp<long>(d, -f.clip, f.clip);
                break;
            }
        }
        if (!out.empty()) out += ',';
        out += std::to_string(token);
    }
    return out;
}

Discretizer default_discretizer(const Environment& env) {
    Discretizer d;
    const std::string name = env.name();
    if (name == "mini-highway") {
        const auto* hw = dynamic_cast<const MiniHighway*>(&env);
        const int cells = hw != nullptr ? hw->params().cells : 20;
        const int n_fields = static_cast<int>(env.observe().size());
        const int cells_field = 1; // ego cell is the cyclic reference
        d.fields.push_back(FieldBin::identity());  // ego lane
        d.fields.push_back(FieldBin::ignore());    // ego cell (ring road is shift-invariant)
        d.fields.push_back(FieldBin::identity());  // ego speed
        for (int i = 3; i < n_fields; i += 3) {
            d.fields.push_back(FieldBin::identity());                       // lane
            d.fields.push_back(FieldBin::cyclic_delta(cells_field, cells, 6)); // cell vs ego
            d.fields.push_back(FieldBin::identity());                       // speed
        }
        return d;
    }
    if (name == "mini-farm") {
        d.fields.push_back(FieldBin::identity());            // stage
        d.fields.push_back(FieldBin::uniform(0.0, 20.0, 10)); // soil water
        d.fields.push_back(FieldBin::ignore());              // day
        d.fields.push_back(FieldBin::identity());            // consecutive in-band
        d.fields.push_back(FieldBin::identity());            // consecutive out-of-band
        d.fields.push_back(FieldBin::identity());            // ripe days
        return d;
    }
    throw UnsupportedError("no default discretizer for environment: " + name);
}

std::vector<double> QFunction::values(const State& s) const {
    const auto it = table.find(discretizer.key(s));
    if (it == table.end()) return std::vector<double>(static_cast<std::size_t>(action_count), 0.0);
    return it->second;
}

int QFunction::greedy(const State& s) const {
    const auto v = values(s);
    int best = 0;
    for (int a = 1; a < static_cast<int>(v.size()); ++a)
        if (v[static_cast<std::size_t>(a)] > v[static_cast<std::size_t>(best)]) best = a;
    return best;
}

void to_json(json& j, const QFunction& q) {
    json fields = json::array();
    for (const auto& f : q.discretizer.fields) {
        switch (f.mode) {
            case FieldBin::Mode::Identity:
                fields.push_back(json{{"mode", "identity"}});
                break;
            case FieldBin::Mode::Ignore:
                fields.push_back(json{{"mode", "ignore"}});
                break;
            case FieldBin::Mode::Uniform:
                fields.push_back(json{{"mode", "uniform"}, {"lo", f.lo}, {"hi", f.hi}, {"bins", f.bins}});
                break;
            case FieldBin::Mode::CyclicDelta:
                fields.push_back(json{{"mode", "cyclic_delta"},
                                      {"ref", f.ref},
                                      {"modulus", f.modulus},
                                      {"clip", f.clip}});
                break;
        }
    }
    j = json{{"env", q.env},
             {"action_count", q.action_count},
             {"discretizer", {{"fields", fields}}},
             {"table", q.table}};
}

void from_json(const json& j, QFunction& q) {
    q.env = j.at("env").get<std::string>();
    q.action_count = j.at("action_count").get<int>();
    q.discretizer.fields.clear();
    for (const auto& fj : j.at("discretizer").at("fields")) {
        const auto mode = fj.at("mode").get<std::string>();
        if (mode == "identity")
            q.discretizer.fields.push_back(FieldBin::identity());
        else if (mode == "ignore")
            q.discretizer.fields.push_back(FieldBin::ignore());
        else if (mode == "uniform")
            q.discretizer.fields.push_back(FieldBin::uniform(fj.at("lo").get<double>(),
                                                             fj.at("hi").get<double>(),
                                                             fj.at("bins").get<int>()));
        else if (mode == "cyclic_delta")
            q.discretizer.fields.push_back(FieldBin::cyclic_delta(fj.at("ref").get<int>(),
                                                                  fj.at("modulus").get<int>(),
                                                                  fj.at("clip").get<int>()));
        else
            throw InputError("unknown discretizer field mode: " + mode);
    }
    q.table = j.at("table").get<std::map<std::string, std::vector<double>>>();
    for (const auto& [key, row] : q.table)
        if (static_cast<int>(row.size()) != q.action_count)
            throw InputError("q table row '" + key + "' has wrong action count");
}

QFunction train_tabular_q(const Environment& proto, const TrainConfig& config) {
    if (!proto.action_space().is_discrete())
        throw UnsupportedError("tabular Q training needs a discrete action space: " +
                               proto.name());

    QFunction q;
    q.env = proto.name();
    q.action_count = proto.action_space().count;
    q.discretizer = default_discretizer(proto);

    auto env = proto.clone();
    Rng explore(child_seed(config.seed, "train-explore"));

    auto row = [&](const std::string& key) -> std::vector<double>& {
        auto [it, inserted] =
            q.table.try_emplace(key, std::vector<double>(static_cast<std::size_t>(q.action_count), 0.0));
        return it->second;
    };
    auto greedy_of = [&](const std::vector<double>& v) {
        int best = 0;
        for (int a = 1; a < static_cast<int>(v.size()); ++a)
            if (v[static_cast<std::size_t>(a)] > v[static_cast<std::size_t>(best)]) best = a;
        return best;
    };

    long episode = 0;
    int t = 0;
    env->reset();
    StochasticConfig draws =
        sample_config(child_seed(config.seed, "train-ep:" + std::to_string(episode)),
                      env->step_limit(), env->draw_arity());
    State state = env->observe();

    for (long step = 0; step < config.steps; ++step) {
        const double frac =
            config.eps_decay_steps > 0
                ? std::min(1.0, static_cast<double>(step) / static_cast<double>(config.eps_decay_steps))
                : 1.0;
        const double eps = config.eps_start + (config.eps_end - config.eps_start) * frac;

        const std::string key = q.discretizer.key(state);
        auto& values = row(key);
        const int action = explore.next_bernoulli(eps) ? explore.next_below(q.action_count)
                                                       : greedy_of(values);

        const StepOut out = env->step(Action::of(action), draws.draws[static_cast<std::size_t>(t)]);
        ++t;
        const State next = env->observe();

        double target = out.reward;
        if (!out.done) {
            const auto it = q.table.find(q.discretizer.key(next));
            double best = 0.0;
            if (it != q.table.end()) best = *std::max_element(it->second.begin(), it->second.end());
            target += config.gamma * best;
        }
        auto& cell = row(key)[static_cast<std::size_t>(action)];
        cell += config.alpha * (target - cell);

        if (out.done || t >= draws.length()) {
            ++episode;
            t = 0;
            env->reset();
            draws = sample_config(child_seed(config.seed, "train-ep:" + std::to_string(episode)),
                                  env->step_limit(), env->draw_arity());
            state = env->observe();
        } else {
            state = next;
        }
    }
    return q;
}

std::vector<FailureCase> collect_failures(const Environment& proto, const PolicyFn& policy,
                                          int episodes, int k, std::uint64_t seed) {
    if (k < 1) throw InputError("collect_failures: k must be >= 1");
    std::vector<FailureCase> cases;

    for (int ep = 0; ep < episodes; ++ep) {
        auto env = proto.clone();
        env->reset();
        const StochasticConfig draws =
            sample_config(child_seed(seed, "collect-ep:" + std::to_string(ep)),
                          env->step_limit(), env->draw_arity());

        std::vector<Snapshot> snaps; // snapshot of state t at index t
        std::vector<Action> actions;
        snaps.push_back(env->snapshot());

        int failure_at = -1;
        for (int t = 0; t < draws.length(); ++t) {
            const Action a = policy(env->observe());
            const StepOut out = env->step(a, draws.draws[static_cast<std::size_t>(t)]);
            actions.push_back(a);
            snaps.push_back(env->snapshot());
            if (env->failure(env->observe())) {
                failure_at = t + 1;
                break;
            }
            if (out.done) break;
        }
        if (failure_at < 0) continue;

        const int start = std::max(0, failure_at - k);
        FailureCase c;
        c.env = proto.name();
        c.start_snapshot = snaps[static_cast<std::size_t>(start)];
        c.factual_actions.assign(actions.begin() + start, actions.begin() + failure_at);
        c.window_config = draws.slice(start, failure_at - start);
        c.horizon_k = failure_at - start;
        c.failure_step = failure_at;
        c.episode = ep;

        // Factual reproduction is part of the contract; refuse to emit a
        // case that does not replay to its failure.
        const Trajectory check = replay(proto, c.start_snapshot, c.factual_actions, c.window_config);
        if (!check.failed() || check.failure_index != c.horizon_k)
            throw InputError("collected case does not reproduce its failure");

        cases.push_back(std::move(c));
    }

    for (std::size_t i = 0; i < cases.size(); ++i) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "case-%04zu", i);
        cases[i].id = buf;
    }
    return cases;
}

std::vector<FailureCase> collect_failures(const Environment& proto, const QFunction& policy,
                                          int episodes, int k, std::uint64_t seed) {
    return collect_failures(
        proto, [&policy](const State& s) { return Action::of(policy.greedy(s)); }, episodes, k,
        seed);
}

} // namespace cfseq
