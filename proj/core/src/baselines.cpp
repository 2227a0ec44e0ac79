#include "cfseq/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "cfseq/errors.hpp"
#include "cfseq/trajectory.hpp"

namespace cfseq {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_discrete(const QFunction& policy) {
    if (policy.action_count < 2)
        throw UnsupportedError("baseline needs Q values over a discrete action space");
}

double boltzmann_entropy(const std::vector<double>& q, double tau) {
    // Stable softmax at temperature tau, then Shannon entropy in nats.
    const double m = *std::max_element(q.begin(), q.end());
    double z = 0.0;
    std::vector<double> e(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        e[i] = std::exp((q[i] - m) / tau);
        z += e[i];
    }
    double h = 0.0;
    for (const double v : e) {
        const double p = v / z;
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}
} // namespace

ImportanceScore highlights_index(const QFunction& policy,
                                 std::span<const State> window_states) {
    require_discrete(policy);
    if (window_states.empty()) throw InputError("highlights: empty window");
    ImportanceScore best{0, -kInf};
    for (int t = 0; t < static_cast<int>(window_states.size()); ++t) {
        const auto q = policy.values(window_states[static_cast<std::size_t>(t)]);
        const auto [lo, hi] = std::minmax_element(q.begin(), q.end());
        const double spread = *hi - *lo;
        if (spread > best.score) best = {t, spread};
    }
    return best;
}

ImportanceScore entropy_index(const QFunction& policy, std::span<const State> window_states,
                              EntropyMode mode, double temperature) {
    require_discrete(policy);
    if (window_states.empty()) throw InputError("entropy index: empty window");
    if (!(temperature > 0.0)) throw InputError("entropy index: temperature must be > 0");
    ImportanceScore best{0, mode == EntropyMode::Certain ? kInf : -kInf};
    for (int t = 0; t < static_cast<int>(window_states.size()); ++t) {
        const double h =
            boltzmann_entropy(policy.values(window_states[static_cast<std::size_t>(t)]),
                              temperature);
        const bool better = mode == EntropyMode::Certain ? h < best.score : h > best.score;
        if (better) best = {t, h};
    }
    return best;
}

std::optional<ImportanceScore> local_extremum_index(std::span<const State> window_states,
                                                    std::span<const double> window_rewards,
                                                    const QFunction* policy,
                                                    ExtremumMode mode) {
    std::vector<double> series;
    if (mode == ExtremumMode::MinReward) {
        series.assign(window_rewards.begin(), window_rewards.end());
    } else {
        if (policy == nullptr) throw InputError("max-value extremum needs a policy");
        require_discrete(*policy);
        for (const auto& s : window_states) {
            const auto q = policy->values(s);
            series.push_back(*std::max_element(q.begin(), q.end()));
        }
    }
    if (series.empty()) throw InputError("local extremum: empty window");

    const int n = static_cast<int>(series.size());
    const bool minimum = mode == ExtremumMode::MinReward;
    for (int t = 0; t < n; ++t) {
        const double left = t > 0 ? series[static_cast<std::size_t>(t - 1)] : (minimum ? kInf : -kInf);
        const double right =
            t + 1 < n ? series[static_cast<std::size_t>(t + 1)] : (minimum ? kInf : -kInf);
        const double v = series[static_cast<std::size_t>(t)];
        const bool qualifies = minimum ? (v <= left && v <= right) : (v >= left && v >= right);
        if (qualifies) return ImportanceScore{t, v};
    }
    return std::nullopt;
}

ExplanationSet single_change_search(const Environment& proto, const FailureCase& c,
                                    int timestep, int trials, std::uint64_t seed,
                                    const PropertySettings& props) {
    if (timestep < 0 || timestep >= c.horizon_k)
        throw InputError("single_change_search: timestep outside the window");

    const ActionSpace space = proto.action_space();
    PropertyEvaluator eval(proto, c, props, child_seed(seed, "mc"));
    Rng rng(child_seed(seed, "alt"));

    std::vector<Action> alternatives;
    const Action& factual = c.factual_actions[static_cast<std::size_t>(timestep)];
    if (space.is_discrete()) {
        for (int a = 0; a < space.count; ++a)
            if (a != factual.index) alternatives.push_back(Action::of(a));
    } else {
        for (int i = 0; i < trials; ++i) {
            std::vector<double> v(static_cast<std::size_t>(space.dims()));
            for (int d = 0; d < space.dims(); ++d)
                v[static_cast<std::size_t>(d)] = space.lower[d] + rng.next_u01() * space.range(d);
            alternatives.push_back(Action::of(std::move(v)));
        }
    }

    ExplanationSet out;
    out.case_id = c.id;
    out.env = proto.name();
    for (const auto& alt : alternatives) {
        std::vector<Action> candidate = c.factual_actions;
        candidate[static_cast<std::size_t>(timestep)] = alt;
        const PropertyVector p = eval.evaluate(candidate);
        if (p.validity != 1) continue;
        if (p.sparsity != 1) continue; // sampled alternative within tolerance of factual
        out.members.push_back(Explanation{std::move(candidate), p});
    }
    sort_members(out);
    out.metadata["timestep"] = timestep;
    out.metadata["mc_samples"] = props.mc_samples;
    out.metadata["seed"] = static_cast<double>(seed);
    return out;
}

ExplanationSet run_baseline(const Environment& proto, const FailureCase& c,
                            const std::string& method, const QFunction* policy,
                            double temperature, int trials, std::uint64_t seed,
                            const PropertySettings& props) {
    const auto started = std::chrono::steady_clock::now();

    // The factual window replay provides the states and rewards the
    // importance selectors score.
    const Trajectory factual = replay(proto, c.start_snapshot, c.factual_actions,
                                      c.window_config);
    std::vector<State> states;
    std::vector<double> rewards;
    for (const auto& tr : factual.transitions) {
        states.push_back(tr.state);
        rewards.push_back(tr.reward);
    }

    ImportanceScore pick{};
    if (method == "highlights") {
        if (policy == nullptr) throw UnsupportedError("highlights needs a trained policy");
        pick = highlights_index(*policy, states);
    } else if (method == "certain" || method == "uncertain") {
        if (policy == nullptr) throw UnsupportedError("entropy baselines need a trained policy");
        pick = entropy_index(*policy, states,
                             method == "certain" ? EntropyMode::Certain : EntropyMode::Uncertain,
                             temperature);
    } else if (method == "local-min" || method == "local-max") {
        const ExtremumMode mode =
            method == "local-min" ? ExtremumMode::MinReward : ExtremumMode::MaxValue;
        const auto found = local_extremum_index(states, rewards, policy, mode);
        if (found) {
            pick = *found;
        } else {
            // Monotone window: fall back to the global extremum.
            int best = 0;
            std::vector<double> series;
            if (mode == ExtremumMode::MinReward) {
                series = rewards;
            } else {
                for (const auto& s : states) {
                    const auto q = policy->values(s);
                    series.push_back(*std::max_element(q.begin(), q.end()));
                }
            }
            for (int t = 1; t < static_cast<int>(series.size()); ++t) {
                const bool better = mode == ExtremumMode::MinReward
                                        ? series[static_cast<std::size_t>(t)] <
                                              series[static_cast<std::size_t>(best)]
                                        : series[static_cast<std::size_t>(t)] >
                                              series[static_cast<std::size_t>(best)];
                if (better) best = t;
            }
            pick = {best, series[static_cast<std::size_t>(best)]};
        }
    } else {
        throw ConfigError("unknown baseline method: " + method);
    }

    ExplanationSet out = single_change_search(proto, c, pick.timestep, trials, seed, props);
    out.method = method;
    out.metadata["importance_score"] = pick.score;
    const auto elapsed = std::chrono::steady_clock::now() - started;
    out.metadata["wall_ms"] = static_cast<double>(
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count());
    return out;
}

} // namespace cfseq
