#include "cfseq/nsga2.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <set>

#include "cfseq/errors.hpp"

namespace cfseq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string sequence_key(const std::vector<Action>& actions) {
    // Byte-exact memo key; distinct doubles never collide.
    std::string key;
    key.reserve(actions.size() * 9);
    for (const auto& a : actions) {
        key.push_back(static_cast<char>(a.is_discrete() ? 'd' : 'c'));
        if (a.is_discrete()) {
            key.append(reinterpret_cast<const char*>(&a.index), sizeof(a.index));
        } else {
            key.append(reinterpret_cast<const char*>(a.vec.data()),
                       a.vec.size() * sizeof(double));
        }
    }
    return key;
}

Candidate make_candidate(std::vector<Action> actions, const PropertyVector& p) {
    Candidate c;
    c.actions = std::move(actions);
    c.props = p;
    c.objectives = {p.proximity, static_cast<double>(p.sparsity),
                    1.0 - p.stochastic_certainty, p.recency};
    c.feasible = p.validity == 1;
    return c;
}

void mutate_in_place(std::vector<Action>& actions, const ActionSpace& space, double p_mut,
                     double sigma, Rng& rng) {
    for (auto& a : actions) {
        if (!rng.next_bernoulli(p_mut)) continue;
        if (space.is_discrete()) {
            // Uniform over the other actions.
            int alt = rng.next_below(space.count - 1);
            if (alt >= a.index) ++alt;
            a.index = alt;
        } else {
            for (int d = 0; d < space.dims(); ++d) {
                const double s = sigma >= 0.0 ? sigma : 0.1 * space.range(d);
                auto& v = a.vec[static_cast<std::size_t>(d)];
                v = std::clamp(v + s * rng.next_gauss(), space.lower[d], space.upper[d]);
            }
        }
    }
}

double resolved_p_mut(const NsgaConfig& cfg, int k) {
    return cfg.p_mut >= 0.0 ? cfg.p_mut : 1.0 / static_cast<double>(k);
}

// Tournament order: lower rank first, then larger crowding.
bool tourney_better(const Candidate& a, const Candidate& b) {
    if (a.rank != b.rank) return a.rank < b.rank;
    return a.crowding > b.crowding;
}

const Candidate& run_tournament(std::span<const Candidate> parents, int size, Rng& rng) {
    int best = rng.next_below(static_cast<int>(parents.size()));
    for (int i = 1; i < size; ++i) {
        const int other = rng.next_below(static_cast<int>(parents.size()));
        if (tourney_better(parents[static_cast<std::size_t>(other)],
                           parents[static_cast<std::size_t>(best)]))
            best = other;
    }
    return parents[static_cast<std::size_t>(best)];
}

void assign_ranks_and_crowding(std::vector<Candidate>& pop) {
    const auto fronts = fast_nondominated_sort(pop);
    for (std::size_t f = 0; f < fronts.size(); ++f) {
        const auto dist = crowding_distance(pop, fronts[f]);
        for (std::size_t i = 0; i < fronts[f].size(); ++i) {
            auto& c = pop[static_cast<std::size_t>(fronts[f][i])];
            c.rank = static_cast<int>(f);
            c.crowding = dist[i];
        }
    }
}

} // namespace

const PropertyVector& CachedEvaluator::operator()(const std::vector<Action>& actions) {
    const std::string key = sequence_key(actions);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, inner_->evaluate(actions)).first;
    return it->second;
}

bool dominates(const Candidate& a, const Candidate& b) {
    if (a.feasible != b.feasible) return a.feasible;
    if (!a.feasible) return false; // violation is binary: infeasibles are incomparable
    bool strictly_better = false;
    for (std::size_t i = 0; i < a.objectives.size(); ++i) {
        if (a.objectives[i] > b.objectives[i]) return false;
        if (a.objectives[i] < b.objectives[i]) strictly_better = true;
    }
    return strictly_better;
}

std::vector<std::vector<int>> fast_nondominated_sort(std::span<const Candidate> pop) {
    const int n = static_cast<int>(pop.size());
    std::vector<std::vector<int>> dominated(static_cast<std::size_t>(n));
    std::vector<int> dom_count(static_cast<std::size_t>(n), 0);

    std::vector<std::vector<int>> fronts(1);
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            if (p == q) continue;
            if (dominates(pop[static_cast<std::size_t>(p)], pop[static_cast<std::size_t>(q)]))
                dominated[static_cast<std::size_t>(p)].push_back(q);
            else if (dominates(pop[static_cast<std::size_t>(q)], pop[static_cast<std::size_t>(p)]))
                ++dom_count[static_cast<std::size_t>(p)];
        }
        if (dom_count[static_cast<std::size_t>(p)] == 0) fronts[0].push_back(p);
    }

    while (!fronts.back().empty()) {
        std::vector<int> next;
        for (const int p : fronts.back()) {
            for (const int q : dominated[static_cast<std::size_t>(p)]) {
                if (--dom_count[static_cast<std::size_t>(q)] == 0) next.push_back(q);
            }
        }
        fronts.push_back(std::move(next));
    }
    fronts.pop_back();
    return fronts;
}

std::vector<double> crowding_distance(std::span<const Candidate> pop,
                                      std::span<const int> front) {
    const int m = static_cast<int>(front.size());
    if (m == 0) return {};
    std::vector<double> dist(static_cast<std::size_t>(m), 0.0);
    if (m <= 2) {
        std::fill(dist.begin(), dist.end(), kInf);
        return dist;
    }

    const std::size_t n_obj = pop[static_cast<std::size_t>(front[0])].objectives.size();
    std::vector<int> order(static_cast<std::size_t>(m));
    for (std::size_t obj = 0; obj < n_obj; ++obj) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
            return pop[static_cast<std::size_t>(front[static_cast<std::size_t>(x)])].objectives[obj] <
                   pop[static_cast<std::size_t>(front[static_cast<std::size_t>(y)])].objectives[obj];
        });
        auto value = [&](int i) {
            return pop[static_cast<std::size_t>(front[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])])]
                .objectives[obj];
        };
        dist[static_cast<std::size_t>(order[0])] = kInf;
        dist[static_cast<std::size_t>(order[static_cast<std::size_t>(m - 1)])] = kInf;
        const double range = value(m - 1) - value(0);
        if (range <= 0.0) continue; // identical column contributes nothing
        for (int i = 1; i < m - 1; ++i) {
            auto& d = dist[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
            if (d != kInf) d += (value(i + 1) - value(i - 1)) / range;
        }
    }
    return dist;
}

std::vector<Candidate> initialize_population(CachedEvaluator& eval,
                                             std::span<const Action> factual,
                                             const ActionSpace& space, const NsgaConfig& cfg,
                                             Rng& rng) {
    if (cfg.population < 2 || cfg.population % 2 != 0)
        throw InputError("nsga2: population must be even and >= 2");
    const double p_mut = resolved_p_mut(cfg, static_cast<int>(factual.size()));

    std::vector<Candidate> pop;
    pop.reserve(static_cast<std::size_t>(cfg.population));
    const std::vector<Action> base(factual.begin(), factual.end());
    pop.push_back(make_candidate(base, eval(base)));
    for (int i = 1; i < cfg.population; ++i) {
        std::vector<Action> actions = base;
        mutate_in_place(actions, space, p_mut, cfg.sigma, rng);
        const PropertyVector p = eval(actions);
        pop.push_back(make_candidate(std::move(actions), p));
    }
    return pop;
}

std::vector<Candidate> make_children(std::span<const Candidate> parents, CachedEvaluator& eval,
                                     std::span<const Action> factual, const ActionSpace& space,
                                     const NsgaConfig& cfg, Rng& rng) {
    const int k = static_cast<int>(factual.size());
    const double p_mut = resolved_p_mut(cfg, k);

    std::vector<Candidate> children;
    children.reserve(static_cast<std::size_t>(cfg.population));
    while (static_cast<int>(children.size()) < cfg.population) {
        std::vector<Action> a = run_tournament(parents, cfg.tournament, rng).actions;
        std::vector<Action> b = run_tournament(parents, cfg.tournament, rng).actions;
        if (k > 1 && rng.next_bernoulli(cfg.p_cx)) {
            const int cut = 1 + rng.next_below(k - 1);
            for (int i = cut; i < k; ++i)
                std::swap(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(i)]);
        }
        mutate_in_place(a, space, p_mut, cfg.sigma, rng);
        mutate_in_place(b, space, p_mut, cfg.sigma, rng);
        const PropertyVector pa = eval(a);
        children.push_back(make_candidate(std::move(a), pa));
        if (static_cast<int>(children.size()) < cfg.population) {
            const PropertyVector pb = eval(b);
            children.push_back(make_candidate(std::move(b), pb));
        }
    }
    return children;
}

ExplanationSet evolve(const Environment& proto, const FailureCase& c, const NsgaConfig& cfg,
                      const PropertySettings& props) {
    const auto started = std::chrono::steady_clock::now();
    const ActionSpace space = proto.action_space();

    PropertyEvaluator inner(proto, c, props, child_seed(cfg.seed, "mc"));
    CachedEvaluator eval(inner);
    Rng rng(child_seed(cfg.seed, "ga"));

    std::vector<Candidate> parents =
        initialize_population(eval, c.factual_actions, space, cfg, rng);
    assign_ranks_and_crowding(parents);
    std::vector<Candidate> children =
        make_children(parents, eval, c.factual_actions, space, cfg, rng);

    for (int gen = 0; gen < cfg.generations; ++gen) {
        std::vector<Candidate> combined = std::move(parents);
        combined.insert(combined.end(), std::make_move_iterator(children.begin()),
                        std::make_move_iterator(children.end()));

        const auto fronts = fast_nondominated_sort(combined);
        std::vector<Candidate> next;
        next.reserve(static_cast<std::size_t>(cfg.population));
        for (const auto& front : fronts) {
            if (static_cast<int>(next.size()) + static_cast<int>(front.size()) <=
                cfg.population) {
                for (const int idx : front)
                    next.push_back(std::move(combined[static_cast<std::size_t>(idx)]));
                continue;
            }
            // Partial front: take the most spread-out candidates first.
            const auto dist = crowding_distance(combined, front);
            std::vector<int> order(front.size());
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(),
                             [&](int x, int y) { return dist[static_cast<std::size_t>(x)] >
                                                        dist[static_cast<std::size_t>(y)]; });
            for (const int o : order) {
                if (static_cast<int>(next.size()) == cfg.population) break;
                next.push_back(std::move(
                    combined[static_cast<std::size_t>(front[static_cast<std::size_t>(o)])]));
            }
            break;
        }
        parents = std::move(next);
        assign_ranks_and_crowding(parents);
        if (gen + 1 < cfg.generations)
            children = make_children(parents, eval, c.factual_actions, space, cfg, rng);
    }

    ExplanationSet out;
    out.case_id = c.id;
    out.method = "nsga2";
    out.env = proto.name();

    std::set<std::string> seen;
    for (const auto& cand : parents) {
        if (cand.rank != 0 || !cand.feasible) continue;
        if (!seen.insert(sequence_key(cand.actions)).second) continue;
        out.members.push_back(Explanation{cand.actions, cand.props});
    }
    sort_members(out);

    const auto elapsed = std::chrono::steady_clock::now() - started;
    out.metadata["population"] = cfg.population;
    out.metadata["generations"] = cfg.generations;
    out.metadata["seed"] = static_cast<double>(cfg.seed);
    out.metadata["mc_samples"] = props.mc_samples;
    out.metadata["unique_evaluations"] = eval.unique_evaluations();
    out.metadata["wall_ms"] = static_cast<double>(
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count());
    return out;
}

} // namespace cfseq
