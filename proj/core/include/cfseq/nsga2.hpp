#pragma once

#include <array>
#include <map>
#include <span>
#include <vector>

#include "cfseq/explanation.hpp"
#include "cfseq/properties.hpp"
#include "cfseq/stochastic.hpp"

namespace cfseq {

/// An action sequence under evolutionary search. Objectives are
/// (proximity, sparsity, 1 - stochastic certainty, recency), all minimized;
/// validity enters as a hard feasibility constraint instead of an objective.
struct Candidate {
    std::vector<Action> actions;
    std::array<double, 4> objectives{};
    bool feasible = false;
    int rank = -1;        // front index after sorting, 0 = best
    double crowding = 0;  // within-front density estimate; infinity allowed
    PropertyVector props;
};

struct NsgaConfig {
    int population = 50;   // must be even
    int generations = 5;
    double p_mut = -1.0;   // per-position mutation rate; < 0 = 1/k
    double p_cx = 0.9;     // crossover rate
    int tournament = 2;
    double sigma = -1.0;   // continuous mutation stddev; < 0 = 0.1 * range
    std::uint64_t seed = 0;
};

/// Memoizing wrapper: a candidate's properties are computed once per unique
/// action sequence per case, since replay dominates runtime.
class CachedEvaluator {
public:
    explicit CachedEvaluator(const PropertyEvaluator& inner) : inner_(&inner) {}

    const PropertyVector& operator()(const std::vector<Action>& actions);
    int unique_evaluations() const { return static_cast<int>(cache_.size()); }

private:
    const PropertyEvaluator* inner_;
    std::map<std::string, PropertyVector> cache_;
};

/// Constrained domination: feasible beats infeasible; two infeasible
/// candidates never dominate each other (the only constraint is binary);
/// among feasible, standard Pareto domination on the four objectives.
bool dominates(const Candidate& a, const Candidate& b);

/// Partitions indices into nondominated fronts F1, F2, ... via the standard
/// domination-count bookkeeping over `dominates`.
std::vector<std::vector<int>> fast_nondominated_sort(std::span<const Candidate> pop);

/// Standard crowding distance for the members of one front (given as indices
/// into `pop`). Boundary candidates get infinity; zero objective ranges
/// contribute nothing; fronts of size <= 2 are all infinity.
std::vector<double> crowding_distance(std::span<const Candidate> pop,
                                      std::span<const int> front);

/// N candidates seeded from the factual sequence: per-position resampling
/// with probability p_mut, the unmodified factual always included once.
std::vector<Candidate> initialize_population(CachedEvaluator& eval,
                                             std::span<const Action> factual,
                                             const ActionSpace& space,
                                             const NsgaConfig& cfg, Rng& rng);

/// N children by binary tournament on (rank, crowding), one-point crossover
/// with probability p_cx, then per-position mutation. Parents must carry
/// rank and crowding.
std::vector<Candidate> make_children(std::span<const Candidate> parents,
                                     CachedEvaluator& eval,
                                     std::span<const Action> factual,
                                     const ActionSpace& space, const NsgaConfig& cfg,
                                     Rng& rng);

/// Full search: G elitist generations of combine/sort/fill, then the feasible
/// members of the final first front, deduplicated by action sequence. An
/// empty set is a legal outcome, not an error.
ExplanationSet evolve(const Environment& proto, const FailureCase& c, const NsgaConfig& cfg,
                      const PropertySettings& props);

} // namespace cfseq
