#include "cfseq/diversity.hpp"

#include <cmath>

#include "cfseq/errors.hpp"

namespace cfseq {

namespace {

double sequence_distance(const std::vector<Action>& a, const std::vector<Action>& b,
                         const ActionSpace& space) {
    if (a.size() != b.size() || a.empty())
        throw InputError("action diversity: mixed-length sequences in one set");
    const auto k = static_cast<double>(a.size());
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (space.is_discrete()) {
            total += a[i].index != b[i].index ? 1.0 : 0.0;
        } else {
            for (int d = 0; d < space.dims(); ++d)
                total += std::abs(a[i].vec[static_cast<std::size_t>(d)] -
                                  b[i].vec[static_cast<std::size_t>(d)]);
        }
    }
    return total / k;
}

double property_distance(const Explanation& a, const Explanation& b, double k) {
    auto sq = [](double x) { return x * x; };
    return sq(a.properties.proximity - b.properties.proximity) +
           sq((a.properties.sparsity - b.properties.sparsity) / k) +
           sq(a.properties.stochastic_certainty - b.properties.stochastic_certainty) +
           sq(a.properties.recency - b.properties.recency);
}

template <typename PairDist>
double mean_pairwise(std::span<const ExplanationSet> sets, PairDist dist) {
    if (sets.empty()) throw InputError("diversity metrics need at least one explanation set");
    double total = 0.0;
    for (const auto& set : sets) {
        const int m = set.size();
        if (m < 2) continue; // no pairs: contributes 0
        double sum = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                sum += dist(set.members[static_cast<std::size_t>(i)],
                            set.members[static_cast<std::size_t>(j)]);
        total += sum / (static_cast<double>(m) * (m - 1) / 2.0);
    }
    return total / static_cast<double>(sets.size());
}

} // namespace

double coverage(std::span<const ExplanationSet> sets) {
    if (sets.empty()) throw InputError("coverage needs at least one explanation set");
    double total = 0.0;
    for (const auto& set : sets) total += set.size();
    return total / static_cast<double>(sets.size());
}

double action_diversity(std::span<const ExplanationSet> sets, const ActionSpace& space) {
    return mean_pairwise(sets, [&space](const Explanation& a, const Explanation& b) {
        return sequence_distance(a.actions, b.actions, space);
    });
}

double cf_property_diversity(std::span<const ExplanationSet> sets) {
    return mean_pairwise(sets, [](const Explanation& a, const Explanation& b) {
        if (a.actions.empty()) throw InputError("property diversity: empty member sequence");
        return property_distance(a, b, static_cast<double>(a.actions.size()));
    });
}

DiversityReport diversity_report(std::span<const ExplanationSet> sets,
                                 const ActionSpace& space) {
    DiversityReport r;
    r.coverage = coverage(sets);
    r.action_diversity = action_diversity(sets, space);
    r.cf_property_diversity = cf_property_diversity(sets);
    r.failures_evaluated = static_cast<int>(sets.size());
    return r;
}

} // namespace cfseq
