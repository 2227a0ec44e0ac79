#pragma once

#include <span>

#include "cfseq/explanation.hpp"

namespace cfseq {

/// Set-level diversity over one method's explanation sets, one set per
/// evaluated failure.
struct DiversityReport {
    double coverage = 0.0;
    double action_diversity = 0.0;
    double cf_property_diversity = 0.0;
    int failures_evaluated = 0;
};

/// Mean number of counterfactual sequences per failure; empty sets count.
double coverage(std::span<const ExplanationSet> sets);

/// Mean over failures of the average pairwise sequence distance inside each
/// set (0 when a set has fewer than two members). Distance is the per-step
/// mismatch rate for discrete spaces and the per-step L1 distance for
/// continuous ones.
double action_diversity(std::span<const ExplanationSet> sets, const ActionSpace& space);

/// Mean over failures of the average pairwise squared distance between
/// property vectors, over the four objective properties (proximity,
/// sparsity/k, 1 - stochastic certainty, recency). Validity is excluded:
/// every member of a set is valid, so it would contribute nothing.
double cf_property_diversity(std::span<const ExplanationSet> sets);

DiversityReport diversity_report(std::span<const ExplanationSet> sets,
                                 const ActionSpace& space);

} // namespace cfseq
