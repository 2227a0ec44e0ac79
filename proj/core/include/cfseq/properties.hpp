#pragma once

#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "cfseq/environment.hpp"
#include "cfseq/failure_case.hpp"

namespace cfseq {

/// The five per-candidate counterfactual properties.
struct PropertyVector {
    int validity = 0;                  // 1 iff the candidate avoids the failure
    double proximity = 0.0;            // normalized change magnitude
    int sparsity = 0;                  // number of changed positions
    double stochastic_certainty = 0.0; // fraction of resampled configs avoiding failure
    double recency = 0.0;              // age-weighted change cost, in [0, 1]

    bool operator==(const PropertyVector&) const = default;
};

void to_json(nlohmann::json& j, const PropertyVector& p);
void from_json(const nlohmann::json& j, PropertyVector& p);

/// FullWindow requires failure-free states at every step of the replayed
/// window; TerminalOnly checks the reached state alone.
enum class ValidityMode { FullWindow, TerminalOnly };

/// 1 iff replaying `candidate` from the case snapshot under the captured
/// config avoids the failure (per `mode`). Throws InputError on length or
/// action-space mismatches.
int validity(const Environment& proto, const FailureCase& c, std::span<const Action> candidate,
             ValidityMode mode = ValidityMode::FullWindow);

/// Discrete: changed positions / k. Continuous: mean over positions of the
/// per-dimension range-normalized L1 distance.
double proximity(std::span<const Action> factual, std::span<const Action> candidate,
                 const ActionSpace& space);

/// Count of changed positions. Continuous actions count as changed when any
/// dimension moves by more than eps (eps < 0 uses 1e-6 of that dimension's
/// range).
int sparsity(std::span<const Action> factual, std::span<const Action> candidate,
             const ActionSpace& space, double eps = -1.0);

/// Monte-Carlo estimate over `samples` freshly sampled configs: the fraction
/// under which the candidate avoids failure. Deterministic given the seed and
/// an exact multiple of 1/samples.
double stochastic_uncertainty(const Environment& proto, const FailureCase& c,
                              std::span<const Action> candidate, int samples,
                              std::uint64_t seed, ValidityMode mode = ValidityMode::FullWindow);

/// Age-weighted change cost: position weights grow linearly with age and sum
/// to 1, so changing only the most recent action is cheapest and changing
/// everything scores exactly 1.
double recency(std::span<const Action> factual, std::span<const Action> candidate,
               const ActionSpace& space, double eps = -1.0);

/// The weight vector behind `recency`: w[i] for the (i+1)-th most recent
/// position, w[i] = 2(i+1) / (k(k+1)).
std::vector<double> recency_weights(int k);

struct PropertySettings {
    int mc_samples = 20;
    double eps = -1.0; // continuous change tolerance; < 0 = 1e-6 of range
    ValidityMode mode = ValidityMode::FullWindow;
};

/// Bundles the five evaluators against one failure case. All evaluations are
/// pure given the construction-time Monte-Carlo seed.
class PropertyEvaluator {
public:
    PropertyEvaluator(const Environment& proto, const FailureCase& c,
                      PropertySettings settings, std::uint64_t mc_seed);

    PropertyVector evaluate(std::span<const Action> candidate) const;

    const FailureCase& failure_case() const { return *case_; }
    const Environment& env() const { return *proto_; }
    const ActionSpace& space() const { return space_; }
    const PropertySettings& settings() const { return settings_; }

private:
    const Environment* proto_;
    const FailureCase* case_;
    ActionSpace space_;
    PropertySettings settings_;
    std::uint64_t mc_seed_;
};

} // namespace cfseq
