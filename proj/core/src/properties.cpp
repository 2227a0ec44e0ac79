#include "cfseq/properties.hpp"

#include <cmath>
#include <string>

#include "cfseq/errors.hpp"
#include "cfseq/trajectory.hpp"

namespace cfseq {

using nlohmann::json;

void to_json(json& j, const PropertyVector& p) {
    j = json{{"validity", p.validity},
             {"proximity", p.proximity},
             {"sparsity", p.sparsity},
             {"stochastic_certainty", p.stochastic_certainty},
             {"recency", p.recency}};
}

void from_json(const json& j, PropertyVector& p) {
    p.validity = j.at("validity").get<int>();
    p.proximity = j.at("proximity").get<double>();
    p.sparsity = j.at("sparsity").get<int>();
    p.stochastic_certainty = j.at("stochastic_certainty").get<double>();
    p.recency = j.at("recency").get<double>();
}

namespace {

void check_pair(std::span<const Action> factual, std::span<const Action> candidate,
                const ActionSpace& space) {
    if (factual.size() != candidate.size())
        throw InputError("sequence length mismatch: " + std::to_string(factual.size()) +
                         " vs " + std::to_string(candidate.size()));
    if (factual.empty()) throw InputError("empty action sequences");
    for (const auto& a : factual) check_action(space, a);
    for (const auto& a : candidate) check_action(space, a);
}

bool changed_at(const Action& a, const Action& b, const ActionSpace& space, double eps) {
    if (space.is_discrete()) return a.index != b.index;
    for (int d = 0; d < space.dims(); ++d) {
        const double tol = eps >= 0.0 ? eps : 1e-6 * space.range(d);
        if (std::abs(a.vec[static_cast<std::size_t>(d)] - b.vec[static_cast<std::size_t>(d)]) > tol)
            return true;
    }
    return false;
}

bool window_ok(const Trajectory& t, ValidityMode mode, const Environment& env) {
    if (mode == ValidityMode::FullWindow) return !t.failed();
    return env.failure(t.last_state()) == 0;
}

} // namespace

int validity(const Environment& proto, const FailureCase& c, std::span<const Action> candidate,
             ValidityMode mode) {
    if (static_cast<int>(candidate.size()) != c.horizon_k)
        throw InputError("candidate length != case horizon");
    const Trajectory t = replay(proto, c.start_snapshot, candidate, c.window_config);
    return window_ok(t, mode, proto) ? 1 : 0;
}

double proximity(std::span<const Action> factual, std::span<const Action> candidate,
                 const ActionSpace& space) {
    check_pair(factual, candidate, space);
    const auto k = static_cast<double>(factual.size());
    if (space.is_discrete()) {
        int changed = 0;
        for (std::size_t i = 0; i < factual.size(); ++i)
            if (factual[i].index != candidate[i].index) ++changed;
        return static_cast<double>(changed) / k;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < factual.size(); ++i)
        for (int d = 0; d < space.dims(); ++d)
            total += std::abs(factual[i].vec[static_cast<std::size_t>(d)] -
                              candidate[i].vec[static_cast<std::size_t>(d)]) /
                     space.range(d);
    return total / k;
}

int sparsity(std::span<const Action> factual, std::span<const Action> candidate,
             const ActionSpace& space, double eps) {
    check_pair(factual, candidate, space);
    int count = 0;
    for (std::size_t i = 0; i < factual.size(); ++i)
        if (changed_at(factual[i], candidate[i], space, eps)) ++count;
    return count;
}

double stochastic_uncertainty(const Environment& proto, const FailureCase& c,
                              std::span<const Action> candidate, int samples,
                              std::uint64_t seed, ValidityMode mode) {
    if (samples < 1) throw InputError("stochastic_uncertainty: samples must be >= 1");
    if (static_cast<int>(candidate.size()) != c.horizon_k)
        throw InputError("candidate length != case horizon");
    int ok = 0;
    for (int i = 0; i < samples; ++i) {
        const StochasticConfig w = sample_config(seed ^ static_cast<std::uint64_t>(i),
                                                 c.horizon_k, c.window_config.arity());
        const Trajectory t = replay(proto, c.start_snapshot, candidate, w);
        if (window_ok(t, mode, proto)) ++ok;
    }
    return static_cast<double>(ok) / static_cast<double>(samples);
}

std::vector<double> recency_weights(int k) {
    if (k < 1) throw InputError("recency_weights: k must be >= 1");
    std::vector<double> w(static_cast<std::size_t>(k));
    const double denom = static_cast<double>(k) * static_cast<double>(k + 1);
    for (int i = 1; i <= k; ++i)
        w[static_cast<std::size_t>(i - 1)] = 2.0 * static_cast<double>(i) / denom;
    return w;
}

double recency(std::span<const Action> factual, std::span<const Action> candidate,
               const ActionSpace& space, double eps) {
    check_pair(factual, candidate, space);
    const int k = static_cast<int>(factual.size());
    const auto w = recency_weights(k);
    double total = 0.0;
    // Sequences are stored oldest-first; age i = 1 is the last position.
    for (int i = 1; i <= k; ++i) {
        const std::size_t pos = static_cast<std::size_t>(k - i);
        if (changed_at(factual[pos], candidate[pos], space, eps))
            total += w[static_cast<std::size_t>(i - 1)];
    }
    return total;
}

PropertyEvaluator::PropertyEvaluator(const Environment& proto, const FailureCase& c,
                                     PropertySettings settings, std::uint64_t mc_seed)
    : proto_(&proto),
      case_(&c),
      space_(proto.action_space()),
      settings_(settings),
      mc_seed_(mc_seed) {}

PropertyVector PropertyEvaluator::evaluate(std::span<const Action> candidate) const {
    PropertyVector p;
    p.validity = validity(*proto_, *case_, candidate, settings_.mode);
    p.proximity = proximity(case_->factual_actions, candidate, space_);
    p.sparsity = sparsity(case_->factual_actions, candidate, space_, settings_.eps);
    p.stochastic_certainty = stochastic_uncertainty(*proto_, *case_, candidate,
                                                    settings_.mc_samples, mc_seed_,
                                                    settings_.mode);
    p.recency = recency(case_->factual_actions, candidate, space_, settings_.eps);
    return p;
}

} // namespace cfseq
