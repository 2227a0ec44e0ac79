#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cfseq/actions.hpp"
#include "cfseq/properties.hpp"

namespace cfseq {

/// One counterfactual action sequence with its evaluated properties.
struct Explanation {
    std::vector<Action> actions;
    PropertyVector properties;

    bool operator==(const Explanation&) const = default;
};

/// All counterfactual sequences returned for one failure case by one method:
/// valid, deduplicated, plus search metadata.
struct ExplanationSet {
    std::string case_id;
    std::string method;
    std::string env;
    std::vector<Explanation> members;
    std::map<std::string, double> metadata; // N, G, seeds, wall time, ...

    bool empty() const { return members.empty(); }
    int size() const { return static_cast<int>(members.size()); }
};

/// Canonical member order: by objectives, then by action sequence. Keeps
/// serialized sets byte-stable.
void sort_members(ExplanationSet& set);

void to_json(nlohmann::json& j, const ExplanationSet& s);
void from_json(const nlohmann::json& j, ExplanationSet& s);

} // namespace cfseq
