#include "cfseq/explanation.hpp"

#include <algorithm>
#include <tuple>

namespace cfseq {

using nlohmann::json;

namespace {
auto order_key(const Explanation& e) {
    return std::make_tuple(e.properties.proximity, e.properties.sparsity,
                           e.properties.recency, -e.properties.stochastic_certainty);
}

bool action_less(const std::vector<Action>& a, const std::vector<Action>& b) {
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        if (a[i].index != b[i].index) return a[i].index < b[i].index;
        if (a[i].vec != b[i].vec) return a[i].vec < b[i].vec;
    }
    return a.size() < b.size();
}
} // namespace

void sort_members(ExplanationSet& set) {
    std::sort(set.members.begin(), set.members.end(),
              [](const Explanation& x, const Explanation& y) {
                  const auto kx = order_key(x), ky = order_key(y);
                  if (kx != ky) return kx < ky;
                  return action_less(x.actions, y.actions);
              });
}

void to_json(json& j, const ExplanationSet& s) {
    json members = json::array();
    for (const auto& m : s.members)
        members.push_back(json{{"actions", m.actions}, {"properties", m.properties}});
    j = json{{"case_id", s.case_id},
             {"method", s.method},
             {"env", s.env},
             {"members", members},
             {"metadata", s.metadata}};
}

void from_json(const json& j, ExplanationSet& s) {
    s.case_id = j.at("case_id").get<std::string>();
    s.method = j.at("method").get<std::string>();
    s.env = j.at("env").get<std::string>();
    s.members.clear();
    for (const auto& mj : j.at("members")) {
        Explanation e;
        e.actions = mj.at("actions").get<std::vector<Action>>();
        e.properties = mj.at("properties").get<PropertyVector>();
        s.members.push_back(std::move(e));
    }
    s.metadata = j.at("metadata").get<std::map<std::string, double>>();
}

} // namespace cfseq
