#include "cfseq/actions.hpp"

#include "cfseq/errors.hpp"

namespace cfseq {

ActionSpace ActionSpace::discrete(int count) {
    if (count < 2) throw InputError("discrete action space needs count >= 2");
    ActionSpace s;
    s.kind = Kind::Discrete;
    s.count = count;
    return s;
}

ActionSpace ActionSpace::continuous(std::vector<double> lower, std::vector<double> upper) {
    if (lower.empty() || lower.size() != upper.size())
        throw InputError("continuous action space needs matching non-empty bounds");
    for (std::size_t d = 0; d < lower.size(); ++d)
        if (!(lower[d] < upper[d]))
            throw InputError("continuous action space needs lower < upper per dimension");
    ActionSpace s;
    s.kind = Kind::Continuous;
    s.lower = std::move(lower);
    s.upper = std::move(upper);
    return s;
}

void check_action(const ActionSpace& space, const Action& a) {
    if (space.is_discrete()) {
        if (!a.is_discrete())
            throw InputError("vector action given to a discrete action space");
        if (a.index < 0 || a.index >= space.count)
            throw InputError("discrete action index out of range");
        return;
    }
    if (a.is_discrete())
        throw InputError("index action given to a continuous action space");
    if (static_cast<int>(a.vec.size()) != space.dims())
        throw InputError("continuous action has wrong dimension");
    for (int d = 0; d < space.dims(); ++d)
        if (a.vec[d] < space.lower[d] || a.vec[d] > space.upper[d])
            throw InputError("continuous action out of bounds");
}

void to_json(nlohmann::json& j, const Action& a) {
    if (a.is_discrete())
        j = a.index;
    else
        j = a.vec;
}

void from_json(const nlohmann::json& j, Action& a) {
    if (j.is_array()) {
        a = Action::of(j.get<std::vector<double>>());
    } else {
        a = Action::of(j.get<int>());
    }
}

void to_json(nlohmann::json& j, const ActionSpace& s) {
    if (s.is_discrete())
        j = nlohmann::json{{"kind", "discrete"}, {"count", s.count}};
    else
        j = nlohmann::json{{"kind", "continuous"}, {"lower", s.lower}, {"upper", s.upper}};
}

void from_json(const nlohmann::json& j, ActionSpace& s) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "discrete") {
        s = ActionSpace::discrete(j.at("count").get<int>());
    } else if (kind == "continuous") {
        s = ActionSpace::continuous(j.at("lower").get<std::vector<double>>(),
                                    j.at("upper").get<std::vector<double>>());
    } else {
        throw InputError("unknown action space kind: " + kind);
    }
}

} // namespace cfseq
