#pragma once

#include <vector>

#include <nlohmann/json.hpp>

namespace cfseq {

/// Discrete (indexed) or continuous (boxed real vector) action space.
struct ActionSpace {
    enum class Kind { Discrete, Continuous };

    Kind kind = Kind::Discrete;
    int count = 0;                     // discrete: number of actions, >= 2
    std::vector<double> lower, upper;  // continuous: per-dimension bounds

    static ActionSpace discrete(int count);
    static ActionSpace continuous(std::vector<double> lower, std::vector<double> upper);

    bool is_discrete() const { return kind == Kind::Discrete; }
    int dims() const { return static_cast<int>(lower.size()); }
    double range(int d) const { return upper[d] - lower[d]; }

    bool operator==(const ActionSpace&) const = default;
};

/// One action. Discrete actions carry `index`; continuous actions carry `vec`.
struct Action {
    int index = 0;
    std::vector<double> vec;

    static Action of(int index) { return Action{index, {}}; }
    static Action of(std::vector<double> v) { return Action{0, std::move(v)}; }
    bool is_discrete() const { return vec.empty(); }

    bool operator==(const Action&) const = default;
};

/// Throws InputError unless `a` matches the space's kind and range.
void check_action(const ActionSpace& space, const Action& a);

void to_json(nlohmann::json& j, const Action& a);
void from_json(const nlohmann::json& j, Action& a);
void to_json(nlohmann::json& j, const ActionSpace& s);
void from_json(const nlohmann::json& j, ActionSpace& s);

} // namespace cfseq
