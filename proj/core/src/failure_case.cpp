#include "cfseq/failure_case.hpp"

#include "cfseq/base64.hpp"
#include "cfseq/errors.hpp"

namespace cfseq {

using nlohmann::json;

void to_json(json& j, const StochasticConfig& c) {
    std::vector<double> flat;
    for (const auto& row : c.draws) flat.insert(flat.end(), row.begin(), row.end());
    j = json{{"seed", c.seed},
             {"arity", c.arity()},
             {"length", c.length()},
             {"draws", base64_encode(doubles_to_bytes(flat))}};
}

void from_json(const json& j, StochasticConfig& c) {
    c.seed = j.at("seed").get<std::uint64_t>();
    const int arity = j.at("arity").get<int>();
    const int length = j.at("length").get<int>();
    const auto flat = bytes_to_doubles(base64_decode(j.at("draws").get<std::string>()));
    if (static_cast<int>(flat.size()) != arity * length)
        throw InputError("stochastic config: draw payload size mismatch");
    c.draws.assign(static_cast<std::size_t>(length), {});
    for (int t = 0; t < length; ++t)
        c.draws[static_cast<std::size_t>(t)] =
            std::vector<double>(flat.begin() + static_cast<std::ptrdiff_t>(t) * arity,
                                flat.begin() + static_cast<std::ptrdiff_t>(t + 1) * arity);
}

void to_json(json& j, const FailureCase& c) {
    j = json{{"id", c.id},
             {"env", c.env},
             {"start_snapshot", c.start_snapshot.to_base64()},
             {"factual_actions", c.factual_actions},
             {"window_config", c.window_config},
             {"horizon_k", c.horizon_k},
             {"failure_step", c.failure_step},
             {"episode", c.episode}};
}

void from_json(const json& j, FailureCase& c) {
    c.id = j.at("id").get<std::string>();
    c.env = j.at("env").get<std::string>();
    c.start_snapshot = Snapshot::from_base64(j.at("start_snapshot").get<std::string>());
    c.factual_actions = j.at("factual_actions").get<std::vector<Action>>();
    c.window_config = j.at("window_config").get<StochasticConfig>();
    c.horizon_k = j.at("horizon_k").get<int>();
    c.failure_step = j.at("failure_step").get<int>();
    c.episode = j.at("episode").get<int>();
    if (static_cast<int>(c.factual_actions.size()) != c.horizon_k)
        throw InputError("failure case: horizon_k != |factual_actions|");
}

} // namespace cfseq
