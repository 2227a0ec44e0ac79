#include "cfseq/trajectory.hpp"

#include <istream>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "cfseq/base64.hpp"
#include "cfseq/errors.hpp"

namespace cfseq {

using nlohmann::json;

const State& Trajectory::state_at(int i) const {
    if (i < 0 || i > steps()) throw InputError("trajectory state index out of range");
    if (transitions.empty()) throw InputError("empty trajectory has no states");
    if (i == steps()) return transitions.back().next_state;
    return transitions[static_cast<std::size_t>(i)].state;
}

Trajectory replay(const Environment& proto, const Snapshot& start,
                  std::span<const Action> actions, const StochasticConfig& config) {
    const int n = static_cast<int>(actions.size());
    if (n > config.length())
        throw ReplayLengthError("replay: " + std::to_string(n) + " actions vs " +
                                std::to_string(config.length()) + " recorded draws");
    const auto space = proto.action_space();
    for (const auto& a : actions) check_action(space, a);

    auto env = proto.clone();
    env->restore(start);

    Trajectory traj;
    traj.config = config;

    State state = env->observe();
    if (env->failure(state)) traj.failure_index = 0;

    for (int t = 0; t < n; ++t) {
        Transition tr;
        tr.state = state;
        tr.action = actions[t];
        const StepOut out = env->step(actions[t], config.draws[static_cast<std::size_t>(t)]);
        tr.reward = out.reward;
        tr.done = out.done;
        tr.next_state = env->observe();
        state = tr.next_state;
        traj.transitions.push_back(std::move(tr));
        if (!traj.failure_index && env->failure(state)) traj.failure_index = t + 1;
        if (out.done) break;
    }
    return traj;
}

void write_trajectory_jsonl(const Trajectory& t, std::ostream& os) {
    for (const auto& tr : t.transitions) {
        json line{{"state", tr.state},
                  {"action", tr.action},
                  {"reward", tr.reward},
                  {"next_state", tr.next_state},
                  {"done", tr.done}};
        os << line.dump() << "\n";
    }
    std::vector<double> flat;
    for (const auto& row : t.config.draws) flat.insert(flat.end(), row.begin(), row.end());
    json trailer{{"config", {{"seed", t.config.seed},
                             {"arity", t.config.arity()},
                             {"length", t.config.length()},
                             {"draws", base64_encode(doubles_to_bytes(flat))}}}};
    if (t.failure_index)
        trailer["failure_index"] = *t.failure_index;
    else
        trailer["failure_index"] = nullptr;
    os << trailer.dump() << "\n";
}

Trajectory read_trajectory_jsonl(std::istream& is) {
    Trajectory out;
    std::string line;
    json trailer;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        if (j.contains("config")) {
            trailer = std::move(j);
            break;
        }
        Transition tr;
        tr.state = j.at("state").get<State>();
        tr.action = j.at("action").get<Action>();
        tr.reward = j.at("reward").get<double>();
        tr.next_state = j.at("next_state").get<State>();
        tr.done = j.at("done").get<bool>();
        out.transitions.push_back(std::move(tr));
    }
    if (trailer.is_null()) throw InputError("trajectory stream has no trailer object");
    const auto& cfg = trailer.at("config");
    out.config.seed = cfg.at("seed").get<std::uint64_t>();
    const int arity = cfg.at("arity").get<int>();
    const int length = cfg.at("length").get<int>();
    const auto flat = bytes_to_doubles(base64_decode(cfg.at("draws").get<std::string>()));
    if (static_cast<int>(flat.size()) != arity * length)
        throw InputError("trajectory trailer: draw payload size mismatch");
    out.config.draws.resize(static_cast<std::size_t>(length));
    for (int t = 0; t < length; ++t)
        out.config.draws[static_cast<std::size_t>(t)] =
            std::vector<double>(flat.begin() + static_cast<std::ptrdiff_t>(t) * arity,
                                flat.begin() + static_cast<std::ptrdiff_t>(t + 1) * arity);
    if (!trailer.at("failure_index").is_null())
        out.failure_index = trailer.at("failure_index").get<int>();
    return out;
}

} // namespace cfseq
