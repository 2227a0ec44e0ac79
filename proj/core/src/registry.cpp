#include "cfseq/registry.hpp"

#include "cfseq/envs/continuous_nav.hpp"
#include "cfseq/envs/mini_farm.hpp"
#include "cfseq/envs/mini_highway.hpp"
#include "cfseq/errors.hpp"

namespace cfseq {

std::unique_ptr<Environment> make_env(const std::string& name, const EnvParams& params) {
    if (name == "mini-highway")
        return std::make_unique<MiniHighway>(MiniHighwayParams::from_map(params));
    if (name == "mini-farm")
        return std::make_unique<MiniFarm>(MiniFarmParams::from_map(params));
    if (name == "continuous-nav")
        return std::make_unique<ContinuousNav>(ContinuousNavParams::from_map(params));
    throw ConfigError("unknown environment: " + name);
}

std::vector<std::string> registered_envs() {
    return {"mini-highway", "mini-farm", "continuous-nav"};
}

} // namespace cfseq
