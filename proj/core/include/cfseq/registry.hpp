#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cfseq/environment.hpp"

namespace cfseq {

/// Flat numeric overrides for an environment's constants, as parsed from the
/// [env.<name>] section of a run config.
using EnvParams = std::map<std::string, double>;

/// Builds a registered environment by name ("mini-highway", "mini-farm",
/// "continuous-nav"). Throws ConfigError for unknown names.
std::unique_ptr<Environment> make_env(const std::string& name,
                                      const EnvParams& params = {});

std::vector<std::string> registered_envs();

} // namespace cfseq
