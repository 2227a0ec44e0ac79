#pragma once

#include <stdexcept>
#include <string>

namespace cfseq {

/// Malformed caller input: bad state vectors, mismatched action spaces,
/// length mismatches between factual and candidate sequences.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Replay asked to step past the recorded draw stream.
class ReplayLengthError : public std::runtime_error {
public:
    explicit ReplayLengthError(const std::string& what) : std::runtime_error(what) {}
};

/// Operation needs a capability the environment does not provide
/// (e.g. Q values over a continuous action space).
class UnsupportedError : public std::runtime_error {
public:
    explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

/// Problems with run configuration files, unknown environments, or
/// incomplete run directories.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cfseq
