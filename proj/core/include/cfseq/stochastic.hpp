#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace cfseq {

/// Stateless 64-bit avalanche (the splitmix64 finalizer).
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Value `counter` of the uniform [0,1) stream keyed by `seed`.
/// Counter-based: any element can be produced without generating its
/// predecessors, and distinct seeds give decorrelated streams.
double keyed_u01(std::uint64_t seed, std::uint64_t counter) noexcept;

/// Deterministic child seed for a pipeline stage. Keying on a stable
/// label means adding a stage never perturbs the randomness of others.
std::uint64_t child_seed(std::uint64_t master, std::string_view label) noexcept;

/// Small sequential RNG over the keyed stream. Never touches process-global
/// state; all randomness in this project flows through explicit seeds.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept : seed_(seed) {}

    std::uint64_t next_u64() noexcept;
    double next_u01() noexcept;       // [0, 1)
    int next_below(int n) noexcept;   // uniform in [0, n)
    double next_gauss() noexcept;     // standard normal, two uniforms per call
    bool next_bernoulli(double p) noexcept;

private:
    std::uint64_t seed_ = 0;
    std::uint64_t counter_ = 0;
};

/// Fixed per-timestep exogenous draws for one episode. Replaying any action
/// sequence consumes draws[t] at step t, regardless of the states visited.
struct StochasticConfig {
    std::uint64_t seed = 0;
    std::vector<std::vector<double>> draws; // [timestep][arity]

    int length() const noexcept { return static_cast<int>(draws.size()); }
    int arity() const noexcept {
        return draws.empty() ? 0 : static_cast<int>(draws.front().size());
    }

    /// Contiguous [begin, begin + count) slice; keeps the seed for provenance.
    StochasticConfig slice(int begin, int count) const;

    bool operator==(const StochasticConfig&) const = default;
};

/// Fresh config with `length` draws of `arity` uniforms in [0,1), generated
/// from the counter-based stream keyed by `seed`. Same seed, same draws.
StochasticConfig sample_config(std::uint64_t seed, int length, int arity);

} // namespace cfseq
