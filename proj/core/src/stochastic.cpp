#include "cfseq/stochastic.hpp"

#include <cmath>
#include <numbers>

#include "cfseq/errors.hpp"

namespace cfseq {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
} // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double keyed_u01(std::uint64_t seed, std::uint64_t counter) noexcept {
    // Two mixing rounds so that adjacent seeds do not produce shifted copies
    // of the same stream.
    const std::uint64_t z = mix64(mix64(seed) ^ (counter * kGolden + 1));
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

std::uint64_t child_seed(std::uint64_t master, std::string_view label) noexcept {
    // FNV-1a over the label, folded into the master seed.
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return mix64(master ^ h);
}

std::uint64_t Rng::next_u64() noexcept {
    return mix64(mix64(seed_) ^ (counter_++ * kGolden + 1));
}

double Rng::next_u01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int Rng::next_below(int n) noexcept {
    if (n <= 1) return 0;
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
}

double Rng::next_gauss() noexcept {
    // Box-Muller without caching the spare, so call order alone fixes output.
    const double u1 = 1.0 - next_u01(); // (0, 1]
    const double u2 = next_u01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

bool Rng::next_bernoulli(double p) noexcept {
    return next_u01() < p;
}

StochasticConfig StochasticConfig::slice(int begin, int count) const {
    if (begin < 0 || count < 0 || begin + count > length())
        throw InputError("StochasticConfig::slice out of range");
    StochasticConfig out;
    out.seed = seed;
    out.draws.assign(draws.begin() + begin, draws.begin() + begin + count);
    return out;
}

StochasticConfig sample_config(std::uint64_t seed, int length, int arity) {
    if (length < 1) throw InputError("sample_config: length must be >= 1");
    if (arity < 0) throw InputError("sample_config: negative draw arity");
    StochasticConfig cfg;
    cfg.seed = seed;
    cfg.draws.resize(static_cast<std::size_t>(length));
    std::uint64_t counter = 0;
    for (auto& row : cfg.draws) {
        row.resize(static_cast<std::size_t>(arity));
        for (auto& v : row) v = keyed_u01(seed, counter++);
    }
    return cfg;
}

} // namespace cfseq
