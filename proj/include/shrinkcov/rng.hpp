#pragma once

#include <cstdint>
#include <random>

#include "shrinkcov/normal.hpp"

namespace shrinkcov {

/// SplitMix64 finalizer. Used only to derive seeds, never as a generator.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for substream `(a, b)` of `master`:
///   mix64(mix64(mix64(master) ^ a) ^ b)
/// Distinct (a, b) pairs give unrelated seeds, so replications can run in any
/// order or on any thread without changing their draws.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) noexcept {
    return mix64(mix64(mix64(master) ^ a) ^ b);
}

/// Reproducible random stream.
///
/// Engine: std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Uniforms take the top 53 bits and are mapped to the open
/// interval (0, 1) as (k + 0.5) / 2^53. Gaussians are the inverse normal CDF
/// of one uniform each, so every draw consumes exactly one engine output.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    double uniform() {
        const std::uint64_t k = engine_() >> 11;
        return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
    }

    double gaussian() { return normal_quantile(uniform()); }

private:
    std::mt19937_64 engine_;
};

} // namespace shrinkcov
