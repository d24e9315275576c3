#pragma once

// Platform-stable random streams.
//
// std::mt19937_64 output is fixed by the standard, but std::normal_distribution
// is not, so normal variates use a fixed Box-Muller transform on 53-bit
// uniforms. Independent streams are derived from (seed, index) through
// SplitMix64, which lets Monte Carlo trials run in any order.

#include <cstdint>
#include <random>

#include "graphbayes/graph_core.hpp"

namespace graphbayes {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed for stream `index` of a run seeded with `seed`.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
    RandomStream(std::uint64_t seed, std::uint64_t index) : engine_(stream_seed(seed, index)) {}

    /// Uniform in [0, 1).
    double uniform();
    /// Standard normal via Box-Muller (both outputs used).
    double normal();
    Vector normal_vector(int n);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace graphbayes
