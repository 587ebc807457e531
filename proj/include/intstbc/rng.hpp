#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <random>

namespace intstbc {

/// xoshiro256** seeded through SplitMix64.
///
/// Cheap to construct, so every Monte-Carlo trial gets its own stream derived
/// from (master seed, grid point, trial index). Results then do not depend on
/// how trials are spread over workers.
class RngStream {
public:
    using result_type = std::uint64_t;

    explicit RngStream(std::uint64_t seed);

    /// Independent substream keyed by (master, a, b).
    static RngStream derive(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()();

    double standard_normal() { return normal_(*this); }
    /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_normal(double variance);
    /// Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n);

private:
    std::array<std::uint64_t, 4> s_{};
    std::normal_distribution<double> normal_;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace intstbc
