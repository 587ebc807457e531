#include "intstbc/rng.hpp"

#include <cmath>

namespace intstbc {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed)
{
    for (auto& word : s_) {
        word = splitmix64(seed);
    }
}

RngStream RngStream::derive(std::uint64_t master, std::uint64_t a, std::uint64_t b)
{
    std::uint64_t h = master;
    std::uint64_t key = splitmix64(h);
    h = key ^ a;
    key = splitmix64(h);
    h = key ^ b;
    return RngStream(splitmix64(h));
}

RngStream::result_type RngStream::operator()()
{
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

std::complex<double> RngStream::complex_normal(double variance)
{
    const double sd = std::sqrt(variance / 2.0);
    const double re = standard_normal();
    const double im = standard_normal();
    return {sd * re, sd * im};
}

std::uint64_t RngStream::uniform_index(std::uint64_t n)
{
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(*this);
}

}  // namespace intstbc
