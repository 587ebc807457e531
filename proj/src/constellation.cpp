#include "intstbc/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace intstbc {

std::uint32_t gray_encode(std::uint32_t v) { return v ^ (v >> 1); }

std::uint32_t gray_decode(std::uint32_t g)
{
    std::uint32_t v = g;
    while (g >>= 1) {
        v ^= g;
    }
    return v;
}

Constellation make_qam(int m)
{
    if (m < 2 || m > 16 || m % 2 != 0) {
        throw std::invalid_argument("QAM bits per symbol must be even and in [2, 16], got " +
                                    std::to_string(m));
    }

    Constellation c;
    c.m_ = m;
    c.levels_ = 1 << (m / 2);

    const auto levels = static_cast<std::uint32_t>(c.levels_);
    c.gray_of_level_.resize(levels);
    c.level_of_gray_.resize(levels);
    for (std::uint32_t i = 0; i < levels; ++i) {
        c.gray_of_level_[i] = gray_encode(i);
        c.level_of_gray_[gray_encode(i)] = i;
    }

    const std::uint32_t half = static_cast<std::uint32_t>(m / 2);
    const std::uint32_t mask = levels - 1;
    c.points_.resize(std::size_t{1} << m);
    for (std::uint32_t label = 0; label < c.points_.size(); ++label) {
        const auto re_level = static_cast<int>(c.level_of_gray_[label >> half]);
        const auto im_level = static_cast<int>(c.level_of_gray_[label & mask]);
        c.points_[label] = {2 * re_level - (c.levels_ - 1), 2 * im_level - (c.levels_ - 1)};
    }
    return c;
}

bool Constellation::contains(IntPoint p) const
{
    const int lim = levels_ - 1;
    auto ok = [lim](int v) { return (v & 1) != 0 && v >= -lim && v <= lim; };
    return ok(p.re) && ok(p.im);
}

bool Constellation::contains(cplx c) const
{
    const double re = std::round(c.real());
    const double im = std::round(c.imag());
    if (re != c.real() || im != c.imag()) {
        return false;
    }
    return contains(IntPoint{static_cast<int>(re), static_cast<int>(im)});
}

std::uint32_t Constellation::label_of(IntPoint p) const
{
    if (!contains(p)) {
        throw std::invalid_argument("symbol not in constellation");
    }
    const std::uint32_t half = static_cast<std::uint32_t>(m_ / 2);
    return (gray_of_level_[level_index(p.re)] << half) | gray_of_level_[level_index(p.im)];
}

std::vector<int> Constellation::coordinate_alphabet() const
{
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(levels_));
    for (int v = -(levels_ - 1); v <= levels_ - 1; v += 2) {
        out.push_back(v);
    }
    return out;
}

double Constellation::energy() const
{
    // 2(2^m - 1)/3 is an integer for even m.
    return static_cast<double>(2 * ((std::int64_t{1} << m_) - 1) / 3);
}

Papr set_papr(std::span<const cplx> points)
{
    if (points.empty()) {
        throw std::invalid_argument("PAPR of an empty point set");
    }
    double peak = 0.0;
    double sum = 0.0;
    for (const auto& p : points) {
        const double e = std::norm(p);
        peak = std::max(peak, e);
        sum += e;
    }
    if (peak == 0.0) {
        throw std::invalid_argument("PAPR of an all-zero point set");
    }
    const double ratio = peak / (sum / static_cast<double>(points.size()));
    return {ratio, to_db(ratio)};
}

}  // namespace intstbc
