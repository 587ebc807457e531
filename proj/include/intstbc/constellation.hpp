#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace intstbc {

using cplx = std::complex<double>;

/// A QAM point with exact integer coordinates.
struct IntPoint {
    int re = 0;
    int im = 0;

    friend bool operator==(const IntPoint&, const IntPoint&) = default;
    cplx value() const { return {static_cast<double>(re), static_cast<double>(im)}; }
};

/// Square 2^m-QAM with odd integer coordinates in [-(2^{m/2}-1), 2^{m/2}-1].
///
/// Points are indexed by their bit label: the high m/2 label bits select the
/// real level and the low m/2 bits the imaginary level, each through a
/// reflected Gray code, so neighbours along either axis differ in one bit.
class Constellation {
public:
    int bits_per_symbol() const { return m_; }
    std::size_t size() const { return points_.size(); }
    /// Number of levels per real axis, 2^{m/2}.
    int levels() const { return levels_; }
    /// Largest coordinate magnitude, 2^{m/2} - 1.
    int max_coordinate() const { return levels_ - 1; }

    const std::vector<IntPoint>& points() const { return points_; }
    IntPoint point(std::uint32_t label) const { return points_.at(label); }

    /// Inverse of point(); throws std::invalid_argument for non-members.
    std::uint32_t label_of(IntPoint p) const;
    bool contains(IntPoint p) const;
    /// True when c has integral odd coordinates inside the constellation.
    bool contains(cplx c) const;

    /// Per-axis alphabet {-(L-1), ..., -1, 1, ..., L-1}, ascending.
    std::vector<int> coordinate_alphabet() const;

    /// Average |p|^2, equal to 2(2^m - 1)/3.
    double energy() const;

private:
    friend Constellation make_qam(int m);
    Constellation() = default;

    int level_index(int coordinate) const { return (coordinate + levels_ - 1) / 2; }

    int m_ = 0;
    int levels_ = 0;
    std::vector<IntPoint> points_;
    std::vector<std::uint32_t> gray_of_level_;
    std::vector<std::uint32_t> level_of_gray_;
};

/// Builds 2^m-QAM. m must be even with 2 <= m <= 16.
Constellation make_qam(int m);

std::uint32_t gray_encode(std::uint32_t v);
std::uint32_t gray_decode(std::uint32_t g);

struct Papr {
    double ratio = 0.0;
    double db = 0.0;
};

/// max|p|^2 / mean|p|^2 over a point set.
Papr set_papr(std::span<const cplx> points);

inline double to_db(double ratio) { return 10.0 * std::log10(ratio); }

}  // namespace intstbc
