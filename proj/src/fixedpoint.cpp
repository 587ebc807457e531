#include "intstbc/fixedpoint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace intstbc {

namespace {

void check_bits(int q)
{
    if (q < 2 || q > 52) {
        throw std::invalid_argument("quantizer needs 2 <= q <= 52, got " + std::to_string(q));
    }
}

double round_half_away(double v) { return v < 0.0 ? -std::floor(-v + 0.5) : std::floor(v + 0.5); }

double quantize_unchecked(double y, int q)
{
    const double steps = std::ldexp(1.0, q - 1);
    return round_half_away(y * steps) / steps;
}

cplx quantize_complex(cplx v, int q)
{
    return {intstbc::quantize_saturating(v.real(), q), intstbc::quantize_saturating(v.imag(), q)};
}

}  // namespace

double quantize(double y, int q)
{
    check_bits(q);
    const double limit = 1.0 - std::ldexp(1.0, -q);
    if (!(y == -1.0 || std::abs(y) <= limit)) {
        throw std::domain_error("quantizer input outside [-1, 1 - 2^-q]");
    }
    return quantize_unchecked(y, q);
}

double quantize_saturating(double y, int q)
{
    check_bits(q);
    const double steps = std::ldexp(1.0, q - 1);
    const double k = std::clamp(round_half_away(y * steps), -steps, steps - 1.0);
    return k / steps;
}

int min_bits_integer_code(int n, int m)
{
    // Validates (n, m) the same way the design does.
    (void)integer_design(n, m);
    return m * n / 2 + 1;
}

double encoder_scale(const LinearDesign& design, const Constellation& constellation)
{
    double peak = static_cast<double>(constellation.max_coordinate());
    for (const auto& b : design.basis) {
        peak = std::max({peak, b.real().cwiseAbs().maxCoeff(), b.imag().cwiseAbs().maxCoeff()});
    }

    // Extreme entry coordinates: for each position the largest |Re| and |Im|
    // is reached with every coordinate at +-max, aligned with its coefficient.
    const double cmax = constellation.max_coordinate();
    for (int r = 0; r < design.n; ++r) {
        for (int c = 0; c < design.n; ++c) {
            double re = 0.0;
            double im = 0.0;
            for (const auto& b : design.basis) {
                re += std::abs(b(r, c).real()) * cmax;
                im += std::abs(b(r, c).imag()) * cmax;
            }
            peak = std::max({peak, re, im});
        }
    }

    double scale = 1.0;
    while (scale <= peak) {
        scale *= 2.0;
    }
    return scale;
}

QuantizedEncoder::QuantizedEncoder(const LinearDesign& design, const Constellation& constellation,
                                   int q)
    : design_(design), constellation_(constellation)
{
    check_bits(q);
    config_.q = q;
    config_.scale = encoder_scale(design, constellation);

    bool any_basis = false;
    basis_.reserve(design.basis.size());
    for (const auto& b : design.basis) {
        CMatrix qb = b.unaryExpr([&](const cplx& v) { return quantize_complex(v / config_.scale, q); });
        any_basis = any_basis || !qb.isZero(0.0);
        basis_.push_back(qb * config_.scale);
    }

    bool any_symbol = false;
    for (int v : constellation.coordinate_alphabet()) {
        any_symbol = any_symbol || quantize_saturating(v / config_.scale, q) != 0.0;
    }
    if (!any_basis || !any_symbol) {
        throw std::invalid_argument("q = " + std::to_string(q) +
                                    " quantizes every operand to zero");
    }
}

CMatrix QuantizedEncoder::encode_coordinates(std::span<const double> coords) const
{
    const int q = config_.q;
    const double scale = config_.scale;
    CMatrix acc = CMatrix::Zero(design_.n, design_.n);
    for (std::size_t d = 0; d < coords.size(); ++d) {
        const double x = quantize_saturating(coords[d] / scale, q) * scale;
        if (x != 0.0) {
            acc += x * basis_[d];
        }
    }
    return acc.unaryExpr([&](const cplx& v) { return quantize_complex(v / scale, q) * scale; });
}

Codeword QuantizedEncoder::encode(std::span<const cplx> symbols) const
{
    validate_symbols(design_, constellation_, symbols);
    const auto coords = symbols_to_coordinates(symbols);
    return {encode_coordinates(coords), 1.0};
}

Codeword quantized_encode(const LinearDesign& design, const Constellation& constellation,
                          std::span<const cplx> symbols, int q)
{
    return QuantizedEncoder(design, constellation, q).encode(symbols);
}

}  // namespace intstbc
