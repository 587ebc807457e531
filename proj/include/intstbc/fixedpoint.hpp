#pragma once

#include <span>
#include <vector>

#include "intstbc/design.hpp"

namespace intstbc {

/// q-bit signed fixed point: one sign bit and q-1 fractional bits.
/// Grid is {k / 2^{q-1} : -2^{q-1} <= k <= 2^{q-1} - 1}.
struct QuantizerConfig {
    int q = 0;
    /// Power of two that every operand is divided by before quantization.
    double scale = 1.0;
};

/// Q_q(y) = round(y 2^{q-1}) / 2^{q-1}, ties away from zero.
/// Requires q >= 2 and |y| <= 1 - 2^{-q} or y == -1; throws std::domain_error otherwise.
double quantize(double y, int q);

/// Same rounding, but values past either grid end clamp to that end.
double quantize_saturating(double y, int q);

/// mn/2 + 1: bits per real dimension that make the integer code exact.
int min_bits_integer_code(int n, int m);

/// Smallest power of two strictly greater than every basis coordinate,
/// constellation coordinate and exact codeword coordinate magnitude.
double encoder_scale(const LinearDesign& design, const Constellation& constellation);

/// Fixed-point encoder model with a wide accumulator.
///
/// Basis coefficients and symbol coordinates are stored as value/scale on the
/// q-bit grid. Products and sums are exact; each entry coordinate of the MAC
/// output is then put back on the grid (as entry/scale) and rescaled.
class QuantizedEncoder {
public:
    QuantizedEncoder(const LinearDesign& design, const Constellation& constellation, int q);

    const QuantizerConfig& config() const { return config_; }

    /// Unchecked fast path on real coordinates.
    CMatrix encode_coordinates(std::span<const double> coords) const;

    Codeword encode(std::span<const cplx> symbols) const;

private:
    LinearDesign design_;
    Constellation constellation_;
    QuantizerConfig config_;
    /// Quantized basis, already multiplied back by scale.
    std::vector<CMatrix> basis_;
};

/// One-shot helper around QuantizedEncoder.
Codeword quantized_encode(const LinearDesign& design, const Constellation& constellation,
                          std::span<const cplx> symbols, int q);

}  // namespace intstbc
