#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "intstbc/constellation.hpp"
#include "intstbc/design.hpp"

namespace intstbc {

/// Real-valued ML detection problem: minimize ||received - effective s||^2
/// over s with every coordinate drawn from alphabet.
struct DetectionProblem {
    /// 2n^2 x k_real, normalization already folded in.
    RMatrix effective;
    RVector received;
    /// Odd integers, ascending; the same for every coordinate.
    std::vector<int> alphabet;
};

/// Builds the problem for Y = sqrt(1/n) H (c X) + Z.
DetectionProblem make_detection_problem(const LinearDesign& design, const Constellation& constellation,
                                        const CMatrix& h, const CMatrix& y, double norm_scale);

/// ||received - effective s||^2, evaluated the same way by every decoder so
/// ties compare bit-for-bit.
double residual_norm_sq(const DetectionProblem& p, std::span<const int> s);

/// Largest search space ml_decode_exhaustive accepts.
inline constexpr std::uint64_t kExhaustiveSearchCap = std::uint64_t{1} << 24;

/// Brute-force ML over |alphabet|^k candidates. Ties go to the
/// lexicographically smallest coordinate vector.
/// Throws BudgetExceeded above kExhaustiveSearchCap.
std::vector<int> ml_decode_exhaustive(const DetectionProblem& p);

struct SphereResult {
    std::vector<int> coords;
    std::uint64_t visited_nodes = 0;
    /// The Gram matrix needed diagonal loading to factor.
    bool regularized = false;
};

/// Depth-first sphere decoder on a column-pivoted triangularization with
/// Schnorr-Euchner child order. Returns the exhaustive answer, tie rule
/// included. A radius that admits no point falls back to an unbounded search.
SphereResult sphere_decode(const DetectionProblem& p,
                           double initial_radius = std::numeric_limits<double>::infinity());

}  // namespace intstbc
