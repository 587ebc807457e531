#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "intstbc/constellation.hpp"

namespace intstbc {

using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

enum class DesignFamily { integer, alamouti, golden };

/// Real-linear dispersion form of an n x n STBC.
///
/// Real information coordinate d multiplies basis[d]. Coordinates come in
/// (re, im) pairs, so complex symbol s owns coordinates 2s and 2s+1.
struct LinearDesign {
    std::string name;
    DesignFamily family = DesignFamily::integer;
    int n = 0;
    int k_real = 0;
    std::vector<CMatrix> basis;
    /// All basis entries lie in Z[i].
    bool exact_integer = false;
    /// Integer designs only: the circulant weight 2^{m/2}; zero otherwise.
    int alpha = 0;

    int symbol_count() const { return k_real / 2; }
};

struct Codeword {
    CMatrix entries;
    /// Power-normalization factor already applied to entries.
    double norm_scale = 1.0;
};

/// Integer full-rate design: row k, column c carries
/// gamma^[c<k] * <Phi_k, x_j> with j = (c - k) mod n, Phi the circulant
/// built from powers of alpha = 2^{m/2}, and gamma = i.
///
/// Layer j, symbol p maps to complex symbol index j*n + p.
/// Requires n >= 2, even m in [2, 16] and n*m/2 <= 24.
LinearDesign integer_design(int n, int m);

/// [[x1, -x2*], [x2, x1*]].
LinearDesign alamouti_design();

/// Golden code with theta = (1+sqrt5)/2, a = 1 + i(1-theta):
/// (1/sqrt5) [[a(x1+theta x2), a(x3+theta x4)],
///            [i abar(x3+thetabar x4), abar(x1+thetabar x2)]].
LinearDesign golden_design();

/// Looks up a design by its CLI name ("ic", "integer", "alamouti", "golden").
/// n and m are only used by the integer family.
LinearDesign make_design(const std::string& code, int n, int m);

/// Circulant matrix with row k = [alpha^{(p-k) mod n}]_p.
RMatrix circulant_phi(int n, int alpha);

/// Unnormalized codeword for a vector of real coordinates. No alphabet check;
/// the map is linear over the reals.
CMatrix encode_coordinates(const LinearDesign& design, std::span<const double> coords);

/// Symbols -> real coordinates (re, im interleaved).
std::vector<double> symbols_to_coordinates(std::span<const cplx> symbols);

/// Throws std::invalid_argument on a wrong symbol count or a non-member symbol.
void validate_symbols(const LinearDesign& design, const Constellation& constellation,
                      std::span<const cplx> symbols);

/// Validating encoder. Throws std::invalid_argument on a wrong symbol count or
/// on any symbol outside the constellation.
Codeword encode(const LinearDesign& design, const Constellation& constellation,
                std::span<const cplx> symbols);

/// Average |entry|^2 over positions for uniform i.i.d. symbols.
double average_entry_power(const LinearDesign& design, const Constellation& constellation);

/// c = 1/sqrt(n * E_entry), giving unit expected transmit power per channel use.
double normalize(const LinearDesign& design, const Constellation& constellation);

/// Real-stacked vec(sqrt(1/n) H B_d) as column d. Stacking is column-major
/// over matrix entries with (re, im) interleaved, matching stack_real().
RMatrix effective_channel(const LinearDesign& design, const CMatrix& h);

/// Column-major vectorization with (re, im) interleaved.
RVector stack_real(const CMatrix& m);

}  // namespace intstbc
