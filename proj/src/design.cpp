#include "intstbc/design.hpp"

#include <cmath>
#include <stdexcept>

namespace intstbc {

namespace {

constexpr cplx kI{0.0, 1.0};

}  // namespace

RMatrix circulant_phi(int n, int alpha)
{
    RMatrix phi(n, n);
    for (int k = 0; k < n; ++k) {
        for (int p = 0; p < n; ++p) {
            const int power = ((p - k) % n + n) % n;
            phi(k, p) = std::pow(static_cast<double>(alpha), power);
        }
    }
    return phi;
}

LinearDesign integer_design(int n, int m)
{
    if (n < 2) {
        throw std::invalid_argument("integer design needs n >= 2");
    }
    if (m < 2 || m > 16 || m % 2 != 0) {
        throw std::invalid_argument("integer design needs even m in [2, 16]");
    }
    if (n * m / 2 > 24) {
        throw std::invalid_argument("integer design entries exceed 2^24 dynamic range (n*m/2 > 24)");
    }

    LinearDesign d;
    d.name = "integer";
    d.family = DesignFamily::integer;
    d.n = n;
    d.k_real = 2 * n * n;
    d.exact_integer = true;
    d.alpha = 1 << (m / 2);

    const RMatrix phi = circulant_phi(n, d.alpha);
    d.basis.assign(static_cast<std::size_t>(d.k_real), CMatrix::Zero(n, n));

    for (int row = 0; row < n; ++row) {
        for (int col = 0; col < n; ++col) {
            const int layer = ((col - row) % n + n) % n;
            const cplx gamma = col < row ? kI : cplx{1.0, 0.0};
            for (int p = 0; p < n; ++p) {
                const int symbol = layer * n + p;
                const cplx w = gamma * phi(row, p);
                d.basis[static_cast<std::size_t>(2 * symbol)](row, col) = w;
                d.basis[static_cast<std::size_t>(2 * symbol + 1)](row, col) = w * kI;
            }
        }
    }
    return d;
}

LinearDesign alamouti_design()
{
    LinearDesign d;
    d.name = "alamouti";
    d.family = DesignFamily::alamouti;
    d.n = 2;
    d.k_real = 4;
    d.exact_integer = true;
    d.basis.assign(4, CMatrix::Zero(2, 2));

    // x1 = a + ib : [[x1, .], [., x1*]]
    d.basis[0](0, 0) = 1.0;
    d.basis[0](1, 1) = 1.0;
    d.basis[1](0, 0) = kI;
    d.basis[1](1, 1) = -kI;
    // x2 = c + id : [[., -x2*], [x2, .]]
    d.basis[2](0, 1) = -1.0;
    d.basis[2](1, 0) = 1.0;
    d.basis[3](0, 1) = kI;
    d.basis[3](1, 0) = kI;
    return d;
}

LinearDesign golden_design()
{
    const double theta = (1.0 + std::sqrt(5.0)) / 2.0;
    const double theta_bar = 1.0 - theta;
    const cplx a{1.0, 1.0 - theta};
    const cplx a_bar{1.0, 1.0 - theta_bar};
    const double s = 1.0 / std::sqrt(5.0);

    LinearDesign d;
    d.name = "golden";
    d.family = DesignFamily::golden;
    d.n = 2;
    d.k_real = 8;
    d.exact_integer = false;
    d.basis.assign(8, CMatrix::Zero(2, 2));

    // Symbols x1, x2 on the diagonal, x3, x4 off the diagonal.
    const cplx diag_top[2] = {s * a, s * a * theta};
    const cplx diag_bottom[2] = {s * a_bar, s * a_bar * theta_bar};
    const cplx off_top[2] = {s * a, s * a * theta};
    const cplx off_bottom[2] = {s * kI * a_bar, s * kI * a_bar * theta_bar};

    for (int t = 0; t < 2; ++t) {
        for (int part = 0; part < 2; ++part) {
            const cplx unit = part == 0 ? cplx{1.0, 0.0} : kI;
            CMatrix& bd = d.basis[static_cast<std::size_t>(2 * t + part)];
            bd(0, 0) = diag_top[t] * unit;
            bd(1, 1) = diag_bottom[t] * unit;
            CMatrix& bo = d.basis[static_cast<std::size_t>(2 * (t + 2) + part)];
            bo(0, 1) = off_top[t] * unit;
            bo(1, 0) = off_bottom[t] * unit;
        }
    }
    return d;
}

LinearDesign make_design(const std::string& code, int n, int m)
{
    if (code == "ic" || code == "integer") {
        return integer_design(n, m);
    }
    if (code == "alamouti") {
        return alamouti_design();
    }
    if (code == "golden" || code == "gc") {
        return golden_design();
    }
    throw std::invalid_argument("unknown code '" + code + "' (expected ic, golden or alamouti)");
}

CMatrix encode_coordinates(const LinearDesign& design, std::span<const double> coords)
{
    if (coords.size() != static_cast<std::size_t>(design.k_real)) {
        throw std::invalid_argument("coordinate count does not match design");
    }
    CMatrix x = CMatrix::Zero(design.n, design.n);
    for (std::size_t d = 0; d < coords.size(); ++d) {
        if (coords[d] != 0.0) {
            x += coords[d] * design.basis[d];
        }
    }
    return x;
}

std::vector<double> symbols_to_coordinates(std::span<const cplx> symbols)
{
    std::vector<double> coords;
    coords.reserve(2 * symbols.size());
    for (const auto& s : symbols) {
        coords.push_back(s.real());
        coords.push_back(s.imag());
    }
    return coords;
}

void validate_symbols(const LinearDesign& design, const Constellation& constellation,
                      std::span<const cplx> symbols)
{
    if (symbols.size() != static_cast<std::size_t>(design.symbol_count())) {
        throw std::invalid_argument("wrong symbol count: design takes " +
                                    std::to_string(design.symbol_count()));
    }
    for (const auto& s : symbols) {
        if (!constellation.contains(s)) {
            throw std::invalid_argument("symbol not in constellation");
        }
    }
}

Codeword encode(const LinearDesign& design, const Constellation& constellation,
                std::span<const cplx> symbols)
{
    validate_symbols(design, constellation, symbols);
    const auto coords = symbols_to_coordinates(symbols);
    return {encode_coordinates(design, coords), 1.0};
}

double average_entry_power(const LinearDesign& design, const Constellation& constellation)
{
    // Zero-mean independent coordinates: E|sum_d c_d B_d|^2 = var * sum_d |B_d|^2.
    const double coord_var = constellation.energy() / 2.0;
    double total = 0.0;
    for (const auto& b : design.basis) {
        total += b.squaredNorm();
    }
    return coord_var * total / static_cast<double>(design.n * design.n);
}

double normalize(const LinearDesign& design, const Constellation& constellation)
{
    const double e = average_entry_power(design, constellation);
    if (!(e > 0.0)) {
        throw std::invalid_argument("design has zero average entry power");
    }
    return 1.0 / std::sqrt(static_cast<double>(design.n) * e);
}

RVector stack_real(const CMatrix& m)
{
    RVector v(2 * m.size());
    Eigen::Index i = 0;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            v(i++) = m(r, c).real();
            v(i++) = m(r, c).imag();
        }
    }
    return v;
}

RMatrix effective_channel(const LinearDesign& design, const CMatrix& h)
{
    if (h.rows() != design.n || h.cols() != design.n) {
        throw std::invalid_argument("channel dimensions do not match design");
    }
    const double g = std::sqrt(1.0 / design.n);
    RMatrix out(2 * design.n * design.n, design.k_real);
    for (int d = 0; d < design.k_real; ++d) {
        out.col(d) = stack_real(g * (h * design.basis[static_cast<std::size_t>(d)]));
    }
    return out;
}

}  // namespace intstbc
