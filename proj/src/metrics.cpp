#include "intstbc/metrics.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "intstbc/errors.hpp"
#include "intstbc/rng.hpp"
#include "zigzag.hpp"

namespace intstbc {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

using BigInt = boost::multiprecision::checked_int512_t;

struct GaussInt {
    BigInt re = 0;
    BigInt im = 0;
    bool is_zero() const { return re == 0 && im == 0; }
};

GaussInt mul(const GaussInt& a, const GaussInt& b)
{
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
GaussInt sub(const GaussInt& a, const GaussInt& b) { return {a.re - b.re, a.im - b.im}; }

/// Exact quotient of Gaussian integers known to divide.
GaussInt exact_div(const GaussInt& num, const GaussInt& den)
{
    const BigInt dn = den.re * den.re + den.im * den.im;
    const BigInt qr = num.re * den.re + num.im * den.im;
    const BigInt qi = num.im * den.re - num.re * den.im;
    if (qr % dn != 0 || qi % dn != 0) {
        throw std::logic_error("inexact Gaussian-integer division in determinant");
    }
    return {qr / dn, qi / dn};
}

/// Fraction-free (Bareiss) determinant over Z[i].
GaussInt gauss_determinant(std::vector<GaussInt> a, int n)
{
    // Minors are bounded by the Hadamard bound; keep it well inside 512 bits.
    long double hadamard = 1.0L;
    for (int r = 0; r < n; ++r) {
        long double row = 0.0L;
        for (int c = 0; c < n; ++c) {
            const auto& v = a[static_cast<std::size_t>(r * n + c)];
            const auto re = v.re.convert_to<long double>();
            const auto im = v.im.convert_to<long double>();
            row += re * re + im * im;
        }
        hadamard *= std::sqrt(row);
    }
    if (hadamard >= std::ldexp(1.0L, 120)) {
        throw BudgetExceeded("difference matrix determinant exceeds the exact integer range");
    }

    auto at = [&](int r, int c) -> GaussInt& { return a[static_cast<std::size_t>(r * n + c)]; };
    bool negate = false;
    GaussInt prev{1, 0};
    for (int k = 0; k < n - 1; ++k) {
        if (at(k, k).is_zero()) {
            int swap_row = -1;
            for (int r = k + 1; r < n; ++r) {
                if (!at(r, k).is_zero()) {
                    swap_row = r;
                    break;
                }
            }
            if (swap_row < 0) {
                return {};
            }
            for (int c = 0; c < n; ++c) {
                std::swap(at(k, c), at(swap_row, c));
            }
            negate = !negate;
        }
        for (int r = k + 1; r < n; ++r) {
            for (int c = k + 1; c < n; ++c) {
                at(r, c) = exact_div(sub(mul(at(r, c), at(k, k)), mul(at(r, k), at(k, c))), prev);
            }
        }
        prev = at(k, k);
    }
    GaussInt det = at(n - 1, n - 1);
    if (negate) {
        det = {-det.re, -det.im};
    }
    return det;
}

double norm_sq(const GaussInt& g)
{
    return (g.re * g.re + g.im * g.im).convert_to<double>();
}

std::vector<int> difference_alphabet(const Constellation& constellation)
{
    std::vector<int> out;
    const int lim = 2 * constellation.max_coordinate();
    for (int v = -lim; v <= lim; v += 2) {
        out.push_back(v);
    }
    return out;
}

std::uint64_t saturating_pow(std::uint64_t base, int exp)
{
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > std::numeric_limits<std::uint64_t>::max() / base) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        r *= base;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Exhaustive 2x2 enumeration.
//
// Entries are stored row-major as (re, im) pairs: e00, e01, e10, e11.

template <typename T>
using Entries = std::array<T, 8>;

template <typename T>
struct Tally {
    std::uint64_t visited = 0;
    std::uint64_t zero_det = 0;
    T min_trace = std::numeric_limits<T>::max();
    // Exact path keeps |det|^2 in 128 bits; float path in double.
    std::conditional_t<std::is_integral_v<T>, u128, double> min_det_sq =
        std::numeric_limits<std::conditional_t<std::is_integral_v<T>, u128, double>>::max();

    void merge(const Tally& o)
    {
        visited += o.visited;
        zero_det += o.zero_det;
        min_trace = std::min(min_trace, o.min_trace);
        min_det_sq = std::min(min_det_sq, o.min_det_sq);
    }
};

template <typename T>
inline void evaluate(const Entries<T>& e, Tally<T>& t)
{
    ++t.visited;
    T trace = 0;
    for (T v : e) {
        trace += v * v;
    }
    if (trace == 0) {
        return;
    }
    t.min_trace = std::min(t.min_trace, trace);

    const T det_re = e[0] * e[6] - e[1] * e[7] - (e[2] * e[4] - e[3] * e[5]);
    const T det_im = e[0] * e[7] + e[1] * e[6] - (e[2] * e[5] + e[3] * e[4]);
    if constexpr (std::is_integral_v<T>) {
        if (det_re == 0 && det_im == 0) {
            ++t.zero_det;
            return;
        }
        const u128 d2 = static_cast<u128>(static_cast<i128>(det_re) * det_re) +
                        static_cast<u128>(static_cast<i128>(det_im) * det_im);
        t.min_det_sq = std::min(t.min_det_sq, d2);
    }
    else {
        const double d2 = det_re * det_re + det_im * det_im;
        // |det| <= trace/2 for 2x2; anything this far below is rounding noise.
        if (d2 <= 1e-20 * trace * trace) {
            ++t.zero_det;
            return;
        }
        t.min_det_sq = std::min(t.min_det_sq, d2);
    }
}

template <typename T>
Entries<T> add(const Entries<T>& a, const Entries<T>& b)
{
    Entries<T> r;
    for (std::size_t i = 0; i < 8; ++i) {
        r[i] = a[i] + b[i];
    }
    return r;
}

template <typename T>
class Enumerator2x2 {
public:
    Enumerator2x2(std::vector<std::vector<Entries<T>>> contrib) : contrib_(std::move(contrib))
    {
        const std::size_t k = contrib_.size();
        const auto& a = contrib_[k - 2];
        const auto& b = contrib_[k - 1];
        tail_.reserve(a.size() * b.size());
        for (const auto& x : a) {
            for (const auto& y : b) {
                tail_.push_back(add(x, y));
            }
        }
    }

    /// Covers the outer-coordinate indices congruent to worker mod workers.
    Tally<T> run(std::size_t worker, std::size_t workers) const
    {
        Tally<T> tally;
        const auto& outer = contrib_[0];
        for (std::size_t i = worker; i < outer.size(); i += workers) {
            recurse(1, outer[i], tally);
        }
        return tally;
    }

private:
    void recurse(std::size_t level, const Entries<T>& acc, Tally<T>& tally) const
    {
        if (level == contrib_.size() - 2) {
            for (const auto& t : tail_) {
                evaluate(add(acc, t), tally);
            }
            return;
        }
        for (const auto& c : contrib_[level]) {
            recurse(level + 1, add(acc, c), tally);
        }
    }

    std::vector<std::vector<Entries<T>>> contrib_;
    std::vector<Entries<T>> tail_;
};

template <typename T>
Tally<T> enumerate_2x2(const LinearDesign& design, const std::vector<int>& alphabet, int workers)
{
    std::vector<std::vector<Entries<T>>> contrib;
    contrib.reserve(design.basis.size());
    for (const auto& b : design.basis) {
        Entries<T> unit{};
        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 2; ++c) {
                const auto idx = static_cast<std::size_t>(2 * (2 * r + c));
                if constexpr (std::is_integral_v<T>) {
                    unit[idx] = static_cast<T>(std::llround(b(r, c).real()));
                    unit[idx + 1] = static_cast<T>(std::llround(b(r, c).imag()));
                }
                else {
                    unit[idx] = b(r, c).real();
                    unit[idx + 1] = b(r, c).imag();
                }
            }
        }
        std::vector<Entries<T>> row;
        for (int v : alphabet) {
            Entries<T> e;
            for (std::size_t i = 0; i < 8; ++i) {
                e[i] = static_cast<T>(v) * unit[i];
            }
            row.push_back(e);
        }
        contrib.push_back(std::move(row));
    }

    const Enumerator2x2<T> en(std::move(contrib));
    const auto n_workers = static_cast<std::size_t>(std::max(1, workers));
    std::vector<Tally<T>> partial(n_workers);
    if (n_workers == 1) {
        partial[0] = en.run(0, 1);
    }
    else {
        std::vector<std::thread> threads;
        for (std::size_t w = 0; w < n_workers; ++w) {
            threads.emplace_back([&, w] { partial[w] = en.run(w, n_workers); });
        }
        for (auto& t : threads) {
            t.join();
        }
    }
    Tally<T> total = partial[0];
    for (std::size_t w = 1; w < n_workers; ++w) {
        total.merge(partial[w]);
    }
    return total;
}

bool integral_basis(const LinearDesign& design)
{
    for (const auto& b : design.basis) {
        for (Eigen::Index i = 0; i < b.size(); ++i) {
            const cplx v = b(i);
            if (v.real() != std::round(v.real()) || v.imag() != std::round(v.imag())) {
                return false;
            }
        }
    }
    return true;
}

DifferenceSpectrum exhaustive_spectrum(const LinearDesign& design, const Constellation& constellation,
                                       const SpectrumOptions& options)
{
    if (design.n != 2) {
        throw std::invalid_argument("exhaustive difference enumeration supports n = 2 only; use sampled mode");
    }
    if (design.k_real < 3) {
        throw std::invalid_argument("design needs at least three real dimensions");
    }
    const auto count = difference_vector_count(design, constellation);
    const auto cap = options.allow_long ? kExhaustiveLongCap : kExhaustiveCap;
    if (count > cap) {
        throw BudgetExceeded("exhaustive enumeration of " + std::to_string(count) +
                             " difference vectors exceeds the cap of " + std::to_string(cap) +
                             (options.allow_long ? "" : " (allow long runs to raise it)"));
    }

    const auto alphabet = difference_alphabet(constellation);
    const double c = normalize(design, constellation);
    const double c2n = std::pow(c, 2 * design.n);

    DifferenceSpectrum out;
    out.norm_scale = c;
    out.exhaustive = true;

    auto fill = [&](const auto& tally, double trace_min, double det_min) {
        out.distinct_count = tally.visited;
        out.zero_det_count = tally.zero_det;
        out.zero_det_percent = 100.0 * static_cast<double>(tally.zero_det) / static_cast<double>(tally.visited);
        out.min_trace = trace_min * c * c;
        out.min_det_sq = det_min * c2n;
    };

    if (design.exact_integer && integral_basis(design)) {
        const auto tally = enumerate_2x2<std::int64_t>(design, alphabet, options.workers);
        const bool have_det = tally.min_det_sq != std::numeric_limits<u128>::max();
        fill(tally, static_cast<double>(tally.min_trace),
             have_det ? static_cast<double>(tally.min_det_sq) : 0.0);
    }
    else {
        const auto tally = enumerate_2x2<double>(design, alphabet, options.workers);
        const bool have_det = tally.min_det_sq != std::numeric_limits<double>::max();
        fill(tally, tally.min_trace, have_det ? tally.min_det_sq : 0.0);
    }
    return out;
}

DifferenceSpectrum sampled_spectrum(const LinearDesign& design, const Constellation& constellation,
                                    const SpectrumOptions& options)
{
    if (options.sample_budget == 0) {
        throw std::invalid_argument("sampled difference spectrum needs a sample budget");
    }
    const double c = normalize(design, constellation);
    const int n = design.n;
    const bool exact = design.exact_integer && integral_basis(design);
    const auto& points = constellation.points();

    std::uint64_t zero_det = 0;
    double min_trace = std::numeric_limits<double>::infinity();
    double min_det_sq = std::numeric_limits<double>::infinity();
    std::vector<double> diff(static_cast<std::size_t>(design.k_real));

    for (std::uint64_t i = 0; i < options.sample_budget; ++i) {
        RngStream rng = RngStream::derive(options.seed, 0x5d1ffull, i);
        bool nonzero = false;
        for (int s = 0; s < design.symbol_count(); ++s) {
            const IntPoint a = points[rng.uniform_index(points.size())];
            const IntPoint b = points[rng.uniform_index(points.size())];
            diff[static_cast<std::size_t>(2 * s)] = a.re - b.re;
            diff[static_cast<std::size_t>(2 * s + 1)] = a.im - b.im;
            nonzero = nonzero || a.re != b.re || a.im != b.im;
        }
        if (!nonzero) {
            continue;
        }
        const CMatrix dx = encode_coordinates(design, diff);
        const double trace = dx.squaredNorm();
        min_trace = std::min(min_trace, trace);

        double d2 = 0.0;
        bool singular = false;
        if (exact) {
            std::vector<GaussInt> g(static_cast<std::size_t>(n * n));
            for (int r = 0; r < n; ++r) {
                for (int col = 0; col < n; ++col) {
                    g[static_cast<std::size_t>(r * n + col)] = {
                        BigInt(std::llround(dx(r, col).real())),
                        BigInt(std::llround(dx(r, col).imag()))};
                }
            }
            const GaussInt det = gauss_determinant(std::move(g), n);
            singular = det.is_zero();
            d2 = norm_sq(det);
        }
        else {
            const cplx det = dx.determinant();
            d2 = std::norm(det);
            singular = d2 <= 1e-20 * std::pow(trace / n, n);
        }
        if (singular) {
            ++zero_det;
        }
        else {
            min_det_sq = std::min(min_det_sq, d2);
        }
    }

    DifferenceSpectrum out;
    out.exhaustive = false;
    out.norm_scale = c;
    out.distinct_count = options.sample_budget;
    out.zero_det_count = zero_det;
    out.zero_det_percent = 100.0 * static_cast<double>(zero_det) / static_cast<double>(options.sample_budget);
    if (design.family == DesignFamily::integer) {
        out.min_trace = normalized_min_trace(design, constellation);
    }
    else {
        out.min_trace = std::isfinite(min_trace) ? min_trace * c * c : 0.0;
    }
    out.min_det_sq = std::isfinite(min_det_sq) ? min_det_sq * std::pow(c, 2 * n) : 0.0;
    return out;
}

}  // namespace

double papr_qam_closed_form(std::uint64_t k)
{
    if (k < 4 || !std::has_single_bit(k) || std::countr_zero(k) % 2 != 0) {
        throw std::invalid_argument("closed-form QAM PAPR needs K a power of 4, got " + std::to_string(k));
    }
    const double side = std::ldexp(1.0, std::countr_zero(k) / 2);
    return 3.0 * (side - 1.0) / (side + 1.0);
}

Papr code_papr(const LinearDesign& design, const Constellation& constellation, const PaprOptions& options)
{
    if (design.family == DesignFamily::integer && design.alpha == constellation.levels()) {
        // Every position carries a regular M^n-QAM point.
        const int bits = constellation.bits_per_symbol() * design.n;
        const double ratio = papr_qam_closed_form(std::uint64_t{1} << bits);
        return {ratio, to_db(ratio)};
    }
    return entry_alphabet_papr(design, constellation, options);
}

Papr entry_alphabet_papr(const LinearDesign& design, const Constellation& constellation,
                         const PaprOptions& options)
{
    const auto& points = constellation.points();
    const auto m_points = static_cast<std::uint64_t>(points.size());

    struct Term {
        cplx on_re;
        cplx on_im;
    };

    double peak = 0.0;
    double mean_sum = 0.0;
    bool sample = false;

    for (int r = 0; r < design.n && !sample; ++r) {
        for (int c = 0; c < design.n && !sample; ++c) {
            std::vector<Term> terms;
            for (int s = 0; s < design.symbol_count(); ++s) {
                const cplx a = design.basis[static_cast<std::size_t>(2 * s)](r, c);
                const cplx b = design.basis[static_cast<std::size_t>(2 * s + 1)](r, c);
                if (a != cplx{} || b != cplx{}) {
                    terms.push_back({a, b});
                }
            }
            const auto size = saturating_pow(m_points, static_cast<int>(terms.size()));
            if (size > options.max_alphabet) {
                if (!options.allow_sampling) {
                    throw BudgetExceeded("entry alphabet of " + std::to_string(size) +
                                         " points is too large to enumerate; enable sampling");
                }
                sample = true;
                break;
            }
            if (terms.empty()) {
                continue;
            }

            // Odometer over the involved symbols.
            std::vector<std::size_t> idx(terms.size(), 0);
            double sum = 0.0;
            for (std::uint64_t it = 0; it < size; ++it) {
                cplx e{};
                for (std::size_t t = 0; t < terms.size(); ++t) {
                    const IntPoint p = points[idx[t]];
                    e += terms[t].on_re * static_cast<double>(p.re) + terms[t].on_im * static_cast<double>(p.im);
                }
                const double e2 = std::norm(e);
                peak = std::max(peak, e2);
                sum += e2;
                for (std::size_t t = 0; t < terms.size(); ++t) {
                    if (++idx[t] < points.size()) {
                        break;
                    }
                    idx[t] = 0;
                }
            }
            mean_sum += sum / static_cast<double>(size);
        }
    }

    if (sample) {
        peak = 0.0;
        mean_sum = 0.0;
        std::vector<double> coords(static_cast<std::size_t>(design.k_real));
        for (std::uint64_t i = 0; i < options.sample_budget; ++i) {
            RngStream rng = RngStream::derive(options.seed, 0x9a97ull, i);
            for (int s = 0; s < design.symbol_count(); ++s) {
                const IntPoint p = points[rng.uniform_index(points.size())];
                coords[static_cast<std::size_t>(2 * s)] = p.re;
                coords[static_cast<std::size_t>(2 * s + 1)] = p.im;
            }
            const CMatrix x = encode_coordinates(design, coords);
            peak = std::max(peak, x.cwiseAbs2().maxCoeff());
            mean_sum += x.squaredNorm();
        }
        mean_sum /= static_cast<double>(options.sample_budget);
    }

    const double mean = mean_sum / static_cast<double>(design.n * design.n);
    if (!(mean > 0.0)) {
        throw std::invalid_argument("design has zero average entry power");
    }
    const double ratio = peak / mean;
    return {ratio, to_db(ratio)};
}

std::optional<double> published_papr_db(DesignFamily family, int n, int m)
{
    static const std::map<std::tuple<DesignFamily, int, int>, double> table = {
        {{DesignFamily::golden, 2, 2}, 2.77},  {{DesignFamily::golden, 2, 4}, 5.32},
        {{DesignFamily::golden, 2, 6}, 6.45},  {{DesignFamily::integer, 2, 2}, 2.55},
        {{DesignFamily::integer, 2, 4}, 4.21}, {{DesignFamily::integer, 2, 6}, 4.62},
        {{DesignFamily::integer, 3, 2}, 3.67}, {{DesignFamily::integer, 3, 4}, 4.63},
        {{DesignFamily::integer, 3, 6}, 4.75}, {{DesignFamily::integer, 4, 2}, 4.22},
        {{DesignFamily::integer, 4, 4}, 4.73}, {{DesignFamily::integer, 4, 6}, 5.59},
    };
    const auto it = table.find({family, n, m});
    if (it == table.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::uint64_t difference_vector_count(const LinearDesign& design, const Constellation& constellation)
{
    const auto width = static_cast<std::uint64_t>(2 * constellation.levels() - 1);
    return saturating_pow(width, design.k_real);
}

DifferenceSpectrum difference_spectrum(const LinearDesign& design, const Constellation& constellation,
                                       const SpectrumOptions& options)
{
    if (options.mode == SpectrumMode::exhaustive) {
        return exhaustive_spectrum(design, constellation, options);
    }
    return sampled_spectrum(design, constellation, options);
}

std::int64_t min_layer_trace(const LinearDesign& design, const Constellation& constellation,
                             std::uint64_t node_budget)
{
    if (design.family != DesignFamily::integer || design.alpha == 0) {
        throw std::invalid_argument("layer trace search needs an integer design");
    }
    const int n = design.n;
    const int dim = 2 * n;
    const RMatrix phi = circulant_phi(n, design.alpha);

    // ||Phi re||^2 + ||Phi im||^2 as one 2n-dimensional quadratic form.
    RMatrix g = RMatrix::Zero(dim, dim);
    g.topLeftCorner(n, n) = phi;
    g.bottomRightCorner(n, n) = phi;
    const RMatrix gram = g.transpose() * g;
    const RMatrix r = gram.llt().matrixU();

    std::vector<std::vector<std::int64_t>> phi_int(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        for (int p = 0; p < n; ++p) {
            phi_int[static_cast<std::size_t>(k)].push_back(static_cast<std::int64_t>(phi(k, p)));
        }
    }
    auto exact_trace = [&](const std::vector<int>& u) {
        i128 total = 0;
        for (int half = 0; half < 2; ++half) {
            for (int k = 0; k < n; ++k) {
                i128 dot = 0;
                for (int p = 0; p < n; ++p) {
                    dot += static_cast<i128>(phi_int[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)]) *
                           u[static_cast<std::size_t>(half * n + p)];
                }
                total += dot * dot;
            }
        }
        return total;
    };

    const int lim = 2 * constellation.max_coordinate();
    std::vector<int> u(static_cast<std::size_t>(dim), 0);
    u[0] = 2;
    i128 best = exact_trace(u);
    u[0] = 0;

    std::uint64_t nodes = 0;
    auto search = [&](auto&& self, int level, double partial) -> void {
        double offset = 0.0;
        for (int j = level + 1; j < dim; ++j) {
            offset += r(level, j) * u[static_cast<std::size_t>(j)];
        }
        const double diag = r(level, level);
        detail::Zigzag zz(-offset / diag, -lim, lim, 2);
        int v = 0;
        while (zz.next(v)) {
            const double t = diag * v + offset;
            const double next = partial + t * t;
            if (next > static_cast<double>(best) * (1.0 + 1e-12) + 1e-9) {
                break;
            }
            if (++nodes > node_budget) {
                throw BudgetExceeded("layer trace search exceeded its node budget");
            }
            u[static_cast<std::size_t>(level)] = v;
            if (level == 0) {
                if (std::any_of(u.begin(), u.end(), [](int x) { return x != 0; })) {
                    best = std::min(best, exact_trace(u));
                }
            }
            else {
                self(self, level - 1, next);
            }
        }
        u[static_cast<std::size_t>(level)] = 0;
    };
    search(search, dim - 1, 0.0);
    return static_cast<std::int64_t>(best);
}

double normalized_min_trace(const LinearDesign& design, const Constellation& constellation,
                            std::uint64_t node_budget)
{
    const double c = normalize(design, constellation);
    return static_cast<double>(min_layer_trace(design, constellation, node_budget)) * c * c;
}

}  // namespace intstbc
