#include <doctest.h>

#include <stdexcept>

#include "intstbc/fixedpoint.hpp"
#include "intstbc/rng.hpp"

using namespace intstbc;

namespace {

std::vector<cplx> random_symbols(const Constellation& c, int count, RngStream& rng)
{
    std::vector<cplx> s;
    for (int i = 0; i < count; ++i) {
        s.push_back(c.points()[rng.uniform_index(c.size())].value());
    }
    return s;
}

std::vector<cplx> symbols_of(const Constellation& c, std::uint32_t index, int count)
{
    std::vector<cplx> s;
    for (int i = 0; i < count; ++i) {
        s.push_back(c.points()[index % c.size()].value());
        index /= static_cast<std::uint32_t>(c.size());
    }
    return s;
}

double max_deviation(const CMatrix& a, const CMatrix& b)
{
    return std::max((a - b).real().cwiseAbs().maxCoeff(), (a - b).imag().cwiseAbs().maxCoeff());
}

}  // namespace

TEST_CASE("quantize examples")
{
    CHECK(quantize(0.3, 3) == 0.25);
    CHECK(quantize(-1.0, 2) == -1.0);
    CHECK(quantize(0.375, 3) == 0.5);
    CHECK(quantize(-0.375, 3) == -0.5);
    CHECK(quantize(0.125, 3) == 0.25);
    CHECK(quantize(0.0, 8) == 0.0);
}

TEST_CASE("quantize is the identity on its grid")
{
    for (int q = 2; q <= 12; ++q) {
        const int steps = 1 << (q - 1);
        bool ok = true;
        for (int k = -steps; k < steps; ++k) {
            const double g = static_cast<double>(k) / steps;
            ok &= quantize(g, q) == g;
        }
        CHECK(ok);
    }
}

TEST_CASE("quantize domain")
{
    CHECK_THROWS_AS(quantize(1.0, 4), std::domain_error);
    CHECK_THROWS_AS(quantize(-1.01, 4), std::domain_error);
    CHECK_THROWS_AS(quantize(0.97, 4), std::domain_error);
    CHECK_NOTHROW(quantize(1.0 - std::ldexp(1.0, -4), 4));
    CHECK_THROWS_AS(quantize(0.1, 1), std::invalid_argument);
    CHECK(quantize_saturating(5.0, 3) == 0.75);
    CHECK(quantize_saturating(-5.0, 3) == -1.0);
}

TEST_CASE("quantize: monotone, odd symmetric off ties, error at most 2^-q")
{
    for (int q : {2, 3, 5, 8, 13}) {
        CAPTURE(q);
        const double limit = 1.0 - std::ldexp(1.0, -q);
        const double steps = std::ldexp(1.0, q - 1);
        const int points = 200001;
        double prev = -2.0;
        bool monotone = true;
        bool odd = true;
        double worst = 0.0;
        for (int i = 0; i < points; ++i) {
            const double y = -limit + 2.0 * limit * i / (points - 1);
            const double v = quantize(y, q);
            monotone &= v >= prev;
            prev = v;
            worst = std::max(worst, std::abs(v - y));
            const double scaled = y * steps;
            if (scaled - std::floor(scaled) != 0.5) {
                odd &= quantize(-y, q) == -v;
            }
        }
        CHECK(monotone);
        CHECK(odd);
        CHECK(worst <= std::ldexp(1.0, -q));
    }
}

TEST_CASE("minimum bits for the integer code")
{
    CHECK(min_bits_integer_code(2, 2) == 3);
    CHECK(min_bits_integer_code(2, 4) == 5);
    CHECK(min_bits_integer_code(2, 6) == 7);
    CHECK(min_bits_integer_code(3, 4) == 7);
    CHECK(min_bits_integer_code(4, 2) == 5);
    CHECK_THROWS_AS(min_bits_integer_code(1, 2), std::invalid_argument);
    CHECK_THROWS_AS(min_bits_integer_code(2, 5), std::invalid_argument);
}

TEST_CASE("encoder scale")
{
    CHECK(encoder_scale(integer_design(2, 2), make_qam(2)) == 4.0);
    CHECK(encoder_scale(integer_design(2, 4), make_qam(4)) == 16.0);
    CHECK(encoder_scale(integer_design(4, 2), make_qam(2)) == 16.0);
    CHECK(encoder_scale(golden_design(), make_qam(2)) == 2.0);
}

TEST_CASE("integer code is exact with mn/2 + 1 bits")
{
    const auto d = integer_design(2, 2);
    const auto c = make_qam(2);
    const QuantizedEncoder enc(d, c, 3);
    for (std::uint32_t i = 0; i < 256; ++i) {
        const auto s = symbols_of(c, i, 4);
        REQUIRE((enc.encode(s).entries - encode(d, c, s).entries).norm() == 0.0);
    }

    RngStream rng(12);
    for (auto [n, m] : {std::pair{2, 4}, {3, 2}, {4, 2}, {2, 6}, {3, 4}}) {
        CAPTURE(n);
        CAPTURE(m);
        const auto dd = integer_design(n, m);
        const auto cc = make_qam(m);
        for (int q : {min_bits_integer_code(n, m), min_bits_integer_code(n, m) + 3}) {
            const QuantizedEncoder e(dd, cc, q);
            bool exact = true;
            for (int t = 0; t < 10000; ++t) {
                const auto s = random_symbols(cc, n * n, rng);
                exact &= (e.encode(s).entries - encode(dd, cc, s).entries).norm() == 0.0;
            }
            CHECK(exact);
        }
    }
}

TEST_CASE("one bit fewer breaks integer exactness")
{
    const auto d = integer_design(2, 2);
    const auto c = make_qam(2);
    double worst = 0.0;
    for (std::uint32_t i = 0; i < 256; ++i) {
        const auto s = symbols_of(c, i, 4);
        worst = std::max(worst, max_deviation(quantized_encode(d, c, s, 2).entries, encode(d, c, s).entries));
    }
    CHECK(worst > 0.0);
}

TEST_CASE("golden code deviation shrinks with q")
{
    const auto d = golden_design();
    const auto c = make_qam(2);
    double prev = std::numeric_limits<double>::infinity();
    for (int q = 4; q <= 12; ++q) {
        CAPTURE(q);
        const QuantizedEncoder enc(d, c, q);
        double worst = 0.0;
        for (std::uint32_t i = 0; i < 256; ++i) {
            const auto s = symbols_of(c, i, 4);
            worst = std::max(worst, max_deviation(enc.encode(s).entries, encode(d, c, s).entries));
        }
        if (q == 7) {
            CHECK(worst > 0.0);
        }
        CHECK(worst <= prev);
        prev = worst;
    }
}

TEST_CASE("quantized encoder rejects useless q and bad symbols")
{
    CHECK_THROWS_AS(QuantizedEncoder(integer_design(2, 16), make_qam(16), 2), std::invalid_argument);
    CHECK_THROWS_AS(QuantizedEncoder(integer_design(2, 2), make_qam(2), 1), std::invalid_argument);
    const QuantizedEncoder enc(integer_design(2, 2), make_qam(2), 3);
    CHECK_THROWS_AS(enc.encode(std::vector<cplx>(4, cplx{0, 0})), std::invalid_argument);
    CHECK_THROWS_AS(enc.encode(std::vector<cplx>(2, cplx{1, 1})), std::invalid_argument);
    CHECK(enc.config().scale == 4.0);
    CHECK(enc.config().q == 3);
}
