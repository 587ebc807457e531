#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>

#include "intstbc/constellation.hpp"

using namespace intstbc;

namespace {

double brute_energy(const Constellation& c)
{
    double sum = 0.0;
    for (const auto& p : c.points()) {
        sum += std::norm(p.value());
    }
    return sum / static_cast<double>(c.size());
}

int popcount(std::uint32_t v) { return __builtin_popcount(v); }

}  // namespace

TEST_CASE("qam point sets and energy")
{
    const auto q4 = make_qam(2);
    CHECK(q4.size() == 4);
    CHECK(q4.energy() == 2.0);
    std::set<std::pair<int, int>> pts;
    for (const auto& p : q4.points()) {
        pts.insert({p.re, p.im});
    }
    CHECK(pts == std::set<std::pair<int, int>>{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}});

    const auto q16 = make_qam(4);
    CHECK(q16.size() == 16);
    CHECK(brute_energy(q16) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(q16.energy() == 10.0);

    const auto q64 = make_qam(6);
    CHECK(q64.size() == 64);
    CHECK(q64.energy() == 42.0);
    CHECK(brute_energy(q64) == doctest::Approx(42.0).epsilon(1e-15));
}

TEST_CASE("qam invariants for every supported m")
{
    for (int m = 2; m <= 16; m += 2) {
        CAPTURE(m);
        const auto c = make_qam(m);
        const int lmax = (1 << (m / 2)) - 1;
        CHECK(c.size() == (std::size_t{1} << m));
        CHECK(c.max_coordinate() == lmax);
        CHECK(c.energy() == 2.0 * (std::ldexp(1.0, m) - 1.0) / 3.0);
        if (m <= 10) {
            CHECK(brute_energy(c) == doctest::Approx(c.energy()).epsilon(1e-12));
        }

        bool coords_ok = true;
        bool symmetric = true;
        bool bijective = true;
        for (std::uint32_t label = 0; label < c.size(); ++label) {
            const IntPoint p = c.point(label);
            coords_ok &= (p.re % 2 != 0) && (p.im % 2 != 0) && std::abs(p.re) <= lmax && std::abs(p.im) <= lmax;
            symmetric &= c.contains(IntPoint{-p.re, -p.im}) && c.contains(IntPoint{p.im, p.re});
            bijective &= c.label_of(p) == label;
        }
        CHECK(coords_ok);
        CHECK(symmetric);
        CHECK(bijective);

        // Closed form PAPR 3(L-1)/(L+1).
        std::vector<cplx> values;
        for (const auto& p : c.points()) {
            values.push_back(p.value());
        }
        const double L = static_cast<double>(lmax + 1);
        CHECK(set_papr(values).ratio == doctest::Approx(3.0 * (L - 1.0) / (L + 1.0)).epsilon(1e-12));
    }
}

TEST_CASE("gray labels differ in one bit between axis neighbours")
{
    for (int m : {2, 4, 6, 8}) {
        CAPTURE(m);
        const auto c = make_qam(m);
        bool ok = true;
        for (const auto& p : c.points()) {
            for (const IntPoint nb : {IntPoint{p.re + 2, p.im}, IntPoint{p.re, p.im + 2}}) {
                if (c.contains(nb)) {
                    ok &= popcount(c.label_of(p) ^ c.label_of(nb)) == 1;
                }
            }
        }
        CHECK(ok);
    }
    for (std::uint32_t v = 0; v < 1024; ++v) {
        REQUIRE(gray_decode(gray_encode(v)) == v);
        if (v > 0) {
            REQUIRE(popcount(gray_encode(v) ^ gray_encode(v - 1)) == 1);
        }
    }
}

TEST_CASE("make_qam rejects unsupported m")
{
    for (int m : {-2, 0, 1, 3, 7, 18}) {
        CAPTURE(m);
        CHECK_THROWS_AS(make_qam(m), std::invalid_argument);
    }
}

TEST_CASE("membership and labels")
{
    const auto c = make_qam(4);
    CHECK(c.contains(cplx{3, -1}));
    CHECK_FALSE(c.contains(cplx{0, 0}));
    CHECK_FALSE(c.contains(cplx{2, 1}));
    CHECK_FALSE(c.contains(cplx{5, 1}));
    CHECK_FALSE(c.contains(cplx{1.5, 1}));
    CHECK_THROWS_AS(c.label_of(IntPoint{0, 1}), std::invalid_argument);
    CHECK(c.coordinate_alphabet() == std::vector<int>{-3, -1, 1, 3});
}

TEST_CASE("set_papr")
{
    const std::vector<cplx> qpsk{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    CHECK(set_papr(qpsk).ratio == doctest::Approx(1.0));
    CHECK(set_papr(qpsk).db == doctest::Approx(0.0));

    const auto c16 = make_qam(4);
    std::vector<cplx> q16;
    for (const auto& p : c16.points()) {
        q16.push_back(p.value());
    }
    CHECK(set_papr(q16).ratio == doctest::Approx(1.8));
    CHECK(set_papr(q16).db == doctest::Approx(2.5527).epsilon(1e-4));

    const auto c256 = make_qam(8);
    std::vector<cplx> q256;
    for (const auto& p : c256.points()) {
        q256.push_back(p.value());
    }
    CHECK(set_papr(q256).ratio == doctest::Approx(450.0 / 170.0));
    CHECK(set_papr(q256).db == doctest::Approx(4.2276).epsilon(1e-4));

    CHECK_THROWS_AS(set_papr(std::vector<cplx>{}), std::invalid_argument);
    CHECK_THROWS_AS(set_papr(std::vector<cplx>{{0, 0}, {0, 0}}), std::invalid_argument);
}
