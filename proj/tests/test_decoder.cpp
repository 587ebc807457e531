#include <doctest.h>

#include <stdexcept>

#include "intstbc/channel.hpp"
#include "intstbc/decoder.hpp"
#include "intstbc/errors.hpp"

using namespace intstbc;

namespace {

struct Instance {
    DetectionProblem problem;
    std::vector<int> sent;
    CMatrix h;
    CMatrix y;
};

Instance make_instance(const LinearDesign& d, const Constellation& c, double snr_db, RngStream& rng)
{
    Instance out;
    std::vector<double> coords;
    for (int s = 0; s < d.symbol_count(); ++s) {
        const IntPoint p = c.points()[rng.uniform_index(c.size())];
        out.sent.push_back(p.re);
        out.sent.push_back(p.im);
        coords.push_back(p.re);
        coords.push_back(p.im);
    }
    const double scale = normalize(d, c);
    Codeword x{scale * encode_coordinates(d, coords), scale};
    const double sigma2 = std::isfinite(snr_db) ? operating_point(1.0 / d.n, snr_db, 1.0, false) : 0.0;
    const auto ch = sample_channel(d.n, rng, sigma2);
    out.h = ch.h;
    out.y = transmit(x, ch, rng);
    out.problem = make_detection_problem(d, c, ch.h, out.y, scale);
    return out;
}

}  // namespace

TEST_CASE("noiseless detection returns the transmitted vector")
{
    RngStream rng(1);
    const auto d = integer_design(2, 2);
    const auto c = make_qam(2);
    const std::uint64_t tree_nodes = 2 + 4 + 8 + 16 + 32 + 64 + 128 + 256;
    for (int t = 0; t < 1000; ++t) {
        const auto inst = make_instance(d, c, std::numeric_limits<double>::infinity(), rng);
        REQUIRE(ml_decode_exhaustive(inst.problem) == inst.sent);
        const auto sd = sphere_decode(inst.problem);
        REQUIRE(sd.coords == inst.sent);
        REQUIRE(sd.visited_nodes <= tree_nodes);
        REQUIRE_FALSE(sd.regularized);
    }
}

TEST_CASE("problem shape")
{
    RngStream rng(2);
    const auto inst = make_instance(integer_design(2, 2), make_qam(2), 10.0, rng);
    CHECK(inst.problem.effective.rows() == 8);
    CHECK(inst.problem.effective.cols() == 8);
    CHECK(inst.problem.received.size() == 8);
    CHECK(inst.problem.alphabet == std::vector<int>{-1, 1});
    const auto inst16 = make_instance(integer_design(2, 4), make_qam(4), 10.0, rng);
    CHECK(inst16.problem.alphabet == std::vector<int>{-3, -1, 1, 3});
    CHECK_THROWS_AS(make_detection_problem(integer_design(2, 2), make_qam(2), inst.h, CMatrix::Zero(3, 3), 1.0),
                    std::invalid_argument);
}

TEST_CASE("sphere decoder matches the exhaustive oracle")
{
    RngStream rng(3);
    const auto c4 = make_qam(2);
    for (const auto& d : {integer_design(2, 2), golden_design(), alamouti_design()}) {
        CAPTURE(d.name);
        int agree = 0;
        const int trials = 1000;
        for (int t = 0; t < trials; ++t) {
            const double snr = 20.0 * static_cast<double>(rng.uniform_index(1 << 20)) / (1 << 20);
            const auto inst = make_instance(d, c4, snr, rng);
            agree += sphere_decode(inst.problem).coords == ml_decode_exhaustive(inst.problem);
        }
        CHECK(agree == trials);
    }

    const auto d16 = integer_design(2, 4);
    const auto c16 = make_qam(4);
    int agree = 0;
    for (int t = 0; t < 100; ++t) {
        const auto inst = make_instance(d16, c16, 20.0 * static_cast<double>(t) / 100.0, rng);
        agree += sphere_decode(inst.problem).coords == ml_decode_exhaustive(inst.problem);
    }
    CHECK(agree == 100);
}

TEST_CASE("ties go to the lexicographically smallest vector")
{
    DetectionProblem p;
    p.effective = RMatrix::Identity(2, 2);
    p.received = RVector::Zero(2);
    p.alphabet = {-1, 1};
    CHECK(ml_decode_exhaustive(p) == std::vector<int>{-1, -1});
    CHECK(sphere_decode(p).coords == std::vector<int>{-1, -1});

    // Two equal columns: (-1, 1) and (1, -1) both leave zero residual.
    p.effective = RMatrix::Ones(2, 2);
    CHECK(ml_decode_exhaustive(p) == std::vector<int>{-1, 1});
    const auto sd = sphere_decode(p);
    CHECK(sd.coords == std::vector<int>{-1, 1});
    CHECK(sd.regularized);

    p.effective = RMatrix::Identity(3, 3);
    p.received = RVector::Zero(3);
    p.alphabet = {-3, -1, 1, 3};
    CHECK(ml_decode_exhaustive(p) == std::vector<int>{-1, -1, -1});
    CHECK(sphere_decode(p).coords == std::vector<int>{-1, -1, -1});
}

TEST_CASE("initial radius does not change the answer")
{
    RngStream rng(4);
    const auto d = integer_design(2, 4);
    const auto c = make_qam(4);
    for (int t = 0; t < 200; ++t) {
        const auto inst = make_instance(d, c, 12.0, rng);
        const auto open = sphere_decode(inst.problem);
        const double best = residual_norm_sq(inst.problem, open.coords);
        const double sent = residual_norm_sq(inst.problem, inst.sent);
        REQUIRE(sphere_decode(inst.problem, std::sqrt(sent) * 1.0001).coords == open.coords);
        REQUIRE(sphere_decode(inst.problem, std::sqrt(best) * 1.5).coords == open.coords);
        // Empty sphere falls back to an open search.
        REQUIRE(sphere_decode(inst.problem, std::sqrt(best) * 0.5).coords == open.coords);
    }
}

TEST_CASE("visited nodes fall as SNR rises")
{
    const auto d = integer_design(2, 4);
    const auto c = make_qam(4);
    double prev = std::numeric_limits<double>::infinity();
    for (double snr : {0.0, 10.0, 20.0, 30.0}) {
        CAPTURE(snr);
        RngStream rng(55);
        double nodes = 0.0;
        for (int t = 0; t < 1000; ++t) {
            nodes += static_cast<double>(sphere_decode(make_instance(d, c, snr, rng).problem).visited_nodes);
        }
        CHECK(nodes / 1000.0 <= prev);
        prev = nodes / 1000.0;
    }
}

TEST_CASE("decoding is unchanged by a global phase of i on H and Y")
{
    RngStream rng(6);
    const auto d = integer_design(2, 2);
    const auto c = make_qam(2);
    const cplx I{0, 1};
    const double scale = normalize(d, c);
    for (int t = 0; t < 300; ++t) {
        const auto inst = make_instance(d, c, 5.0, rng);
        const auto rotated = make_detection_problem(d, c, I * inst.h, I * inst.y, scale);
        REQUIRE(sphere_decode(rotated).coords == sphere_decode(inst.problem).coords);
        REQUIRE(ml_decode_exhaustive(rotated) == ml_decode_exhaustive(inst.problem));
    }
}

TEST_CASE("exhaustive search budget")
{
    DetectionProblem p;
    p.effective = RMatrix::Identity(8, 8);
    p.received = RVector::Zero(8);
    for (int v = -15; v <= 15; v += 2) {
        p.alphabet.push_back(v);
    }
    CHECK_THROWS_AS(ml_decode_exhaustive(p), BudgetExceeded);
    CHECK(sphere_decode(p).coords == std::vector<int>(8, -1));

    DetectionProblem empty;
    CHECK_THROWS_AS(sphere_decode(empty), std::invalid_argument);
}
