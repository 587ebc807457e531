#include "intstbc/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/normal.hpp>

#include "intstbc/channel.hpp"
#include "intstbc/decoder.hpp"
#include "intstbc/design.hpp"
#include "intstbc/errors.hpp"
#include "intstbc/fixedpoint.hpp"
#include "intstbc/metrics.hpp"
#include "intstbc/rng.hpp"

namespace intstbc {

EncoderSpec EncoderSpec::parse(const std::string& text)
{
    if (text == "exact") {
        return exact();
    }
    if (text.rfind("q=", 0) == 0) {
        std::size_t used = 0;
        int q = 0;
        try {
            q = std::stoi(text.substr(2), &used);
        }
        catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != text.size() - 2 || q < 2) {
            throw std::invalid_argument("bad encoder '" + text + "': expected q=<bits>, bits >= 2");
        }
        return bits(q);
    }
    throw std::invalid_argument("bad encoder '" + text + "': expected exact or q=<bits>");
}

std::string EncoderSpec::to_string() const { return quantized ? "q=" + std::to_string(q) : "exact"; }

std::string to_string(Axis axis) { return axis == Axis::snr ? "snr" : "psnr"; }
std::string to_string(DecoderKind decoder) { return decoder == DecoderKind::sphere ? "sphere" : "exhaustive"; }

Axis parse_axis(const std::string& text)
{
    if (text == "snr" || text == "SNR") {
        return Axis::snr;
    }
    if (text == "psnr" || text == "PSNR") {
        return Axis::psnr;
    }
    throw std::invalid_argument("bad axis '" + text + "': expected snr or psnr");
}

DecoderKind parse_decoder(const std::string& text)
{
    if (text == "sphere") {
        return DecoderKind::sphere;
    }
    if (text == "exhaustive") {
        return DecoderKind::exhaustive;
    }
    throw std::invalid_argument("bad decoder '" + text + "': expected sphere or exhaustive");
}

std::vector<double> parse_grid(const std::string& text)
{
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        }
        catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size()) {
            throw std::invalid_argument("bad SNR grid '" + text + "'");
        }
        return v;
    };

    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    const char sep = text.find(':') != std::string::npos ? ':' : ',';
    while (std::getline(ss, item, sep)) {
        parts.push_back(item);
    }

    std::vector<double> grid;
    if (sep == ':') {
        if (parts.size() != 3) {
            throw std::invalid_argument("SNR grid must be start:step:stop, got '" + text + "'");
        }
        const double start = number(parts[0]);
        const double step = number(parts[1]);
        const double stop = number(parts[2]);
        if (!(step > 0.0) || stop < start) {
            throw std::invalid_argument("SNR grid needs step > 0 and stop >= start");
        }
        const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 0.5)) + 1;
        for (std::size_t i = 0; i < count; ++i) {
            grid.push_back(start + static_cast<double>(i) * step);
        }
    }
    else {
        for (const auto& p : parts) {
            grid.push_back(number(p));
        }
    }
    return grid;
}

std::pair<double, double> wilson_interval(std::uint64_t errors, std::uint64_t trials, double confidence)
{
    if (trials == 0) {
        throw std::invalid_argument("Wilson interval of zero trials");
    }
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw std::invalid_argument("confidence level must be in (0, 1)");
    }
    const boost::math::normal standard;
    const double z = boost::math::quantile(standard, 1.0 - (1.0 - confidence) / 2.0);
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    const double lo = errors == 0 ? 0.0 : std::max(0.0, center - half);
    const double hi = errors == trials ? 1.0 : std::min(1.0, center + half);
    return {lo, hi};
}

void validate(const SimConfig& cfg)
{
    if (cfg.snr_grid.empty()) {
        throw std::invalid_argument("SNR grid is empty");
    }
    for (std::size_t i = 1; i < cfg.snr_grid.size(); ++i) {
        if (!(cfg.snr_grid[i] > cfg.snr_grid[i - 1])) {
            throw std::invalid_argument("SNR grid must be strictly increasing");
        }
    }
    if (cfg.max_trials == 0) {
        throw std::invalid_argument("max_trials must be positive");
    }
    if (cfg.target_errors == 0) {
        throw std::invalid_argument("target_errors must be positive");
    }
    if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0)) {
        throw std::invalid_argument("confidence must be in (0, 1)");
    }
    if (cfg.workers < 1) {
        throw std::invalid_argument("workers must be >= 1");
    }
    if (cfg.batch_size == 0) {
        throw std::invalid_argument("batch_size must be positive");
    }

    const LinearDesign design = make_design(cfg.design_id, cfg.n, cfg.m);
    const Constellation constellation = make_qam(cfg.m);
    if (cfg.encoder.quantized) {
        (void)QuantizedEncoder(design, constellation, cfg.encoder.q);
    }
    if (cfg.decoder == DecoderKind::exhaustive) {
        const double log2_space = design.k_real * std::log2(static_cast<double>(constellation.levels()));
        if (log2_space > 24.0) {
            throw BudgetExceeded("exhaustive decoder infeasible: 2^" + std::to_string(static_cast<int>(log2_space)) +
                                 " hypotheses exceed 2^24; use the sphere decoder");
        }
    }
}

namespace {

/// Everything a trial needs that does not change across trials.
struct Link {
    LinearDesign design;
    Constellation constellation;
    std::optional<QuantizedEncoder> quantizer;
    double norm_scale;
    DecoderKind decoder;
};

bool run_trial(const Link& link, std::uint64_t seed, std::uint64_t point, std::uint64_t trial, double sigma2)
{
    RngStream rng = RngStream::derive(seed, point, trial);
    const auto& points = link.constellation.points();
    const int symbols = link.design.symbol_count();

    std::vector<double> coords(static_cast<std::size_t>(2 * symbols));
    std::vector<int> sent(coords.size());
    for (int s = 0; s < symbols; ++s) {
        const IntPoint p = points[rng.uniform_index(points.size())];
        sent[static_cast<std::size_t>(2 * s)] = p.re;
        sent[static_cast<std::size_t>(2 * s + 1)] = p.im;
        coords[static_cast<std::size_t>(2 * s)] = p.re;
        coords[static_cast<std::size_t>(2 * s + 1)] = p.im;
    }

    Codeword x;
    x.entries = link.quantizer ? link.quantizer->encode_coordinates(coords)
                               : encode_coordinates(link.design, coords);
    x.entries *= link.norm_scale;
    x.norm_scale = link.norm_scale;

    const ChannelRealization ch = sample_channel(link.design.n, rng, sigma2);
    const CMatrix y = transmit(x, ch, rng);

    const DetectionProblem problem =
        make_detection_problem(link.design, link.constellation, ch.h, y, link.norm_scale);
    const std::vector<int> decided = link.decoder == DecoderKind::sphere ? sphere_decode(problem).coords
                                                                         : ml_decode_exhaustive(problem);
    return decided != sent;
}

struct BatchCount {
    std::uint64_t trials = 0;
    std::uint64_t errors = 0;
};

SimPoint run_point(const Link& link, const SimConfig& cfg, std::uint64_t point, double snr_db, double sigma2)
{
    const std::uint64_t batch = cfg.batch_size;
    const std::uint64_t n_batches = (cfg.max_trials + batch - 1) / batch;
    const auto workers = static_cast<std::uint64_t>(cfg.workers);

    auto run_batch = [&](std::uint64_t b) {
        BatchCount c;
        const std::uint64_t first = b * batch;
        const std::uint64_t last = std::min(cfg.max_trials, first + batch);
        for (std::uint64_t t = first; t < last; ++t) {
            c.errors += run_trial(link, cfg.master_seed, point, t, sigma2) ? 1 : 0;
            ++c.trials;
        }
        return c;
    };

    SimPoint out;
    out.snr_db = snr_db;
    out.noise_sigma2 = sigma2;
    bool done = false;
    for (std::uint64_t round = 0; round < n_batches && !done; round += workers) {
        const std::uint64_t count = std::min(workers, n_batches - round);
        std::vector<BatchCount> results(count);
        if (count == 1) {
            results[0] = run_batch(round);
        }
        else {
            std::vector<std::thread> threads;
            for (std::uint64_t w = 0; w < count; ++w) {
                threads.emplace_back([&, w] { results[w] = run_batch(round + w); });
            }
            for (auto& t : threads) {
                t.join();
            }
        }
        // Fold in batch order so the stopping point is independent of workers.
        for (const auto& r : results) {
            out.trials += r.trials;
            out.errors += r.errors;
            if (out.errors >= cfg.target_errors) {
                done = true;
                break;
            }
        }
    }

    out.cer = static_cast<double>(out.errors) / static_cast<double>(out.trials);
    std::tie(out.ci_low, out.ci_high) = wilson_interval(out.errors, out.trials, cfg.confidence);
    return out;
}

}  // namespace

SimResult run_cer(const SimConfig& cfg)
{
    validate(cfg);

    Link link{make_design(cfg.design_id, cfg.n, cfg.m), make_qam(cfg.m), std::nullopt, 0.0, cfg.decoder};
    link.norm_scale = normalize(link.design, link.constellation);
    if (cfg.encoder.quantized) {
        link.quantizer.emplace(link.design, link.constellation, cfg.encoder.q);
    }

    SimResult result;
    result.config = cfg;
    result.norm_scale = link.norm_scale;
    result.eta = code_papr(link.design, link.constellation).ratio;

    // Normalized codewords carry P_s = 1/n per entry.
    const double signal_power = 1.0 / static_cast<double>(link.design.n);
    for (std::size_t i = 0; i < cfg.snr_grid.size(); ++i) {
        const double sigma2 = operating_point(signal_power, cfg.snr_grid[i], result.eta, cfg.axis == Axis::psnr);
        result.points.push_back(run_point(link, cfg, i, cfg.snr_grid[i], sigma2));
    }
    return result;
}

std::vector<SimResult> run_quantization_sweep(const SimConfig& base, std::span<const int> q_list)
{
    std::vector<SimResult> out;
    SimConfig cfg = base;
    cfg.encoder = EncoderSpec::exact();
    out.push_back(run_cer(cfg));
    for (int q : q_list) {
        cfg.encoder = EncoderSpec::bits(q);
        out.push_back(run_cer(cfg));
    }
    return out;
}

}  // namespace intstbc
