#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace intstbc {

enum class Axis { snr, psnr };
enum class DecoderKind { exhaustive, sphere };

/// "exact" or "q=<bits>".
struct EncoderSpec {
    bool quantized = false;
    int q = 0;

    static EncoderSpec exact() { return {}; }
    static EncoderSpec bits(int q) { return {true, q}; }
    static EncoderSpec parse(const std::string& text);
    std::string to_string() const;

    friend bool operator==(const EncoderSpec&, const EncoderSpec&) = default;
};

struct SimConfig {
    std::string design_id = "ic";
    int m = 2;
    int n = 2;
    std::vector<double> snr_grid;
    Axis axis = Axis::snr;
    DecoderKind decoder = DecoderKind::sphere;
    EncoderSpec encoder;
    std::uint64_t master_seed = 1;
    std::uint64_t max_trials = 1'000'000;
    std::uint64_t target_errors = 100;
    double confidence = 0.95;
    /// Parallelism only; results do not depend on it.
    int workers = 1;
    /// Trials per scheduling unit. Early stopping is checked at batch
    /// boundaries, in batch order.
    std::uint64_t batch_size = 1024;
};

struct SimPoint {
    double snr_db = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t errors = 0;
    double cer = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double noise_sigma2 = 0.0;
};

struct SimResult {
    SimConfig config;
    /// Code PAPR (linear) used for the PSNR axis.
    double eta = 1.0;
    double norm_scale = 1.0;
    std::vector<SimPoint> points;
};

/// Wilson score interval for errors/trials at the given two-sided level.
std::pair<double, double> wilson_interval(std::uint64_t errors, std::uint64_t trials, double confidence);

/// Throws std::invalid_argument for malformed configs and BudgetExceeded for
/// an infeasible decoder choice.
void validate(const SimConfig& cfg);

/// Codeword error rate per grid point. Trial t at grid index i draws
/// everything from RngStream::derive(master_seed, i, t).
SimResult run_cer(const SimConfig& cfg);

/// Exact-encoder curve first, then one quantized curve per q.
std::vector<SimResult> run_quantization_sweep(const SimConfig& base, std::span<const int> q_list);

std::string to_string(Axis axis);
std::string to_string(DecoderKind decoder);
Axis parse_axis(const std::string& text);
DecoderKind parse_decoder(const std::string& text);

/// "start:step:stop" in dB, inclusive of stop within half a step.
std::vector<double> parse_grid(const std::string& text);

}  // namespace intstbc
