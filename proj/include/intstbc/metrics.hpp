#pragma once

#include <cstdint>
#include <optional>

#include "intstbc/constellation.hpp"
#include "intstbc/design.hpp"

namespace intstbc {

/// 3(sqrt K - 1)/(sqrt K + 1): PAPR of square K-QAM with odd coordinates.
/// K must be a power of four, at least 4.
double papr_qam_closed_form(std::uint64_t k);

struct PaprOptions {
    /// Per-position alphabets above this size need allow_sampling.
    std::uint64_t max_alphabet = std::uint64_t{1} << 24;
    bool allow_sampling = false;
    std::uint64_t sample_budget = 1'000'000;
    std::uint64_t seed = 1;
};

/// Code PAPR over all positions and codewords.
///
/// Integer designs whose alpha matches the constellation use the M^n-QAM
/// identity. Everything else goes through entry_alphabet_papr().
Papr code_papr(const LinearDesign& design, const Constellation& constellation,
               const PaprOptions& options = {});

/// Enumerates the entry alphabet of every matrix position (or samples whole
/// codewords when allowed and an alphabet is too large).
/// Throws BudgetExceeded when enumeration is too large and sampling is off.
Papr entry_alphabet_papr(const LinearDesign& design, const Constellation& constellation,
                         const PaprOptions& options = {});

/// Published PAPR values (dB) for the integer and Golden codes, used only to
/// annotate reports. n in {2, 3, 4} and m in {2, 4, 6}.
std::optional<double> published_papr_db(DesignFamily family, int n, int m);

/// Codeword difference statistics under the unit-power normalization.
///
/// zero_det_count counts nonzero difference matrices with zero determinant;
/// zero_det_percent divides it by distinct_count, which includes the zero
/// matrix. In sampled mode distinct_count is the number of sampled
/// differences instead.
struct DifferenceSpectrum {
    std::uint64_t distinct_count = 0;
    std::uint64_t zero_det_count = 0;
    double zero_det_percent = 0.0;
    /// min c^2 trace(dX^H dX) over nonzero differences.
    double min_trace = 0.0;
    /// min c^{2n} |det dX|^2 over differences with nonzero determinant.
    double min_det_sq = 0.0;
    double norm_scale = 0.0;
    bool exhaustive = true;
};

enum class SpectrumMode { exhaustive, sampled };

/// Default and long-run caps on the number of difference vectors enumerated.
inline constexpr std::uint64_t kExhaustiveCap = std::uint64_t{1} << 27;
inline constexpr std::uint64_t kExhaustiveLongCap = std::uint64_t{1} << 32;

struct SpectrumOptions {
    SpectrumMode mode = SpectrumMode::exhaustive;
    /// Raises the exhaustive cap from kExhaustiveCap to kExhaustiveLongCap.
    bool allow_long = false;
    /// Number of random codeword pairs in sampled mode.
    std::uint64_t sample_budget = 0;
    std::uint64_t seed = 1;
    int workers = 1;
};

/// Exhaustive mode is n = 2 only. Exact-integer designs use Gaussian-integer
/// determinants; others use floating point with a relative zero threshold.
DifferenceSpectrum difference_spectrum(const LinearDesign& design,
                                       const Constellation& constellation,
                                       const SpectrumOptions& options = {});

/// Number of difference vectors an exhaustive run would visit:
/// (2^{m/2+1} - 1)^{k_real}, saturating at UINT64_MAX.
std::uint64_t difference_vector_count(const LinearDesign& design, const Constellation& constellation);

/// Normalized minimum trace of an integer design via a pruned depth-first
/// search over one layer's 2n real difference coordinates. Trace splits over
/// layers and |gamma| = 1, so this equals the minimum over all differences.
double normalized_min_trace(const LinearDesign& design, const Constellation& constellation,
                            std::uint64_t node_budget = 2'000'000'000);

/// Same search, unnormalized: min over nonzero layer differences of ||Phi dx||^2.
std::int64_t min_layer_trace(const LinearDesign& design, const Constellation& constellation,
                             std::uint64_t node_budget = 2'000'000'000);

}  // namespace intstbc
