#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "intstbc/constellation.hpp"
#include "intstbc/design.hpp"
#include "intstbc/metrics.hpp"
#include "intstbc/montecarlo.hpp"

namespace intstbc {

inline constexpr const char* kToolVersion = "0.1.0";

nlohmann::json to_json(const DifferenceSpectrum& s);
std::string spectrum_csv_header();
/// code, n, m, then the DifferenceSpectrum fields in declaration order.
std::string spectrum_csv_row(const std::string& code, int n, int m, const DifferenceSpectrum& s);

nlohmann::json to_json(const SimConfig& cfg);
nlohmann::json to_json(const SimResult& r);
/// snr_db, axis, trials, errors, cer, ci_low, ci_high.
std::string to_csv(const SimResult& r);

/// Basis matrices, normalization and entry range of a design.
nlohmann::json design_report(const LinearDesign& design, const Constellation& constellation);

struct RunManifest {
    std::string subcommand;
    std::map<std::string, std::string> parameters;
    std::uint64_t master_seed = 0;
    std::string tool_version = kToolVersion;
    std::vector<std::string> outputs;
    /// UTC, ISO 8601. The only non-reproducible field.
    std::string timestamp;
};

nlohmann::json to_json(const RunManifest& m);

/// %.17g, so doubles round-trip.
std::string format_double(double v);

}  // namespace intstbc
