#include "intstbc/report.hpp"

#include <cstdio>
#include <sstream>

#include "intstbc/fixedpoint.hpp"

namespace intstbc {

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json to_json(const DifferenceSpectrum& s)
{
    return {
        {"distinct_count", s.distinct_count},
        {"zero_det_count", s.zero_det_count},
        {"zero_det_percent", s.zero_det_percent},
        {"min_trace", s.min_trace},
        {"min_det_sq", s.min_det_sq},
        {"norm_scale", s.norm_scale},
        {"exhaustive", s.exhaustive},
    };
}

std::string spectrum_csv_header()
{
    return "code,n,m,distinct_count,zero_det_count,zero_det_percent,min_trace,min_det_sq,norm_scale,exhaustive";
}

std::string spectrum_csv_row(const std::string& code, int n, int m, const DifferenceSpectrum& s)
{
    std::ostringstream os;
    os << code << ',' << n << ',' << m << ',' << s.distinct_count << ',' << s.zero_det_count << ','
       << format_double(s.zero_det_percent) << ',' << format_double(s.min_trace) << ','
       << format_double(s.min_det_sq) << ',' << format_double(s.norm_scale) << ','
       << (s.exhaustive ? "true" : "false");
    return os.str();
}

nlohmann::json to_json(const SimConfig& cfg)
{
    return {
        {"design_id", cfg.design_id},
        {"m", cfg.m},
        {"n", cfg.n},
        {"snr_grid", cfg.snr_grid},
        {"axis", to_string(cfg.axis)},
        {"decoder", to_string(cfg.decoder)},
        {"encoder", cfg.encoder.to_string()},
        {"master_seed", cfg.master_seed},
        {"max_trials", cfg.max_trials},
        {"target_errors", cfg.target_errors},
        {"confidence", cfg.confidence},
        {"workers", cfg.workers},
        {"batch_size", cfg.batch_size},
    };
}

nlohmann::json to_json(const SimResult& r)
{
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : r.points) {
        points.push_back({
            {"snr_db", p.snr_db},
            {"axis", to_string(r.config.axis)},
            {"trials", p.trials},
            {"errors", p.errors},
            {"cer", p.cer},
            {"ci_low", p.ci_low},
            {"ci_high", p.ci_high},
            {"noise_sigma2", p.noise_sigma2},
        });
    }
    nlohmann::json config = to_json(r.config);
    // workers never changes the numbers, so it stays out of the data file.
    config.erase("workers");
    return {{"config", config}, {"eta", r.eta}, {"norm_scale", r.norm_scale}, {"points", points}};
}

std::string to_csv(const SimResult& r)
{
    std::ostringstream os;
    os << "snr_db,axis,trials,errors,cer,ci_low,ci_high\n";
    for (const auto& p : r.points) {
        os << format_double(p.snr_db) << ',' << to_string(r.config.axis) << ',' << p.trials << ',' << p.errors
           << ',' << format_double(p.cer) << ',' << format_double(p.ci_low) << ',' << format_double(p.ci_high)
           << '\n';
    }
    return os.str();
}

nlohmann::json design_report(const LinearDesign& design, const Constellation& constellation)
{
    nlohmann::json basis = nlohmann::json::array();
    for (const auto& b : design.basis) {
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index r = 0; r < b.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index c = 0; c < b.cols(); ++c) {
                row.push_back({b(r, c).real(), b(r, c).imag()});
            }
            rows.push_back(row);
        }
        basis.push_back(rows);
    }

    nlohmann::json out = {
        {"code", design.name},
        {"n", design.n},
        {"m", constellation.bits_per_symbol()},
        {"k_real", design.k_real},
        {"exact_integer", design.exact_integer},
        {"norm_scale", normalize(design, constellation)},
        {"basis", basis},
    };
    if (design.family == DesignFamily::integer) {
        const int exponent = constellation.bits_per_symbol() * design.n / 2;
        out["alpha"] = design.alpha;
        out["d"] = (std::int64_t{1} << exponent) - 1;
        out["bits"] = min_bits_integer_code(design.n, constellation.bits_per_symbol());
    }
    else {
        out["alpha"] = nullptr;
        out["d"] = nullptr;
        out["bits"] = nullptr;
    }
    return out;
}

nlohmann::json to_json(const RunManifest& m)
{
    return {
        {"subcommand", m.subcommand},
        {"parameters", m.parameters},
        {"master_seed", m.master_seed},
        {"tool_version", m.tool_version},
        {"outputs", m.outputs},
        {"timestamp", m.timestamp},
    };
}

}  // namespace intstbc
