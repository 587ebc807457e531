#include "intstbc/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "intstbc/errors.hpp"
#include "intstbc/fixedpoint.hpp"
#include "intstbc/metrics.hpp"
#include "intstbc/report.hpp"

namespace intstbc {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text)
{
    std::istringstream is(text);
    T v{};
    is >> v;
    if (is.fail() || !is.eof()) {
        throw std::invalid_argument("bad value for " + key + ": '" + text + "'");
    }
    return v;
}

std::uint64_t parse_count(const std::string& key, const std::string& text)
{
    if (!text.empty() && text.front() == '-') {
        throw std::invalid_argument("bad value for " + key + ": '" + text + "'");
    }
    // Allow 1e6 style counts.
    const double v = parse_number<double>(key, text);
    if (v < 0 || v != std::floor(v) || v > 1.8e19) {
        throw std::invalid_argument("bad value for " + key + ": '" + text + "'");
    }
    return static_cast<std::uint64_t>(v);
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw std::runtime_error("cannot write " + path);
    }
    f << content;
}

/// Writes each data file plus a <file>.manifest.json next to it.
void write_outputs(RunManifest manifest, const std::vector<std::pair<std::string, std::string>>& files)
{
    if (files.empty()) {
        return;
    }
    manifest.timestamp = utc_timestamp();
    for (const auto& f : files) {
        manifest.outputs.push_back(f.first);
    }
    const std::string text = to_json(manifest).dump(2) + "\n";
    for (const auto& f : files) {
        write_file(f.first, f.second);
        write_file(f.first + ".manifest.json", text);
    }
}

std::map<std::string, std::string> flatten(const nlohmann::json& j)
{
    std::map<std::string, std::string> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        out[it.key()] = it->is_string() ? it->get<std::string>() : it->dump();
    }
    return out;
}

struct CodeArgs {
    std::string code = "ic";
    int n = 2;
    int m = 2;
};

void add_code_options(CLI::App* app, CodeArgs& args)
{
    app->add_option("--code", args.code, "ic | golden | alamouti")->capture_default_str();
    app->add_option("-n", args.n, "transmit antennas (integer code)")->capture_default_str();
    app->add_option("-m", args.m, "bits per QAM symbol")->capture_default_str();
}

}  // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text)
{
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    int number = 0;
    while (std::getline(is, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(number) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw std::invalid_argument("config line " + std::to_string(number) + ": empty key");
        }
        kv[key] = value;
    }
    return kv;
}

void apply_config(SimConfig& cfg, const std::map<std::string, std::string>& kv)
{
    for (const auto& [key, value] : kv) {
        if (key == "design_id" || key == "code") {
            cfg.design_id = value;
        }
        else if (key == "m") {
            cfg.m = parse_number<int>(key, value);
        }
        else if (key == "n") {
            cfg.n = parse_number<int>(key, value);
        }
        else if (key == "snr_grid" || key == "snr") {
            cfg.snr_grid = parse_grid(value);
        }
        else if (key == "axis") {
            cfg.axis = parse_axis(value);
        }
        else if (key == "decoder") {
            cfg.decoder = parse_decoder(value);
        }
        else if (key == "encoder") {
            cfg.encoder = EncoderSpec::parse(value);
        }
        else if (key == "master_seed" || key == "seed") {
            cfg.master_seed = parse_count(key, value);
        }
        else if (key == "max_trials") {
            cfg.max_trials = parse_count(key, value);
        }
        else if (key == "target_errors") {
            cfg.target_errors = parse_count(key, value);
        }
        else if (key == "confidence") {
            cfg.confidence = parse_number<double>(key, value);
        }
        else if (key == "workers") {
            cfg.workers = parse_number<int>(key, value);
        }
        else if (key == "batch_size") {
            cfg.batch_size = parse_count(key, value);
        }
        else {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }
}

namespace {

int cmd_design(const CodeArgs& args, const std::string& format, const std::string& json_path, std::ostream& out)
{
    const LinearDesign design = make_design(args.code, args.n, args.m);
    const Constellation constellation = make_qam(args.m);
    const nlohmann::json report = design_report(design, constellation);

    if (format == "json") {
        out << report.dump(2) << '\n';
    }
    else {
        out << "code=" << design.name << " n=" << design.n << " m=" << args.m << " k_real=" << design.k_real
            << " exact_integer=" << (design.exact_integer ? "true" : "false");
        if (design.family == DesignFamily::integer) {
            out << " alpha=" << report["alpha"] << " d=" << report["d"] << " bits=" << report["bits"];
        }
        out << '\n';
    }

    RunManifest manifest;
    manifest.subcommand = "design";
    manifest.parameters = {{"code", args.code}, {"n", std::to_string(design.n)}, {"m", std::to_string(args.m)}};
    if (!json_path.empty()) {
        write_outputs(manifest, {{json_path, report.dump(2) + "\n"}});
    }
    return exit_ok;
}

struct AnalyzeArgs {
    std::string which;
    std::string mode = "auto";
    bool allow_long = false;
    std::string budget = "1e6";
    std::string node_budget = "2e9";
    int workers = 1;
    std::uint64_t seed = 1;
    std::string json_path;
    std::string csv_path;
};

int cmd_analyze(const CodeArgs& args, const AnalyzeArgs& a, std::ostream& out)
{
    const LinearDesign design = make_design(args.code, args.n, args.m);
    const Constellation constellation = make_qam(args.m);

    RunManifest manifest;
    manifest.subcommand = "analyze " + a.which;
    manifest.master_seed = a.seed;
    manifest.parameters = {{"code", args.code}, {"n", std::to_string(design.n)}, {"m", std::to_string(args.m)}};

    nlohmann::json report = {{"code", design.name}, {"n", design.n}, {"m", args.m}};
    std::string csv;

    if (a.which == "papr") {
        const bool closed = design.family == DesignFamily::integer && design.alpha == constellation.levels();
        const Papr p = code_papr(design, constellation);
        report["papr_ratio"] = p.ratio;
        report["papr_db"] = p.db;
        report["method"] = closed ? "closed_form" : "entry_enumeration";
        const auto published = published_papr_db(design.family, design.n, args.m);
        report["published_db"] = published ? nlohmann::json(*published) : nlohmann::json(nullptr);
        if (published) {
            const double rounded = std::round(p.db * 100.0) / 100.0;
            if (std::abs(rounded - *published) > 1e-9) {
                std::ostringstream note;
                note.precision(2);
                note << std::fixed << "computed " << rounded << " dB differs from published " << *published
                     << " dB";
                if (std::abs(p.db - *published) > 0.05) {
                    note << " beyond rounding";
                }
                report["note"] = note.str();
            }
        }
        csv = "code,n,m,papr_ratio,papr_db\n" + design.name + ',' + std::to_string(design.n) + ',' +
              std::to_string(args.m) + ',' + format_double(p.ratio) + ',' + format_double(p.db) + '\n';
    }
    else if (a.which == "spectrum") {
        SpectrumOptions opt;
        std::string mode = a.mode;
        if (mode == "auto") {
            mode = design.n == 2 ? "exhaustive" : "sampled";
        }
        if (mode == "exhaustive") {
            opt.mode = SpectrumMode::exhaustive;
        }
        else if (mode == "sampled") {
            opt.mode = SpectrumMode::sampled;
        }
        else {
            throw std::invalid_argument("--mode must be auto, exhaustive or sampled");
        }
        opt.allow_long = a.allow_long;
        opt.sample_budget = parse_count("--budget", a.budget);
        opt.seed = a.seed;
        opt.workers = a.workers;
        manifest.parameters["mode"] = mode;
        manifest.parameters["allow_long"] = a.allow_long ? "true" : "false";
        if (opt.mode == SpectrumMode::sampled) {
            manifest.parameters["budget"] = std::to_string(opt.sample_budget);
        }
        const DifferenceSpectrum s = difference_spectrum(design, constellation, opt);
        report.update(to_json(s));
        csv = spectrum_csv_header() + "\n" + spectrum_csv_row(design.name, design.n, args.m, s) + "\n";
    }
    else if (a.which == "trace") {
        if (design.family != DesignFamily::integer) {
            throw std::invalid_argument("trace search needs an integer design");
        }
        const std::uint64_t nodes = parse_count("--nodes", a.node_budget);
        manifest.parameters["nodes"] = std::to_string(nodes);
        const std::int64_t raw = min_layer_trace(design, constellation, nodes);
        const double c = normalize(design, constellation);
        report["raw_min_trace"] = raw;
        report["norm_scale"] = c;
        report["min_trace"] = static_cast<double>(raw) * c * c;
        csv = "code,n,m,raw_min_trace,min_trace\n" + design.name + ',' + std::to_string(design.n) + ',' +
              std::to_string(args.m) + ',' + std::to_string(raw) + ',' +
              format_double(static_cast<double>(raw) * c * c) + '\n';
    }
    else {
        throw std::invalid_argument("analyze needs one of papr, spectrum, trace");
    }

    out << report.dump(2) << '\n';
    std::vector<std::pair<std::string, std::string>> files;
    if (!a.json_path.empty()) {
        files.emplace_back(a.json_path, report.dump(2) + "\n");
    }
    if (!a.csv_path.empty()) {
        files.emplace_back(a.csv_path, csv);
    }
    write_outputs(manifest, files);
    return exit_ok;
}

int cmd_simulate(const SimConfig& cfg, const std::string& json_path, const std::string& csv_path, std::ostream& out)
{
    const SimResult r = run_cer(cfg);
    const std::string csv = to_csv(r);
    out << csv;

    RunManifest manifest;
    manifest.subcommand = "simulate";
    manifest.master_seed = cfg.master_seed;
    manifest.parameters = flatten(to_json(cfg));
    std::vector<std::pair<std::string, std::string>> files;
    if (!csv_path.empty()) {
        files.emplace_back(csv_path, csv);
    }
    if (!json_path.empty()) {
        files.emplace_back(json_path, to_json(r).dump(2) + "\n");
    }
    write_outputs(manifest, files);
    return exit_ok;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Integer space-time block codes: design, analysis and simulation"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    CodeArgs design_args;
    std::string design_format = "text";
    std::string design_json;
    auto* design = app.add_subcommand("design", "show a design's basis and entry range");
    add_code_options(design, design_args);
    design->add_option("--format", design_format, "stdout format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    design->add_option("--json", design_json, "write the JSON report here");

    CodeArgs analyze_code;
    AnalyzeArgs analyze_args;
    auto* analyze = app.add_subcommand("analyze", "PAPR, difference spectrum or minimum trace");
    analyze->add_option("which", analyze_args.which, "papr | spectrum | trace")
        ->required()
        ->check(CLI::IsMember({"papr", "spectrum", "trace"}));
    add_code_options(analyze, analyze_code);
    analyze->add_option("--mode", analyze_args.mode, "spectrum: auto | exhaustive | sampled")
        ->capture_default_str();
    analyze->add_flag("--allow-long", analyze_args.allow_long, "allow enumerations past 2^27 differences");
    analyze->add_option("--budget", analyze_args.budget, "spectrum: sampled codeword pairs")->capture_default_str();
    analyze->add_option("--nodes", analyze_args.node_budget, "trace: search node budget")->capture_default_str();
    auto* analyze_workers = analyze->add_option("--workers", analyze_args.workers, "enumeration threads");
    analyze->add_option("--seed", analyze_args.seed, "sampling seed")->capture_default_str();
    analyze->add_option("--json", analyze_args.json_path, "write JSON here");
    analyze->add_option("--csv", analyze_args.csv_path, "write CSV here");

    CodeArgs sim_code;
    std::string config_path, snr, axis, decoder, encoder, sim_json, sim_csv;
    std::string seed, max_trials, target_errors, batch_size;
    double confidence = 0.95;
    int sim_workers = 1;
    auto* simulate = app.add_subcommand("simulate", "codeword error rate over Rayleigh fading");
    simulate->add_option("--config", config_path, "key = value file; flags override it");
    auto* o_code = simulate->add_option("--code", sim_code.code, "ic | golden | alamouti");
    auto* o_n = simulate->add_option("-n", sim_code.n, "transmit antennas (integer code)");
    auto* o_m = simulate->add_option("-m", sim_code.m, "bits per QAM symbol");
    auto* o_snr = simulate->add_option("--snr", snr, "start:step:stop in dB");
    auto* o_axis = simulate->add_option("--axis", axis, "snr | psnr");
    auto* o_decoder = simulate->add_option("--decoder", decoder, "sphere | exhaustive");
    auto* o_encoder = simulate->add_option("--encoder", encoder, "exact | q=<bits>");
    auto* o_seed = simulate->add_option("--seed", seed, "master seed");
    auto* o_trials = simulate->add_option("--max-trials", max_trials, "trial cap per point");
    auto* o_target = simulate->add_option("--target-errors", target_errors, "stop a point after this many errors");
    auto* o_conf = simulate->add_option("--confidence", confidence, "Wilson interval level");
    auto* o_batch = simulate->add_option("--batch-size", batch_size, "trials per scheduling batch");
    auto* o_workers = simulate->add_option("--workers", sim_workers, "threads; results do not depend on it");
    simulate->add_option("--json", sim_json, "write JSON here");
    simulate->add_option("--csv", sim_csv, "write CSV here");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_invalid;
    }

    try {
        int env_workers = 1;
        if (const char* env = std::getenv("INTSTBC_WORKERS")) {
            env_workers = parse_number<int>("INTSTBC_WORKERS", env);
        }

        if (*design) {
            return cmd_design(design_args, design_format, design_json, out);
        }
        if (*analyze) {
            if (analyze_workers->count() == 0) {
                analyze_args.workers = env_workers;
            }
            return cmd_analyze(analyze_code, analyze_args, out);
        }

        SimConfig cfg;
        cfg.workers = env_workers;
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) {
                throw std::invalid_argument("cannot read config " + config_path);
            }
            std::ostringstream text;
            text << f.rdbuf();
            apply_config(cfg, parse_config_text(text.str()));
        }
        std::map<std::string, std::string> flags;
        auto take = [&](CLI::Option* o, const char* key, const std::string& v) {
            if (o->count() > 0) {
                flags[key] = v;
            }
        };
        take(o_code, "design_id", sim_code.code);
        take(o_n, "n", std::to_string(sim_code.n));
        take(o_m, "m", std::to_string(sim_code.m));
        take(o_snr, "snr_grid", snr);
        take(o_axis, "axis", axis);
        take(o_decoder, "decoder", decoder);
        take(o_encoder, "encoder", encoder);
        take(o_seed, "master_seed", seed);
        take(o_trials, "max_trials", max_trials);
        take(o_target, "target_errors", target_errors);
        take(o_batch, "batch_size", batch_size);
        apply_config(cfg, flags);
        if (o_conf->count() > 0) {
            cfg.confidence = confidence;
        }
        if (o_workers->count() > 0) {
            cfg.workers = sim_workers;
        }
        if (cfg.snr_grid.empty()) {
            throw std::invalid_argument("simulate needs --snr or snr_grid in the config");
        }
        return cmd_simulate(cfg, sim_json, sim_csv, out);
    }
    catch (const BudgetExceeded& e) {
        err << "refused: " << e.what() << '\n';
        return exit_budget;
    }
    catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_invalid;
    }
    catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_invalid;
    }
    catch (const std::exception& e) {
        err << "failed: " << e.what() << '\n';
        return exit_failure;
    }
}

}  // namespace intstbc
