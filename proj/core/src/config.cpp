#include "ginspectra/config.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ginspectra {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw ValidationError(what); }

std::int64_t require_int(const json& v, const std::string& key,
                         std::int64_t lo, std::int64_t hi) {
    if (!v.is_number_integer())
        bad("config key '" + key + "' must be an integer");
    const std::int64_t x = v.get<std::int64_t>();
    if (x < lo || x > hi)
        bad("config key '" + key + "' = " + std::to_string(x) +
            " outside [" + std::to_string(lo) + ", " + std::to_string(hi) +
            "]");
    return x;
}

double require_number(const json& v, const std::string& key) {
    if (!v.is_number()) bad("config key '" + key + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) bad("config key '" + key + "' must be finite");
    return x;
}

std::string require_string(const json& v, const std::string& key) {
    if (!v.is_string()) bad("config key '" + key + "' must be a string");
    return v.get<std::string>();
}

ParamSource parse_param_source(const json& v, const std::string& key) {
    if (v.is_number()) {
        const double x = v.get<double>();
        if (!std::isfinite(x)) bad("parameter '" + key + "' must be finite");
        return ParamSource::fixed(x);
    }
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "gaussian") return ParamSource::gaussian();
        bad("parameter '" + key + "' must be a number or \"gaussian\", got \"" +
            s + "\"");
    }
    bad("parameter '" + key + "' must be a number or \"gaussian\"");
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key))
            bad("unknown " + where + " key '" + key + "'");
    }
}

}  // namespace

std::string ExperimentConfig::model_name() const {
    return is_spin() ? to_string(spin().model) : to_string(crossover().model);
}

int ExperimentConfig::matrix_dim() const {
    return is_spin() ? (1 << spin().length) : crossover().n;
}

ExperimentConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        bad(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) bad("config must be a JSON object");
    if (!root.contains("model")) bad("config key 'model' is required");

    const std::string model = require_string(root.at("model"), "model");
    const bool is_spin =
        model == "H0" || model == "H1" || model == "H2" || model == "H3" ||
        model == "Him";
    const bool is_mm = model == "MM1" || model == "MM2";
    if (!is_spin && !is_mm)
        bad("unknown model '" + model +
            "' (expected H0|H1|H2|H3|Him|MM1|MM2)");

    std::set<std::string> allowed = {"model",       "ensemble_size",
                                     "master_seed", "bins",
                                     "outputs",     "reference",
                                     "workers"};
    if (is_spin) {
        allowed.insert("L");
        allowed.insert("params");
    } else {
        allowed.insert("N");
        allowed.insert("alpha");
    }
    // Reject wrong-family keys with a pointed message before the generic
    // unknown-key error.
    if (is_spin && root.contains("N"))
        bad("config key 'N' does not apply to spin model " + model +
            " (use 'L')");
    if (is_spin && root.contains("alpha"))
        bad("config key 'alpha' does not apply to spin model " + model);
    if (is_mm && root.contains("L"))
        bad("config key 'L' does not apply to matrix model " + model +
            " (use 'N')");
    if (is_mm && root.contains("params"))
        bad("config key 'params' does not apply to matrix model " + model +
            " (use 'alpha')");
    check_keys(root, allowed, "config");

    ExperimentConfig cfg;
    if (is_spin) {
        SpinChainSpec spec;
        spec.model = spin_model_from_string(model);
        if (!root.contains("L")) bad("config key 'L' is required for " + model);
        spec.length = static_cast<int>(require_int(root.at("L"), "L", 2, 12));
        if (root.contains("params")) {
            const json& params = root.at("params");
            if (!params.is_object()) bad("config key 'params' must be an object");
            check_keys(params, {"gamma", "lambda", "lambda1"}, "params");
            for (const auto& [key, value] : params.items()) {
                if (!model_uses_param(spec.model, key))
                    bad("model " + model + " does not use parameter " + key);
                const ParamSource src = parse_param_source(value, key);
                if (key == "gamma") spec.gamma = src;
                else if (key == "lambda") spec.lambda = src;
                else spec.lambda1 = src;
            }
        }
        validate(spec);
        cfg.target = spec;
    } else {
        CrossoverSpec spec;
        spec.model = model == "MM1" ? MatrixModel::MM1 : MatrixModel::MM2;
        if (!root.contains("N")) bad("config key 'N' is required for " + model);
        spec.n = static_cast<int>(require_int(root.at("N"), "N", 2, 8192));
        if (!root.contains("alpha"))
            bad("config key 'alpha' is required for " + model);
        spec.alpha = require_number(root.at("alpha"), "alpha");
        validate(spec);
        cfg.target = spec;
    }

    if (!root.contains("ensemble_size"))
        bad("config key 'ensemble_size' is required");
    cfg.ensemble_size = require_int(root.at("ensemble_size"), "ensemble_size",
                                    1, 10'000'000);

    if (!root.contains("master_seed"))
        bad("config key 'master_seed' is required");
    {
        const json& seed = root.at("master_seed");
        if (seed.is_number_unsigned())
            cfg.master_seed = seed.get<std::uint64_t>();
        else if (seed.is_number_integer() && seed.get<std::int64_t>() >= 0)
            cfg.master_seed =
                static_cast<std::uint64_t>(seed.get<std::int64_t>());
        else
            bad("config key 'master_seed' must be a non-negative integer");
    }

    if (root.contains("bins")) {
        const json& bins = root.at("bins");
        if (!bins.is_object()) bad("config key 'bins' must be an object");
        check_keys(bins, {"r", "theta", "grid"}, "bins");
        if (bins.contains("r"))
            cfg.bins.r =
                static_cast<int>(require_int(bins.at("r"), "bins.r", 1, 100000));
        if (bins.contains("theta"))
            cfg.bins.theta = static_cast<int>(
                require_int(bins.at("theta"), "bins.theta", 1, 100000));
        if (bins.contains("grid"))
            cfg.bins.grid = static_cast<int>(
                require_int(bins.at("grid"), "bins.grid", 1, 4096));
    }

    if (!root.contains("outputs")) bad("config key 'outputs' is required");
    const std::string outputs = require_string(root.at("outputs"), "outputs");
    if (outputs.empty()) bad("config key 'outputs' must be a nonempty path");
    cfg.outputs = outputs;

    if (root.contains("reference"))
        cfg.reference =
            reference_from_string(require_string(root.at("reference"),
                                                 "reference"));

    if (root.contains("workers")) {
        const json& workers = root.at("workers");
        if (workers.is_string()) {
            if (workers.get<std::string>() != "auto")
                bad("config key 'workers' must be a positive integer or "
                    "\"auto\"");
            cfg.workers = 0;
        } else {
            cfg.workers =
                static_cast<int>(require_int(workers, "workers", 1, 512));
        }
    }

    return cfg;
}

ExperimentConfig load_config_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in)
        throw ValidationError("cannot open config file '" + file.string() +
                              "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

namespace {

std::string describe_source(const ParamSource& s) {
    return s.kind == ParamSource::Kind::Fixed ? "F:" + format_g17(s.value)
                                              : "G";
}

}  // namespace

std::string config_hash(const ExperimentConfig& cfg) {
    // Canonical description of everything that influences the statistics.
    // 'outputs' and 'workers' are deliberately absent.
    std::string desc = "model=" + cfg.model_name();
    if (cfg.is_spin()) {
        const SpinChainSpec& s = cfg.spin();
        desc += ";L=" + std::to_string(s.length);
        desc += ";gamma=" + describe_source(s.gamma);
        desc += ";lambda=" + describe_source(s.lambda);
        desc += ";lambda1=" + describe_source(s.lambda1);
    } else {
        const CrossoverSpec& s = cfg.crossover();
        desc += ";N=" + std::to_string(s.n);
        desc += ";alpha=" + format_g17(s.alpha);
    }
    desc += ";ensemble=" + std::to_string(cfg.ensemble_size);
    desc += ";seed=" + std::to_string(cfg.master_seed);
    desc += ";bins=" + std::to_string(cfg.bins.r) + "," +
            std::to_string(cfg.bins.theta) + "," +
            std::to_string(cfg.bins.grid);
    desc += ";reference=" + to_string(cfg.reference);

    std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a 64
    for (const unsigned char c : desc) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

std::filesystem::path default_cache_dir() {
    if (const char* env = std::getenv("GINSPECTRA_CACHE_DIR"); env && *env)
        return env;
    if (const char* home = std::getenv("HOME"); home && *home)
        return std::filesystem::path(home) / ".cache" / "ginspectra";
    return "ginspectra_cache";
}

}  // namespace ginspectra
