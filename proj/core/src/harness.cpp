#include "ginspectra/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace ginspectra {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

struct RealizationOutcome {
    CsrSet csr;
    RealizationDiagnostics diag;
};

struct WorkerFailure {
    std::int64_t index = 0;
    std::uint64_t seed = 0;
    std::string what;
};

int effective_workers(const ExperimentConfig& cfg) {
    int w = cfg.workers;
    if (w <= 0) {
        const unsigned hc = std::thread::hardware_concurrency();
        w = hc == 0 ? 1 : static_cast<int>(hc);
    }
    return static_cast<int>(
        std::min<std::int64_t>(w, std::max<std::int64_t>(cfg.ensemble_size, 1)));
}

void validate_target(const ExperimentConfig& cfg) {
    if (cfg.ensemble_size < 1)
        throw ValidationError("ensemble size must be at least 1");
    if (cfg.is_spin())
        validate(cfg.spin());
    else
        validate(cfg.crossover());
}

std::string spectrum_file_name(std::int64_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "spectrum_%06lld.csv",
                  static_cast<long long>(index));
    return buf;
}

}  // namespace

EnsembleSummary compute_ensemble(const ExperimentConfig& cfg) {
    return compute_ensemble(cfg, SpectrumSink{});
}

EnsembleSummary compute_ensemble(const ExperimentConfig& cfg,
                                 const SpectrumSink& sink) {
    validate_target(cfg);
    const std::string model = cfg.model_name();
    const std::int64_t ensemble = cfg.ensemble_size;

    std::vector<RealizationOutcome> slots(static_cast<std::size_t>(ensemble));
    std::atomic<std::int64_t> next{0};
    std::atomic<bool> abort{false};
    std::mutex failure_mutex;
    std::vector<WorkerFailure> failures;

    auto work = [&] {
        while (!abort.load(std::memory_order_relaxed)) {
            const std::int64_t slot = next.fetch_add(1);
            if (slot >= ensemble) break;
            const std::int64_t index = slot + 1;  // 1-based = stream index
            const std::uint64_t derived =
                derive_stream_seed(cfg.master_seed, index);
            try {
                RngStream rng(cfg.master_seed, index);
                ComplexMatrix m;
                std::vector<std::pair<std::string, std::vector<double>>>
                    plist;
                if (cfg.is_spin()) {
                    const SpinChainSpec& spec = cfg.spin();
                    const RealizedParams p = realize_params(spec, rng);
                    m = build_hamiltonian(spec, p);
                    if (model_uses_param(spec.model, "gamma"))
                        plist.emplace_back("gamma", p.gamma);
                    if (model_uses_param(spec.model, "lambda"))
                        plist.emplace_back("lambda", p.lambda);
                    if (model_uses_param(spec.model, "lambda1"))
                        plist.emplace_back("lambda1", p.lambda1);
                } else {
                    m = sample_crossover(cfg.crossover(), rng);
                    plist = {{"alpha", {cfg.crossover().alpha}}};
                }
                Spectrum s = sort_spectrum(compute_spectrum(m));
                s.provenance = SpectrumProvenance{model, derived, plist};
                if (!s.certified)
                    throw NumericalError(
                        "decomposition residual " +
                        format_g17(s.residual_bound) +
                        " above certification threshold");
                RealizationOutcome out;
                out.csr = complex_spacing_ratios(s);
                out.diag.index = index;
                out.diag.seed = derived;
                out.diag.params = plist;
                out.diag.residual = s.residual_bound;
                out.diag.certified = s.certified;
                out.diag.real_fraction = real_fraction(s);
                out.diag.ratio_count =
                    static_cast<std::int64_t>(out.csr.ratios.size());
                out.diag.skipped_degenerate = out.csr.skipped_degenerate;
                if (sink) sink(index, s);
                slots[static_cast<std::size_t>(slot)] = std::move(out);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                failures.push_back({index, derived, e.what()});
                abort.store(true, std::memory_order_relaxed);
            }
        }
    };

    const int workers = effective_workers(cfg);
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }

    if (!failures.empty()) {
        // Report the smallest failing index that was reached before the
        // abort; with a single bad realization this is stable across runs.
        const auto& worst = *std::min_element(
            failures.begin(), failures.end(),
            [](const WorkerFailure& a, const WorkerFailure& b) {
                return a.index < b.index;
            });
        throw NumericalError("realization " + std::to_string(worst.index) +
                             " (stream seed " + std::to_string(worst.seed) +
                             "): " + worst.what);
    }

    // Deterministic reduction: strictly in realization order.
    EnsembleSummary summary;
    summary.model = model;
    summary.hash = config_hash(cfg);
    CsrSet pool;
    double real_frac_sum = 0.0;
    summary.all_certified = true;
    summary.realizations.reserve(slots.size());
    for (RealizationOutcome& out : slots) {
        append(pool, out.csr);
        summary.max_residual =
            std::max(summary.max_residual, out.diag.residual);
        summary.all_certified = summary.all_certified && out.diag.certified;
        real_frac_sum += out.diag.real_fraction;
        summary.realizations.push_back(std::move(out.diag));
    }
    summary.total_eigenvalues = pool.source_eigenvalues;
    summary.total_ratios = static_cast<std::int64_t>(pool.ratios.size());
    summary.total_skipped = pool.skipped_degenerate;
    summary.mean_real_fraction =
        real_frac_sum / static_cast<double>(ensemble);
    summary.sig = signatures(pool);
    summary.radial = radial_marginal(pool, cfg.bins.r);
    summary.angular = angular_marginal(pool, cfg.bins.theta);
    summary.grid = density_2d(pool, cfg.bins.grid);
    return summary;
}

namespace {

ordered_json signatures_json(const Signatures& sig) {
    ordered_json j;
    j["mean_r"] = sig.mean_r;
    j["stderr_r"] = sig.stderr_r;
    j["mean_cos_theta"] = sig.mean_cos_theta;
    j["stderr_cos_theta"] = sig.stderr_cos_theta;
    j["neg_mean_cos_theta"] = sig.neg_mean_cos_theta();
    j["ratio_count"] = sig.count;
    return j;
}

ordered_json config_echo_json(const ExperimentConfig& cfg) {
    ordered_json j;
    if (cfg.is_spin()) {
        const SpinChainSpec& s = cfg.spin();
        j["L"] = s.length;
        ordered_json params;
        const std::pair<const char*, const ParamSource*> sources[] = {
            {"gamma", &s.gamma}, {"lambda", &s.lambda},
            {"lambda1", &s.lambda1}};
        for (const auto& [name, src] : sources) {
            if (!model_uses_param(s.model, name)) continue;
            if (src->kind == ParamSource::Kind::Fixed)
                params[name] = src->value;
            else
                params[name] = "gaussian";
        }
        j["params"] = params;
    } else {
        j["N"] = cfg.crossover().n;
        j["alpha"] = cfg.crossover().alpha;
    }
    j["ensemble_size"] = cfg.ensemble_size;
    j["master_seed"] = cfg.master_seed;
    ordered_json bins;
    bins["r"] = cfg.bins.r;
    bins["theta"] = cfg.bins.theta;
    bins["grid"] = cfg.bins.grid;
    j["bins"] = bins;
    j["reference"] = to_string(cfg.reference);
    return j;
}

void write_text_file(const fs::path& file, const std::string& text) {
    std::ofstream out(file);
    if (!out)
        throw ValidationError("cannot open '" + file.string() +
                              "' for writing");
    out << text;
    if (!out)
        throw ValidationError("write failed for '" + file.string() + "'");
}

void write_incomplete_summary(const ExperimentConfig& cfg,
                              const std::string& error) {
    ordered_json j;
    j["status"] = "incomplete";
    j["config_hash"] = config_hash(cfg);
    j["model"] = cfg.model_name();
    const ordered_json echo = config_echo_json(cfg);
    for (const auto& [key, value] : echo.items()) j[key] = value;
    j["error"] = error;
    std::error_code ec;
    fs::create_directories(cfg.outputs, ec);
    write_text_file(cfg.outputs / "summary.json", j.dump(2) + "\n");
}

}  // namespace

void write_summary_json(const EnsembleSummary& summary,
                        const ExperimentConfig* cfg, const fs::path& file) {
    ordered_json j;
    j["status"] = "complete";
    j["config_hash"] = summary.hash;
    j["model"] = summary.model;
    if (cfg) {
        const ordered_json echo = config_echo_json(*cfg);
        for (const auto& [key, value] : echo.items()) j[key] = value;
    }
    j["signatures"] = signatures_json(summary.sig);
    ordered_json counts;
    counts["eigenvalues"] = summary.total_eigenvalues;
    counts["ratios"] = summary.total_ratios;
    counts["skipped_degenerate"] = summary.total_skipped;
    j["counts"] = counts;
    ordered_json diagnostics;
    diagnostics["max_residual"] = summary.max_residual;
    diagnostics["all_certified"] = summary.all_certified;
    diagnostics["mean_real_fraction"] = summary.mean_real_fraction;
    j["diagnostics"] = diagnostics;
    write_text_file(file, j.dump(2) + "\n");
}

void write_realizations_csv(const EnsembleSummary& summary,
                            const fs::path& file) {
    std::ostringstream out;
    out << "index,seed";
    if (!summary.realizations.empty())
        for (const auto& [name, value] : summary.realizations.front().params) {
            (void)value;
            out << ',' << name;
        }
    out << ",residual,real_fraction,ratios,skipped_degenerate\n";
    for (const RealizationDiagnostics& d : summary.realizations) {
        out << d.index << ',' << d.seed;
        for (const auto& [name, values] : d.params) {
            (void)name;
            out << ',';
            // Site-resolved couplings pack their per-site values with ':'
            // so the cell stays a single CSV field.
            for (std::size_t i = 0; i < values.size(); ++i)
                out << (i ? ":" : "") << format_g17(values[i]);
        }
        out << ',' << format_g17(d.residual) << ','
            << format_g17(d.real_fraction) << ',' << d.ratio_count << ','
            << d.skipped_degenerate << "\n";
    }
    write_text_file(file, out.str());
}

void write_plot_outputs(const EnsembleSummary& summary, const fs::path& dir,
                        ReferenceChoice ref, const BinSpec& bins,
                        const fs::path& cache_dir) {
    const bool want_poisson =
        ref == ReferenceChoice::Poisson || ref == ReferenceChoice::Both;
    const bool want_ginue =
        ref == ReferenceChoice::Ginue || ref == ReferenceChoice::Both;
    std::optional<ReferenceCurves> poisson, ginue;
    if (want_poisson) poisson = poisson_reference(bins.r, bins.theta);
    if (want_ginue)
        ginue = ginue_reference(
            kGinueReferenceDim, kGinueReferenceCount, kGinueReferenceSeed,
            bins.r, bins.theta,
            cache_dir.empty() ? default_cache_dir() : cache_dir);
    write_marginal_csv(dir / "radial.csv", summary.radial, ref,
                       poisson ? &poisson->radial : nullptr,
                       ginue ? &ginue->radial : nullptr);
    write_marginal_csv(dir / "angular.csv", summary.angular, ref,
                       poisson ? &poisson->angular : nullptr,
                       ginue ? &ginue->angular : nullptr);
    write_density2d_csv(dir / "density2d.csv", summary.grid);
}

namespace {

// Reads just enough of an existing summary.json to decide resume semantics.
struct ExistingSummary {
    std::string status;
    std::string hash;
    Signatures sig;
    std::int64_t eigenvalues = 0, ratios = 0, skipped = 0;
    double max_residual = 0.0;
    bool all_certified = false;
    double mean_real_fraction = 0.0;
};

std::optional<ExistingSummary> read_existing_summary(const fs::path& file) {
    std::ifstream in(file);
    if (!in) return std::nullopt;
    nlohmann::json j;
    try {
        in >> j;
        ExistingSummary out;
        out.status = j.at("status").get<std::string>();
        out.hash = j.at("config_hash").get<std::string>();
        if (j.contains("signatures")) {
            const auto& s = j.at("signatures");
            out.sig.mean_r = s.at("mean_r").get<double>();
            out.sig.stderr_r = s.at("stderr_r").get<double>();
            out.sig.mean_cos_theta = s.at("mean_cos_theta").get<double>();
            out.sig.stderr_cos_theta =
                s.at("stderr_cos_theta").get<double>();
            out.sig.count = s.at("ratio_count").get<std::int64_t>();
        }
        if (j.contains("counts")) {
            const auto& c = j.at("counts");
            out.eigenvalues = c.at("eigenvalues").get<std::int64_t>();
            out.ratios = c.at("ratios").get<std::int64_t>();
            out.skipped = c.at("skipped_degenerate").get<std::int64_t>();
        }
        if (j.contains("diagnostics")) {
            const auto& d = j.at("diagnostics");
            out.max_residual = d.at("max_residual").get<double>();
            out.all_certified = d.at("all_certified").get<bool>();
            out.mean_real_fraction =
                d.at("mean_real_fraction").get<double>();
        }
        return out;
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
    validate_target(cfg);
    const std::string hash = config_hash(cfg);
    const fs::path summary_file = cfg.outputs / "summary.json";

    if (!opts.force && fs::exists(summary_file)) {
        const auto existing = read_existing_summary(summary_file);
        if (!existing)
            throw ValidationError(
                "'" + summary_file.string() +
                "' exists but is not a readable summary; refusing to "
                "overwrite (rerun with --force)");
        if (existing->hash != hash)
            throw ValidationError(
                "outputs directory holds results for config hash " +
                existing->hash + ", this config hashes to " + hash +
                "; use a fresh directory or --force");
        if (existing->status == "complete") {
            RunResult r;
            r.ran = false;
            r.summary.model = cfg.model_name();
            r.summary.hash = existing->hash;
            r.summary.sig = existing->sig;
            r.summary.total_eigenvalues = existing->eigenvalues;
            r.summary.total_ratios = existing->ratios;
            r.summary.total_skipped = existing->skipped;
            r.summary.max_residual = existing->max_residual;
            r.summary.all_certified = existing->all_certified;
            r.summary.mean_real_fraction = existing->mean_real_fraction;
            return r;
        }
        // An incomplete run with a matching hash is simply redone.
    }

    fs::create_directories(cfg.outputs);
    const fs::path spectra_dir = cfg.outputs / "spectra";
    SpectrumSink sink;
    if (cfg.persist_spectra) {
        fs::create_directories(spectra_dir);
        sink = [spectra_dir](std::int64_t index, const Spectrum& s) {
            write_spectrum(spectra_dir / spectrum_file_name(index), s);
        };
    }

    EnsembleSummary summary;
    try {
        summary = compute_ensemble(cfg, sink);
    } catch (const NumericalError& e) {
        write_incomplete_summary(cfg, e.what());
        throw;
    }

    write_plot_outputs(summary, cfg.outputs, cfg.reference, cfg.bins,
                       opts.cache_dir);
    write_realizations_csv(summary, cfg.outputs / "realizations.csv");
    write_summary_json(summary, &cfg, summary_file);
    return {true, summary};
}

EnsembleSummary analyze_spectra(const std::vector<fs::path>& files,
                                const BinSpec& bins) {
    if (files.empty())
        throw ValidationError("no spectrum files to analyze");
    EnsembleSummary summary;
    CsrSet pool;
    std::string desc = "csr";
    double real_frac_sum = 0.0;
    summary.all_certified = true;
    std::int64_t index = 0;
    for (const fs::path& file : files) {
        const Spectrum s = read_spectrum(file);
        if (!s.certified)
            throw ValidationError(
                file.string() + ": residual " + format_g17(s.residual_bound) +
                " above certification threshold; refusing to pool");
        ++index;
        CsrSet csr = complex_spacing_ratios(s);
        RealizationDiagnostics d;
        d.index = index;
        if (s.provenance) {
            d.seed = s.provenance->seed;
            d.params = s.provenance->params;
            if (summary.model.empty())
                summary.model = s.provenance->model;
            else if (summary.model != s.provenance->model)
                summary.model = "mixed";
        } else if (summary.model.empty()) {
            summary.model = "unknown";
        }
        d.residual = s.residual_bound;
        d.certified = s.certified;
        d.real_fraction = real_fraction(s);
        d.ratio_count = static_cast<std::int64_t>(csr.ratios.size());
        d.skipped_degenerate = csr.skipped_degenerate;
        summary.max_residual = std::max(summary.max_residual, d.residual);
        summary.all_certified = summary.all_certified && d.certified;
        real_frac_sum += d.real_fraction;
        summary.realizations.push_back(std::move(d));
        append(pool, csr);
        desc += ";" + file.filename().string();
    }
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const unsigned char c : desc) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    summary.hash = buf;
    summary.total_eigenvalues = pool.source_eigenvalues;
    summary.total_ratios = static_cast<std::int64_t>(pool.ratios.size());
    summary.total_skipped = pool.skipped_degenerate;
    summary.mean_real_fraction =
        real_frac_sum / static_cast<double>(files.size());
    summary.sig = signatures(pool);
    summary.radial = radial_marginal(pool, bins.r);
    summary.angular = angular_marginal(pool, bins.theta);
    summary.grid = density_2d(pool, bins.grid);
    return summary;
}

}  // namespace ginspectra
