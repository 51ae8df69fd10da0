#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ginspectra/config.hpp"
#include "ginspectra/csr.hpp"

namespace ginspectra {

struct RealizationDiagnostics {
    std::int64_t index = 0;  // 1-based; equals the RNG stream index
    std::uint64_t seed = 0;  // derived stream seed
    // Realized couplings in canonical order (gamma/lambda/lambda1 for spin
    // models, alpha for crossovers); one value when uniform, one per site
    // when site-resolved.
    std::vector<std::pair<std::string, std::vector<double>>> params;
    double residual = 0.0;
    bool certified = false;
    double real_fraction = 0.0;
    std::int64_t ratio_count = 0;
    std::int64_t skipped_degenerate = 0;
};

struct EnsembleSummary {
    std::string model;
    std::string hash;
    Signatures sig;
    Histogram1D radial;
    Histogram1D angular;
    Histogram2D grid;
    std::int64_t total_eigenvalues = 0;
    std::int64_t total_ratios = 0;
    std::int64_t total_skipped = 0;
    double max_residual = 0.0;
    bool all_certified = false;
    double mean_real_fraction = 0.0;
    std::vector<RealizationDiagnostics> realizations;
};

// Statistics only, no filesystem side effects. Realization i (1-based) uses
// RNG stream (master_seed, i); results are reduced in index order after the
// worker pool joins, so the outcome is bit-identical for any worker count.
// Eigensolver failure aborts with NumericalError naming index and seed.
// The sink overload hands each realization's sorted spectrum to `sink`
// (called concurrently from workers, distinct indices) so callers can
// persist spectra without the harness buffering all of them.
using SpectrumSink = std::function<void(std::int64_t index, const Spectrum&)>;

EnsembleSummary compute_ensemble(const ExperimentConfig& cfg);
EnsembleSummary compute_ensemble(const ExperimentConfig& cfg,
                                 const SpectrumSink& sink);

struct RunOptions {
    bool force = false;  // rerun even if outputs hold a matching summary
    std::filesystem::path cache_dir;  // GinUE reference cache ("" = default)
};

struct RunResult {
    bool ran = false;  // false: resume no-op, outputs already complete
    EnsembleSummary summary;
};

// Full experiment: compute, then write under cfg.outputs:
//   summary.json                    signatures, counts, diagnostics, hash
//   radial.csv / angular.csv        marginals (+ requested reference cols)
//   density2d.csv                   2-D ratio density
//   realizations.csv                per-realization parameter/residual log
//   spectra/spectrum_NNNNNN.csv     per-realization spectra (if persisted)
// Rerunning against outputs holding a complete summary with the same config
// hash is a no-op unless force; a DIFFERENT hash refuses to clobber. On
// eigensolver failure a summary with status "incomplete" (failed index,
// seed, error) is left behind and the error rethrown.
RunResult run_experiment(const ExperimentConfig& cfg,
                         const RunOptions& opts = {});

// CSR-from-files entry: pool ratios of already-stored spectra and emit the
// same plot set (no summary.json resume semantics, no spectra/ copies).
EnsembleSummary analyze_spectra(const std::vector<std::filesystem::path>& files,
                                const BinSpec& bins);

// Marginal + 2-D CSVs (with reference columns as requested); the GinUE
// reference is resolved through cache_dir ("" = default location).
void write_plot_outputs(const EnsembleSummary& summary,
                        const std::filesystem::path& dir, ReferenceChoice ref,
                        const BinSpec& bins,
                        const std::filesystem::path& cache_dir);

// summary.json; `cfg` adds the config echo block (pass nullptr for pooled
// file analysis where there is no experiment config).
void write_summary_json(const EnsembleSummary& summary,
                        const ExperimentConfig* cfg,
                        const std::filesystem::path& file);

// index,seed,<params...>,residual,real_fraction,ratios,skipped_degenerate
void write_realizations_csv(const EnsembleSummary& summary,
                            const std::filesystem::path& file);

}  // namespace ginspectra
