// Command-line front end for the spectral-statistics pipeline.
//
// Exit codes: 0 success, 1 validation/configuration error, 2 numerical
// failure (non-convergence, uncertified decompositions).

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ginspectra/config.hpp"
#include "ginspectra/harness.hpp"
#include "ginspectra/tables.hpp"

namespace fs = std::filesystem;
using namespace ginspectra;

namespace {

void print_signatures(std::ostream& os, const EnsembleSummary& s) {
    os << "model " << s.model << ": <r> = " << format_g17(s.sig.mean_r)
       << " +/- " << format_g17(s.sig.stderr_r)
       << ", -<cos theta> = " << format_g17(s.sig.neg_mean_cos_theta())
       << " +/- " << format_g17(s.sig.stderr_cos_theta) << "\n";
    os << "ratios " << s.total_ratios << " (skipped "
       << s.total_skipped << " degenerate) from " << s.total_eigenvalues
       << " eigenvalues; max residual " << format_g17(s.max_residual)
       << "\n";
}

int run_command(const std::string& config_file, bool force,
                const std::string& cache_dir) {
    const ExperimentConfig cfg = load_config_file(config_file);
    RunOptions opts;
    opts.force = force;
    opts.cache_dir = cache_dir;
    const RunResult result = run_experiment(cfg, opts);
    if (!result.ran) {
        std::cout << "outputs already complete for config hash "
                  << result.summary.hash << "; nothing to do (use --force to "
                  << "recompute)\n";
        print_signatures(std::cout, result.summary);
        return 0;
    }
    std::cout << "wrote " << cfg.outputs.string() << " (config hash "
              << result.summary.hash << ")\n";
    print_signatures(std::cout, result.summary);
    return 0;
}

int tables_command(double scale, std::uint64_t seed, int workers,
                   const std::string& out_csv) {
    const TableReport report = reproduce_tables(scale, seed, workers);
    print_table_report(std::cout, report);
    if (!out_csv.empty()) {
        write_table_report_csv(out_csv, report);
        std::cout << "report written to " << out_csv << "\n";
    }
    // Statistical FAIL rows are report content, not tool failures; only a
    // row that could not be computed at all is an error.
    for (const TableRowResult& r : report.rows)
        if (!r.ok) return 2;
    return 0;
}

int reference_command(int n, int count, std::uint64_t seed,
                      const std::string& cache_dir, int bins_r,
                      int bins_theta) {
    const fs::path cache =
        cache_dir.empty() ? default_cache_dir() : fs::path(cache_dir);
    const ReferenceCurves ref =
        ginue_reference(n, count, seed, bins_r, bins_theta, cache);
    std::cout << "reference ensemble: " << count << " matrices of dimension "
              << n << " (seed " << seed << ")\n";
    std::cout << "<r> = " << format_g17(ref.sig.mean_r) << " +/- "
              << format_g17(ref.sig.stderr_r) << "\n";
    std::cout << "<cos theta> = " << format_g17(ref.sig.mean_cos_theta)
              << " +/- " << format_g17(ref.sig.stderr_cos_theta) << "\n";
    std::cout << "cached under " << cache.string() << "\n";
    return 0;
}

int csr_command(const std::vector<std::string>& files, const BinSpec& bins,
                const std::string& out_dir, const std::string& reference,
                const std::string& cache_dir) {
    std::vector<fs::path> paths(files.begin(), files.end());
    const EnsembleSummary summary = analyze_spectra(paths, bins);
    const ReferenceChoice ref = reference_from_string(reference);
    fs::create_directories(out_dir);
    write_plot_outputs(summary, out_dir, ref, bins,
                       cache_dir.empty() ? fs::path() : fs::path(cache_dir));
    write_realizations_csv(summary, fs::path(out_dir) / "realizations.csv");
    write_summary_json(summary, nullptr, fs::path(out_dir) / "summary.json");
    std::cout << "analyzed " << files.size() << " spectra -> " << out_dir
              << "\n";
    print_signatures(std::cout, summary);
    return 0;
}

int validate_command(const std::string& config_file) {
    const ExperimentConfig cfg = load_config_file(config_file);
    std::cout << "valid: model " << cfg.model_name() << ", dimension "
              << cfg.matrix_dim() << ", ensemble " << cfg.ensemble_size
              << ", master seed " << cfg.master_seed << "\n";
    std::cout << "config hash " << config_hash(cfg) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    // Keep the BLAS single-threaded underneath the harness worker pool.
    setenv("OPENBLAS_NUM_THREADS", "1", /*overwrite=*/0);

    CLI::App app{"non-Hermitian spectral statistics toolkit"};
    app.require_subcommand(1);

    // run
    std::string run_config, run_cache;
    bool run_force = false;
    CLI::App* run = app.add_subcommand("run", "run an ensemble experiment");
    run->add_option("config", run_config, "JSON config file")->required();
    run->add_flag("--force", run_force, "recompute even if outputs exist");
    run->add_option("--cache-dir", run_cache,
                    "GinUE reference cache directory");

    // tables
    double tables_scale = 1.0;
    std::uint64_t tables_seed = 20260816ULL;
    int tables_workers = 0;
    std::string tables_out;
    CLI::App* tables =
        app.add_subcommand("tables", "recompute the reference table rows");
    tables->add_option("--scale", tables_scale,
                       "ensemble size multiplier (tolerances widen by "
                       "1/sqrt(scale) below 1)");
    tables->add_option("--seed", tables_seed, "base seed for the table rows");
    tables->add_option("--workers", tables_workers,
                       "worker threads (0 = auto)");
    tables->add_option("--out", tables_out, "write the report as CSV");

    // reference
    CLI::App* reference =
        app.add_subcommand("reference", "build reference ensembles");
    int ref_n = kGinueReferenceDim, ref_count = kGinueReferenceCount;
    std::uint64_t ref_seed = kGinueReferenceSeed;
    std::string ref_cache;
    int ref_bins_r = 50, ref_bins_theta = 50;
    CLI::App* ginue = reference->add_subcommand(
        "ginue", "(re)build the cached GinUE reference ensemble");
    ginue->add_option("--n", ref_n, "matrix dimension");
    ginue->add_option("--count", ref_count, "number of matrices");
    ginue->add_option("--seed", ref_seed, "reference master seed");
    ginue->add_option("--cache-dir", ref_cache, "cache directory");
    ginue->add_option("--bins-r", ref_bins_r, "radial bins for the report");
    ginue->add_option("--bins-theta", ref_bins_theta,
                      "angular bins for the report");
    reference->require_subcommand(1);

    // csr
    std::vector<std::string> csr_files;
    BinSpec csr_bins;
    std::string csr_out = "csr_out", csr_reference = "none", csr_cache;
    CLI::App* csr = app.add_subcommand(
        "csr", "pool spacing ratios from stored spectrum files");
    csr->add_option("files", csr_files, "spectrum CSV files")
        ->required()
        ->expected(-1);
    csr->add_option("--bins-r", csr_bins.r, "radial bins");
    csr->add_option("--bins-theta", csr_bins.theta, "angular bins");
    csr->add_option("--grid", csr_bins.grid, "2-D grid cells per side");
    csr->add_option("--out", csr_out, "output directory");
    csr->add_option("--reference", csr_reference,
                    "reference columns: none|poisson|ginue|both");
    csr->add_option("--cache-dir", csr_cache,
                    "GinUE reference cache directory");

    // validate
    std::string validate_config;
    CLI::App* validate =
        app.add_subcommand("validate", "check a config file and print its hash");
    validate->add_option("config", validate_config, "JSON config file")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) return run_command(run_config, run_force, run_cache);
        if (tables->parsed())
            return tables_command(tables_scale, tables_seed, tables_workers,
                                  tables_out);
        if (reference->parsed())
            return reference_command(ref_n, ref_count, ref_seed, ref_cache,
                                     ref_bins_r, ref_bins_theta);
        if (csr->parsed())
            return csr_command(csr_files, csr_bins, csr_out, csr_reference,
                               csr_cache);
        if (validate->parsed()) return validate_command(validate_config);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
