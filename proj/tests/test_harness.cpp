#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "ginspectra/harness.hpp"
#include "ginspectra/tables.hpp"

using namespace ginspectra;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const char* tag) {
        path = fs::temp_directory_path() /
               (std::string("ginspectra_") + tag + "_" +
                std::to_string(::getpid()));
        std::error_code ec;
        fs::remove_all(path, ec);
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

ExperimentConfig tiny_crossover(const fs::path& outputs) {
    ExperimentConfig cfg;
    CrossoverSpec spec;
    spec.model = MatrixModel::MM2;
    spec.n = 40;
    spec.alpha = 0.3;
    cfg.target = spec;
    cfg.ensemble_size = 16;
    cfg.master_seed = 4242;
    cfg.bins.r = 10;
    cfg.bins.theta = 12;
    cfg.bins.grid = 21;
    cfg.outputs = outputs;
    cfg.reference = ReferenceChoice::Poisson;
    cfg.workers = 2;
    return cfg;
}

std::string slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// Byte comparison of two output trees (same relative file set, same bytes).
void check_trees_identical(const fs::path& a, const fs::path& b) {
    std::map<std::string, fs::path> left, right;
    for (const auto& e : fs::recursive_directory_iterator(a))
        if (e.is_regular_file())
            left[fs::relative(e.path(), a).string()] = e.path();
    for (const auto& e : fs::recursive_directory_iterator(b))
        if (e.is_regular_file())
            right[fs::relative(e.path(), b).string()] = e.path();
    REQUIRE(left.size() == right.size());
    for (const auto& [rel, file] : left) {
        REQUIRE_MESSAGE(right.count(rel) == 1, "missing from second tree: ", rel);
        CHECK_MESSAGE(slurp(file) == slurp(right[rel]), "differs: ", rel);
    }
}

}  // namespace

TEST_CASE("compute_ensemble conserves counts and is worker-invariant") {
    TempDir tmp("harness_counts");
    ExperimentConfig cfg = tiny_crossover(tmp.path / "out");
    const EnsembleSummary s = compute_ensemble(cfg);

    CHECK(s.model == "MM2");
    CHECK(s.total_eigenvalues == cfg.ensemble_size * 40);
    CHECK(s.total_ratios + s.total_skipped == s.total_eigenvalues);
    CHECK(s.sig.count == s.total_ratios);
    CHECK(s.all_certified);
    CHECK(s.max_residual <= kCertificationThreshold);
    REQUIRE(std::int64_t(s.realizations.size()) == cfg.ensemble_size);
    for (std::int64_t i = 0; i < cfg.ensemble_size; ++i) {
        const RealizationDiagnostics& d = s.realizations[std::size_t(i)];
        CHECK(d.index == i + 1);
        CHECK(d.seed == derive_stream_seed(cfg.master_seed, i + 1));
        REQUIRE(d.params.size() == 1);
        CHECK(d.params[0].first == "alpha");
        CHECK(d.params[0].second == std::vector<double>{0.3});
    }

    std::int64_t hist_total = 0;
    for (auto c : s.radial.counts) hist_total += c;
    CHECK(hist_total == s.total_ratios);

    // Same statistics regardless of worker count.
    ExperimentConfig serial = cfg;
    serial.workers = 1;
    const EnsembleSummary s1 = compute_ensemble(serial);
    REQUIRE(s1.sig.count == s.sig.count);
    CHECK(s1.sig.mean_r == s.sig.mean_r);
    CHECK(s1.sig.mean_cos_theta == s.sig.mean_cos_theta);
    CHECK(s1.hash == s.hash);
}

TEST_CASE("run_experiment writes the full output tree") {
    TempDir tmp("harness_run");
    const ExperimentConfig cfg = tiny_crossover(tmp.path / "out");
    const RunResult r = run_experiment(cfg);
    CHECK(r.ran);

    const fs::path out = cfg.outputs;
    CHECK(fs::exists(out / "summary.json"));
    CHECK(fs::exists(out / "radial.csv"));
    CHECK(fs::exists(out / "angular.csv"));
    CHECK(fs::exists(out / "density2d.csv"));
    CHECK(fs::exists(out / "realizations.csv"));
    for (int i = 1; i <= 16; ++i) {
        char name[40];
        std::snprintf(name, sizeof name, "spectrum_%06d.csv", i);
        CHECK(fs::exists(out / "spectra" / name));
    }

    const std::string summary = slurp(out / "summary.json");
    CHECK(summary.find("\"status\": \"complete\"") != std::string::npos);
    CHECK(summary.find("\"mean_r\"") != std::string::npos);
    CHECK(summary.find("\"neg_mean_cos_theta\"") != std::string::npos);
    CHECK(summary.find(r.summary.hash) != std::string::npos);

    // The poisson reference column was requested.
    const std::string radial = slurp(out / "radial.csv");
    CHECK(radial.find("reference_poisson") != std::string::npos);

    // Resume: same config is a no-op.
    const RunResult again = run_experiment(cfg);
    CHECK(!again.ran);
    CHECK(again.summary.hash == r.summary.hash);

    // A config with a different hash refuses to overwrite.
    ExperimentConfig other = cfg;
    other.master_seed = 4243;
    CHECK_THROWS_AS(run_experiment(other), ValidationError);

    // force reruns in place.
    RunOptions force;
    force.force = true;
    const RunResult forced = run_experiment(cfg, force);
    CHECK(forced.ran);
}

TEST_CASE("worker count does not change a single byte of output") {
    TempDir tmp("harness_workers");
    ExperimentConfig one = tiny_crossover(tmp.path / "one");
    one.workers = 1;
    ExperimentConfig four = tiny_crossover(tmp.path / "four");
    four.workers = 4;
    run_experiment(one);
    run_experiment(four);
    check_trees_identical(tmp.path / "one", tmp.path / "four");
}

TEST_CASE("spin-chain experiments record realized couplings") {
    TempDir tmp("harness_spin");
    ExperimentConfig cfg;
    SpinChainSpec spec;
    spec.model = SpinModel::H1;
    spec.length = 3;
    spec.gamma = ParamSource::fixed(0.4);
    spec.lambda = ParamSource::gaussian();
    cfg.target = spec;
    cfg.ensemble_size = 6;
    cfg.master_seed = 77;
    cfg.bins.r = 8;
    cfg.bins.theta = 8;
    cfg.bins.grid = 11;
    cfg.outputs = tmp.path / "out";
    const RunResult r = run_experiment(cfg);
    REQUIRE(r.ran);
    REQUIRE(r.summary.realizations.size() == 6);
    for (const RealizationDiagnostics& d : r.summary.realizations) {
        REQUIRE(d.params.size() == 2);
        CHECK(d.params[0].first == "gamma");
        // The pinned coupling is uniform; the Gaussian one is site-resolved.
        CHECK(d.params[0].second == std::vector<double>{0.4});
        CHECK(d.params[1].first == "lambda");
        CHECK(d.params[1].second.size() == 3);
    }
    // Gaussian lambda differs between realizations.
    CHECK(r.summary.realizations[0].params[1].second !=
          r.summary.realizations[1].params[1].second);

    // Echo block lists the spin couplings.
    const std::string summary = slurp(cfg.outputs / "summary.json");
    CHECK(summary.find("\"lambda\": \"gaussian\"") != std::string::npos);
    CHECK(summary.find("\"gamma\": 0.4") != std::string::npos);

    const std::string realizations = slurp(cfg.outputs / "realizations.csv");
    CHECK(realizations.find("index,seed,gamma,lambda,residual") == 0);
}

TEST_CASE("analyze_spectra pools stored spectra like the harness") {
    TempDir tmp("harness_analyze");
    const ExperimentConfig cfg = tiny_crossover(tmp.path / "out");
    const RunResult r = run_experiment(cfg);

    std::vector<fs::path> files;
    for (int i = 1; i <= 16; ++i) {
        char name[40];
        std::snprintf(name, sizeof name, "spectrum_%06d.csv", i);
        files.push_back(cfg.outputs / "spectra" / name);
    }
    const EnsembleSummary pooled = analyze_spectra(files, cfg.bins);
    CHECK(pooled.model == "MM2");
    CHECK(pooled.total_eigenvalues == r.summary.total_eigenvalues);
    CHECK(pooled.total_ratios == r.summary.total_ratios);
    // Spectra round-trip exactly, so pooled statistics match exactly.
    CHECK(pooled.sig.mean_r == r.summary.sig.mean_r);
    CHECK(pooled.sig.mean_cos_theta == r.summary.sig.mean_cos_theta);

    CHECK_THROWS_AS(analyze_spectra({}, cfg.bins), ValidationError);
    CHECK_THROWS_AS(
        analyze_spectra({tmp.path / "missing.csv"}, cfg.bins),
        ValidationError);

    // An uncertified spectrum (residual above threshold) must be refused,
    // not silently pooled.
    std::string text = slurp(files[0]);
    const std::string::size_type at = text.find("# residual=");
    REQUIRE(at != std::string::npos);
    const std::string::size_type eol = text.find('\n', at);
    text.replace(at, eol - at, "# residual=0.5");
    const fs::path tampered = tmp.path / "tampered.csv";
    {
        std::ofstream out(tampered);
        out << text;
    }
    CHECK_THROWS_AS(analyze_spectra({tampered}, cfg.bins), ValidationError);
}

TEST_CASE("ginue reference cache round-trips bit for bit") {
    TempDir tmp("harness_cache");
    const ReferenceCurves first =
        ginue_reference(24, 3, 999, 15, 17, tmp.path);

    // Exactly one cache file appears.
    int files = 0;
    fs::path cache_file;
    for (const auto& e : fs::directory_iterator(tmp.path)) {
        ++files;
        cache_file = e.path();
    }
    REQUIRE(files == 1);
    CHECK(cache_file.filename().string().find("ginue_ratios_n24_c3_s") == 0);

    const std::string before = slurp(cache_file);
    const ReferenceCurves second =
        ginue_reference(24, 3, 999, 15, 17, tmp.path);
    CHECK(slurp(cache_file) == before);  // reread, not rewritten

    REQUIRE(first.radial.density.size() == second.radial.density.size());
    for (std::size_t i = 0; i < first.radial.density.size(); ++i)
        CHECK(first.radial.density[i] == second.radial.density[i]);
    CHECK(first.sig.mean_r == second.sig.mean_r);
    CHECK(first.sig.mean_cos_theta == second.sig.mean_cos_theta);

    // Different bin count, same cache: signatures unchanged.
    const ReferenceCurves rebinned =
        ginue_reference(24, 3, 999, 40, 40, tmp.path);
    CHECK(rebinned.sig.mean_r == first.sig.mean_r);
    CHECK(rebinned.radial.bins() == 40);
}

TEST_CASE("table catalogue and a smoke-scale reproduction") {
    const std::vector<TableRowSpec>& rows = table_row_specs();
    REQUIRE(rows.size() == 27);
    int by_table[4] = {0, 0, 0, 0};
    for (const TableRowSpec& row : rows) {
        if (row.table == "I") ++by_table[0];
        if (row.table == "II") ++by_table[1];
        if (row.table == "III") ++by_table[2];
        if (row.table == "IV") ++by_table[3];
        CHECK(row.ensemble == (row.length == 6 ? 4000 : 1500));
        CHECK((row.length == 6 || row.length == 8));
        CHECK(row.ref_r > 0.4);
        CHECK(row.ref_r < 0.8);
    }
    CHECK(by_table[0] == 6);
    CHECK(by_table[1] == 9);
    CHECK(by_table[2] == 6);
    CHECK(by_table[3] == 6);

    // Tiny-scale smoke run: structure is right even though tolerances are
    // far too tight for 2-realization ensembles to pass reliably.
    const TableReport report = reproduce_tables(0.0005, 1, 2);
    REQUIRE(report.rows.size() == 27);
    for (const TableRowResult& r : report.rows) {
        CHECK(r.ok);
        CHECK(r.error.empty());
        CHECK(r.got_r > 0.0);
        CHECK(r.tol_r > 0.0);
        CHECK(r.tol_neg_cos > 0.0);
    }

    std::ostringstream os;
    print_table_report(os, report);
    const std::string text = os.str();
    CHECK(text.find("H1") != std::string::npos);
    CHECK(text.find("gamma") != std::string::npos);

    TempDir tmp("harness_tables");
    write_table_report_csv(tmp.path / "tables.csv", report);
    const std::string csv = slurp(tmp.path / "tables.csv");
    CHECK(csv.find("table,model,L,coupling") == 0);
}
