#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <doctest.h>

#include "ginspectra/config.hpp"
#include "ginspectra/rng.hpp"
#include "ginspectra/spectrum_io.hpp"

using namespace ginspectra;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("ginspectra_io_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

void write_text(const fs::path& file, const std::string& text) {
    std::ofstream out(file);
    out << text;
}

const char* kSpinConfig = R"({
    "model": "H2",
    "L": 4,
    "params": {"gamma": 0.5, "lambda": "gaussian", "lambda1": 0.25},
    "ensemble_size": 10,
    "master_seed": 99,
    "outputs": "out_dir"
})";

const char* kCrossoverConfig = R"({
    "model": "MM1",
    "N": 64,
    "alpha": 0.5,
    "ensemble_size": 5,
    "master_seed": 7,
    "bins": {"r": 25, "theta": 30, "grid": 41},
    "outputs": "out_dir",
    "reference": "both",
    "workers": 3
})";

std::string replace_once(std::string text, const std::string& from,
                         const std::string& to) {
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("spectrum files round-trip exactly") {
    TempDir tmp;
    RngStream rng(1234, 1);
    Spectrum s;
    for (int i = 0; i < 37; ++i) s.eigenvalues.push_back(rng.gauss_complex());
    s.residual_bound = 3.25e-13;
    s.certified = true;
    SpectrumProvenance prov;
    prov.model = "H2";
    prov.seed = derive_stream_seed(1234, 1);
    // One uniform coupling, one site-resolved, one with an extreme value.
    prov.params = {{"gamma", {0.1}},
                   {"lambda", {-2.5, 0.03125, 7.25e-19, 3.0}},
                   {"lambda1", {1e-9}}};
    s.provenance = prov;

    const fs::path file = tmp.path / "spec.csv";
    write_spectrum(file, s);
    const Spectrum back = read_spectrum(file);
    REQUIRE(back.eigenvalues.size() == s.eigenvalues.size());
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
        CHECK(back.eigenvalues[i] == s.eigenvalues[i]);
    CHECK(back.residual_bound == s.residual_bound);
    CHECK(back.certified);
    REQUIRE(back.provenance.has_value());
    CHECK(back.provenance->model == "H2");
    CHECK(back.provenance->seed == prov.seed);
    REQUIRE(back.provenance->params.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back.provenance->params[i].first == prov.params[i].first);
        CHECK(back.provenance->params[i].second == prov.params[i].second);
    }

    // Without provenance only residual + data rows are written.
    Spectrum bare;
    bare.eigenvalues = {Complex(1.0, -1.0), Complex(0.5, 0.25)};
    bare.residual_bound = 0.0;
    bare.certified = true;
    const fs::path file2 = tmp.path / "bare.csv";
    write_spectrum(file2, bare);
    const Spectrum back2 = read_spectrum(file2);
    CHECK(!back2.provenance.has_value());
    CHECK(back2.eigenvalues[1] == Complex(0.5, 0.25));
}

TEST_CASE("spectrum parser rejects malformed input with file and line") {
    TempDir tmp;
    const fs::path file = tmp.path / "bad.csv";

    write_text(file, "re,im\n1.0,2.0\nnot_a_number,3.0\n");
    try {
        read_spectrum(file);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("bad.csv") != std::string::npos);
        CHECK(msg.find("3") != std::string::npos);  // offending line number
    }

    write_text(file, "# unknown_key=1\nre,im\n1.0,2.0\n");
    CHECK_THROWS_AS(read_spectrum(file), ValidationError);

    write_text(file, "1.0,2.0\n");  // missing the column header row
    CHECK_THROWS_AS(read_spectrum(file), ValidationError);

    write_text(file, "re,im\n");  // no eigenvalues
    CHECK_THROWS_AS(read_spectrum(file), ValidationError);

    write_text(file, "re,im\n1.0\n");  // missing im column
    CHECK_THROWS_AS(read_spectrum(file), ValidationError);

    write_text(file, "");
    CHECK_THROWS_AS(read_spectrum(file), ValidationError);

    CHECK_THROWS_AS(read_spectrum(tmp.path / "missing.csv"), ValidationError);

    // Windows line endings are tolerated.
    write_text(file, "re,im\r\n0.5,-0.5\r\n");
    const Spectrum s = read_spectrum(file);
    CHECK(s.eigenvalues[0] == Complex(0.5, -0.5));
}

TEST_CASE("g17 formatting round-trips doubles") {
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -5e-324, 0.0, 12345.678901234567}) {
        CHECK(parse_double(format_g17(v)) == v);
    }
    CHECK_THROWS_AS(parse_double("1.0x"), ValidationError);
    CHECK_THROWS_AS(parse_double(""), ValidationError);
    CHECK_THROWS_AS(parse_double("1,5"), ValidationError);
}

TEST_CASE("reference choice names") {
    CHECK(reference_from_string("none") == ReferenceChoice::None);
    CHECK(reference_from_string("poisson") == ReferenceChoice::Poisson);
    CHECK(reference_from_string("ginue") == ReferenceChoice::Ginue);
    CHECK(reference_from_string("both") == ReferenceChoice::Both);
    CHECK_THROWS_AS(reference_from_string("wigner"), ValidationError);
    CHECK(to_string(ReferenceChoice::Both) == "both");
}

TEST_CASE("valid configs parse with expected defaults") {
    const ExperimentConfig spin = parse_config(kSpinConfig);
    REQUIRE(spin.is_spin());
    CHECK(spin.spin().model == SpinModel::H2);
    CHECK(spin.spin().length == 4);
    CHECK(spin.matrix_dim() == 16);
    CHECK(spin.spin().gamma.kind == ParamSource::Kind::Fixed);
    CHECK(spin.spin().gamma.value == 0.5);
    CHECK(spin.spin().lambda.kind == ParamSource::Kind::GaussianStandard);
    CHECK(spin.ensemble_size == 10);
    CHECK(spin.master_seed == 99);
    CHECK(spin.bins.r == 50);       // defaults
    CHECK(spin.bins.theta == 50);
    CHECK(spin.bins.grid == 101);
    CHECK(spin.reference == ReferenceChoice::None);
    CHECK(spin.workers == 0);
    CHECK(spin.outputs == fs::path("out_dir"));
    CHECK(spin.model_name() == "H2");

    const ExperimentConfig mm = parse_config(kCrossoverConfig);
    REQUIRE(!mm.is_spin());
    CHECK(mm.crossover().model == MatrixModel::MM1);
    CHECK(mm.crossover().n == 64);
    CHECK(mm.matrix_dim() == 64);
    CHECK(mm.crossover().alpha == 0.5);
    CHECK(mm.bins.r == 25);
    CHECK(mm.bins.theta == 30);
    CHECK(mm.bins.grid == 41);
    CHECK(mm.reference == ReferenceChoice::Both);
    CHECK(mm.workers == 3);

    // workers may be the string "auto".
    const ExperimentConfig auto_workers = parse_config(replace_once(
        std::string(kCrossoverConfig), "\"workers\": 3", "\"workers\": \"auto\""));
    CHECK(auto_workers.workers == 0);
}

TEST_CASE("config rejection paths name the offending key") {
    auto expect_reject = [](const std::string& json, const char* needle) {
        try {
            parse_config(json);
            FAIL("expected ValidationError for: ", needle);
        } catch (const ValidationError& e) {
            const std::string msg = e.what();
            CHECK_MESSAGE(msg.find(needle) != std::string::npos,
                          "message was: ", msg);
        }
    };

    expect_reject("{", "config");  // not valid JSON
    expect_reject("[1,2]", "object");

    expect_reject(replace_once(std::string(kSpinConfig), "\"L\": 4",
                               "\"L\": 4, \"frobnicate\": 1"),
                  "frobnicate");
    expect_reject(replace_once(std::string(kSpinConfig), "\"L\": 4",
                               "\"L\": 4, \"N\": 32"),
                  "N");
    expect_reject(replace_once(std::string(kSpinConfig), "\"L\": 4",
                               "\"L\": 4, \"alpha\": 0.5"),
                  "alpha");
    expect_reject(replace_once(std::string(kCrossoverConfig), "\"N\": 64",
                               "\"N\": 64, \"L\": 4"),
                  "L");
    expect_reject(replace_once(std::string(kCrossoverConfig), "\"N\": 64",
                               "\"N\": 64, \"params\": {}"),
                  "params");

    // Model/parameter mismatches.
    expect_reject(R"({"model": "Him", "L": 4,
                      "params": {"gamma": 0.5, "lambda": 0.1},
                      "ensemble_size": 1, "master_seed": 1,
                      "outputs": "o"})",
                  "lambda");
    expect_reject(R"({"model": "H0", "L": 4,
                      "params": {"gamma": 0.5},
                      "ensemble_size": 1, "master_seed": 1,
                      "outputs": "o"})",
                  "gamma");
    expect_reject(R"({"model": "H1", "L": 4,
                      "params": {"lambda1": 0.5},
                      "ensemble_size": 1, "master_seed": 1,
                      "outputs": "o"})",
                  "lambda1");
    expect_reject(R"({"model": "Hxx", "L": 4, "ensemble_size": 1,
                      "master_seed": 1, "outputs": "o"})",
                  "model");

    // Bounds.
    expect_reject(replace_once(std::string(kSpinConfig), "\"L\": 4", "\"L\": 1"),
                  "L");
    expect_reject(replace_once(std::string(kSpinConfig), "\"L\": 4", "\"L\": 13"),
                  "L");
    expect_reject(replace_once(std::string(kCrossoverConfig), "\"N\": 64",
                               "\"N\": 1"),
                  "N");
    expect_reject(replace_once(std::string(kCrossoverConfig), "\"N\": 64",
                               "\"N\": 10000"),
                  "N");
    expect_reject(replace_once(std::string(kCrossoverConfig),
                               "\"alpha\": 0.5", "\"alpha\": -1.0"),
                  "alpha");
    expect_reject(replace_once(std::string(kSpinConfig),
                               "\"ensemble_size\": 10",
                               "\"ensemble_size\": 0"),
                  "ensemble_size");
    expect_reject(replace_once(std::string(kSpinConfig),
                               "\"master_seed\": 99",
                               "\"master_seed\": -5"),
                  "master_seed");
    expect_reject(replace_once(std::string(kCrossoverConfig),
                               "\"workers\": 3", "\"workers\": 0"),
                  "workers");
    expect_reject(replace_once(std::string(kCrossoverConfig),
                               "\"workers\": 3", "\"workers\": \"many\""),
                  "workers");
    expect_reject(replace_once(std::string(kCrossoverConfig),
                               "\"reference\": \"both\"",
                               "\"reference\": \"wigner\""),
                  "reference");
    expect_reject(replace_once(std::string(kCrossoverConfig),
                               "\"bins\": {\"r\": 25, \"theta\": 30, \"grid\": 41}",
                               "\"bins\": {\"r\": 0}"),
                  "r");
    expect_reject(replace_once(std::string(kSpinConfig),
                               "\"outputs\": \"out_dir\"",
                               "\"outputs\": \"\""),
                  "outputs");

    // Required keys.
    expect_reject(R"({"model": "H1", "L": 4})", "ensemble_size");
    expect_reject(R"({"model": "MM2", "ensemble_size": 1, "master_seed": 1,
                      "alpha": 1.0, "outputs": "o"})",
                  "N");
    expect_reject(R"({"model": "MM2", "N": 32, "ensemble_size": 1,
                      "master_seed": 1, "outputs": "o"})",
                  "alpha");
    expect_reject(R"({"L": 4, "ensemble_size": 1, "master_seed": 1,
                      "outputs": "o"})",
                  "model");
}

TEST_CASE("config hash covers statistics fields only") {
    const ExperimentConfig base = parse_config(kCrossoverConfig);
    const std::string h = config_hash(base);
    CHECK(h.size() == 16);  // 64-bit hex
    CHECK(config_hash(parse_config(kCrossoverConfig)) == h);

    // outputs and workers are execution details: same hash.
    const ExperimentConfig other_out = parse_config(replace_once(
        std::string(kCrossoverConfig), "\"outputs\": \"out_dir\"",
        "\"outputs\": \"elsewhere\""));
    CHECK(config_hash(other_out) == h);
    const ExperimentConfig other_workers = parse_config(replace_once(
        std::string(kCrossoverConfig), "\"workers\": 3", "\"workers\": 1"));
    CHECK(config_hash(other_workers) == h);

    // Statistics-relevant fields change it.
    CHECK(config_hash(parse_config(replace_once(
              std::string(kCrossoverConfig), "\"master_seed\": 7",
              "\"master_seed\": 8"))) != h);
    CHECK(config_hash(parse_config(replace_once(
              std::string(kCrossoverConfig), "\"alpha\": 0.5",
              "\"alpha\": 0.75"))) != h);
    CHECK(config_hash(parse_config(replace_once(
              std::string(kCrossoverConfig), "\"ensemble_size\": 5",
              "\"ensemble_size\": 6"))) != h);
    CHECK(config_hash(parse_config(replace_once(
              std::string(kCrossoverConfig), "\"r\": 25", "\"r\": 26"))) != h);
    CHECK(config_hash(parse_config(kSpinConfig)) != h);

    // Fixed vs gaussian parameter sources hash differently.
    const std::string fixed_lambda = replace_once(
        std::string(kSpinConfig), "\"lambda\": \"gaussian\"", "\"lambda\": 0.7");
    CHECK(config_hash(parse_config(fixed_lambda)) !=
          config_hash(parse_config(kSpinConfig)));
}

TEST_CASE("load_config_file reports missing files") {
    CHECK_THROWS_AS(load_config_file("/nonexistent/path/config.json"),
                    ValidationError);
    TempDir tmp;
    const fs::path file = tmp.path / "cfg.json";
    write_text(file, kSpinConfig);
    const ExperimentConfig cfg = load_config_file(file);
    CHECK(cfg.is_spin());
}

TEST_CASE("marginal and density csv layout") {
    TempDir tmp;
    Histogram1D h;
    h.lo = 0.0;
    h.hi = 1.0;
    h.counts = {1, 3};
    h.density = {0.5, 1.5};
    h.total = 4;

    Histogram1D ref = h;
    ref.density = {1.0, 1.0};

    const fs::path file = tmp.path / "marg.csv";
    write_marginal_csv(file, h, ReferenceChoice::Poisson, &ref, nullptr);
    std::ifstream in(file);
    std::string header, row;
    std::getline(in, header);
    CHECK(header == "bin_lo,bin_hi,density,reference_poisson");
    std::getline(in, row);
    CHECK(row.substr(0, 2) == "0,");
    int rows = 1;
    while (std::getline(in, row))
        if (!row.empty()) ++rows;
    CHECK(rows == 2);

    // Requesting a reference column without the curve is a logic error the
    // writer refuses.
    CHECK_THROWS_AS(write_marginal_csv(tmp.path / "m2.csv", h,
                                       ReferenceChoice::Ginue, nullptr,
                                       nullptr),
                    ValidationError);

    Histogram2D g;
    g.grid = 2;
    g.counts = {0, 1, 2, 1};
    g.density = {0.0, 0.25, 0.5, 0.25};
    g.total = 4;
    const fs::path file2 = tmp.path / "grid.csv";
    write_density2d_csv(file2, g);
    std::ifstream in2(file2);
    std::getline(in2, header);
    CHECK(header == "x_lo,x_hi,y_lo,y_hi,density");
    rows = 0;
    while (std::getline(in2, row))
        if (!row.empty()) ++rows;
    CHECK(rows == 4);
}
