#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "ginspectra/csr.hpp"
#include "ginspectra/ensembles.hpp"
#include "ginspectra/spectrum_io.hpp"

namespace ginspectra {

namespace {

namespace fs = std::filesystem;

fs::path cache_file(const fs::path& dir, int n, int count,
                    std::uint64_t seed) {
    char name[96];
    std::snprintf(name, sizeof name, "ginue_ratios_n%d_c%d_s%016" PRIx64
                  ".csv", n, count, seed);
    return dir / name;
}

bool load_cached(const fs::path& file, CsrSet& out) {
    std::ifstream in(file);
    if (!in) return false;
    std::string line;
    std::int64_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string key;
            if (hs >> key) {
                const auto eq = key.find('=');
                if (eq != std::string::npos) {
                    const std::string name = key.substr(0, eq);
                    const std::string val = key.substr(eq + 1);
                    if (name == "skipped")
                        out.skipped_degenerate = std::stoll(val);
                    else if (name == "source_eigenvalues")
                        out.source_eigenvalues = std::stoll(val);
                }
            }
            continue;
        }
        if (line == "re,im") continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ValidationError(file.string() + ":" + std::to_string(row) +
                                  ": malformed ratio row");
        out.ratios.emplace_back(parse_double(line.substr(0, comma)),
                                parse_double(line.substr(comma + 1)));
    }
    return !out.ratios.empty();
}

void store_cache(const fs::path& file, const CsrSet& csr) {
    std::error_code ec;
    fs::create_directories(file.parent_path(), ec);
    // Write-then-rename: concurrent builders produce identical bytes, so
    // whoever renames last changes nothing.
    const fs::path tmp =
        file.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp);
        if (!out) return;  // cache is best-effort; computation already done
        out << "# skipped=" << csr.skipped_degenerate << "\n";
        out << "# source_eigenvalues=" << csr.source_eigenvalues << "\n";
        out << "re,im\n";
        for (const Complex& z : csr.ratios)
            out << format_g17(z.real()) << ',' << format_g17(z.imag())
                << "\n";
    }
    fs::rename(tmp, file, ec);
    if (ec) fs::remove(tmp, ec);
}

CsrSet compute_pooled_ratios(int n, int count, std::uint64_t seed) {
    CsrSet pool;
    for (int i = 1; i <= count; ++i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        const ComplexMatrix m = sample_ginue(n, rng);
        const Spectrum s = eigenvalues(m);
        if (!s.certified)
            throw NumericalError(
                "reference decomposition failed certification (matrix " +
                std::to_string(i) + ", residual " +
                std::to_string(s.residual_bound) + ")");
        append(pool, complex_spacing_ratios(s));
    }
    return pool;
}

}  // namespace

ReferenceCurves ginue_reference(int n, int count, std::uint64_t seed,
                                int bins_r, int bins_theta,
                                const fs::path& cache_dir) {
    if (count < 1) throw ValidationError("reference needs at least 1 matrix");
    CsrSet pool;
    bool cached = false;
    fs::path file;
    if (!cache_dir.empty()) {
        file = cache_file(cache_dir, n, count, seed);
        cached = load_cached(file, pool);
    }
    if (!cached) {
        pool = compute_pooled_ratios(n, count, seed);
        if (!cache_dir.empty()) store_cache(file, pool);
    }
    ReferenceCurves ref;
    ref.radial = radial_marginal(pool, bins_r);
    ref.angular = angular_marginal(pool, bins_theta);
    ref.sig = signatures(pool);
    return ref;
}

}  // namespace ginspectra
