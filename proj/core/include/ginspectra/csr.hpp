#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ginspectra/eig.hpp"
#include "ginspectra/types.hpp"

namespace ginspectra {

// Complex spacing ratios of one (or a pool of) spectra:
//   z_k = (λ_NN − λ_k) / (λ_NNN − λ_k)
// with NN/NNN the nearest and next-to-nearest eigenvalues of λ_k in the
// complex plane. |z| <= 1 always. Ratios whose NNN distance is zero
// (triply-degenerate points) are skipped and counted; a zero NN distance
// with nonzero NNN gives z = 0 and is kept.
struct CsrSet {
    std::vector<Complex> ratios;
    std::int64_t skipped_degenerate = 0;
    std::int64_t source_eigenvalues = 0;
};

// Needs at least 3 eigenvalues. Sorts a copy of the spectrum into canonical
// order first so the result is independent of input ordering; neighbor
// search compares squared distances with (distance², index) tie-breaking.
CsrSet complex_spacing_ratios(const Spectrum& s);

// Ensemble pooling: concatenation in call order plus summed counters.
void append(CsrSet& pool, const CsrSet& more);

// Equal-width histogram normalized to unit mass: density = count/(total·width).
struct Histogram1D {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<std::int64_t> counts;
    std::vector<double> density;
    std::int64_t total = 0;

    int bins() const { return static_cast<int>(counts.size()); }
    double bin_width() const { return (hi - lo) / bins(); }
    double bin_lo(int i) const { return lo + i * bin_width(); }
    double bin_hi(int i) const { return lo + (i + 1) * bin_width(); }
    double center(int i) const { return lo + (i + 0.5) * bin_width(); }
};

// Square grid over [−1,1]² (Re z horizontal, Im z vertical), unit total
// mass: density = count/(total·cell_area).
struct Histogram2D {
    int grid = 0;
    std::vector<std::int64_t> counts;  // iy*grid + ix, row (iy) major
    std::vector<double> density;
    std::int64_t total = 0;

    double cell_width() const { return 2.0 / grid; }
    double x_lo(int ix) const { return -1.0 + ix * cell_width(); }
    double y_lo(int iy) const { return -1.0 + iy * cell_width(); }
};

// Radial marginal over r = |z| ∈ [0,1] (r = 1 lands in the last bin) and
// angular marginal over θ = arg z ∈ [−π,π) (θ = π wraps to −π).
// Throws ValidationError on an empty ratio set.
Histogram1D radial_marginal(const CsrSet& csr, int bins);
Histogram1D angular_marginal(const CsrSet& csr, int bins);
Histogram2D density_2d(const CsrSet& csr, int grid);

// Scalar fingerprints of the ratio cloud. Reported tables use
// −⟨cos θ⟩, provided here alongside.
struct Signatures {
    double mean_r = 0.0;
    double stderr_r = 0.0;
    double mean_cos_theta = 0.0;
    double stderr_cos_theta = 0.0;
    std::int64_t count = 0;

    double neg_mean_cos_theta() const {
        return mean_cos_theta == 0.0 ? 0.0 : -mean_cos_theta;
    }
};

Signatures signatures(const CsrSet& csr);

// Reference curves marginals are compared against.
struct ReferenceCurves {
    Histogram1D radial;
    Histogram1D angular;
    Signatures sig;
};

// Uncorrelated (Poisson) limit, analytic: P(r) = 2r, P(θ) = 1/2π,
// ⟨r⟩ = 2/3, ⟨cos θ⟩ = 0. Densities evaluated at bin centers.
ReferenceCurves poisson_reference(int bins_r, int bins_theta);

// Fixed default seed so every run shares one cached reference ensemble.
inline constexpr std::uint64_t kGinueReferenceSeed = 0x47696E554500ULL;
inline constexpr int kGinueReferenceDim = 2000;
inline constexpr int kGinueReferenceCount = 50;

// Simulated GinUE reference: pools the spacing ratios of `count` GinUE
// matrices of dimension n (streams (seed, 1..count)) and bins them like any
// experiment. The pooled ratios are cached on disk under cache_dir keyed by
// (n, count, seed); later calls with different bins reuse the cache.
// Signature values at these defaults: ⟨r⟩ ≈ 0.7381, ⟨cos θ⟩ ≈ −0.2405.
ReferenceCurves ginue_reference(int n, int count, std::uint64_t seed,
                                int bins_r, int bins_theta,
                                const std::filesystem::path& cache_dir);

}  // namespace ginspectra
