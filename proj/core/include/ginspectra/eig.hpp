#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ginspectra/types.hpp"

namespace ginspectra {

// Where a spectrum came from; carried through CSV round-trips so a single
// realization can be re-run from its file alone.
struct SpectrumProvenance {
    std::string model;          // e.g. "H2", "MM1", "GinUE"
    std::uint64_t seed = 0;     // derived stream seed of the realization
    // Realized parameter values in a fixed order (e.g. gamma, lambda,
    // lambda1 for spin models; alpha for crossover ensembles). A parameter
    // holds one value when uniform and one value per site when
    // site-resolved.
    std::vector<std::pair<std::string, std::vector<double>>> params;
};

// Eigenvalues plus the a-posteriori accuracy certificate of the
// decomposition they came from.
struct Spectrum {
    std::vector<Complex> eigenvalues;
    // ‖Q T Q* − A‖_F / ‖A‖_F of the Schur reconstruction (or the
    // equivalent for the Hermitian path). Zero for exact short-circuits.
    double residual_bound = 0.0;
    bool certified = false;  // residual_bound <= kCertificationThreshold
    std::optional<SpectrumProvenance> provenance;
};

// Relative reconstruction residual above which a decomposition is not
// trusted by the ensemble pipeline.
inline constexpr double kCertificationThreshold = 1e-10;

struct EigOptions {
    // Radix-2 diagonal balancing before the Schur decomposition. Eigenvalues
    // are invariant under it; the residual is always certified against the
    // ORIGINAL matrix (the power-of-two similarity is undone exactly).
    bool balance = true;
};

// Full non-Hermitian eigenvalue computation with residual certificate.
// Throws ValidationError on non-square/non-finite input and NumericalError
// if the Schur iteration fails to converge (never returns silent NaNs).
Spectrum eigenvalues(const ComplexMatrix& a, const EigOptions& opts = {});

// Checks ‖A − A*‖_F <= tol · ‖A‖_F; if so, solves the Hermitian problem
// (faster, eigenvalues exactly real: imaginary parts are exact zeros) and
// returns it. Otherwise returns nullopt and the caller should use the
// general path.
std::optional<Spectrum> hermitian_fastpath(const ComplexMatrix& a,
                                           double tol = 1e-12);

// Pipeline entry point: Hermitian fast path when applicable, general Schur
// otherwise.
Spectrum compute_spectrum(const ComplexMatrix& a, const EigOptions& opts = {});

// Canonical ordering: ascending real part, ties by ascending imaginary
// part. Stable and idempotent. Certificates and provenance pass through.
Spectrum sort_spectrum(Spectrum s);

// Fraction of eigenvalues with |Im λ| < eps · max|λ|. 1.0 for an empty or
// all-zero spectrum (nothing off the real axis).
double real_fraction(const Spectrum& s, double eps = 1e-10);

}  // namespace ginspectra
