#pragma once

#include "ginspectra/rng.hpp"
#include "ginspectra/types.hpp"

namespace ginspectra {

// Dense Ginibre samples. Entries are raw draws (no 1/√N rescaling): spacing
// ratios are scale-invariant, so the pipeline never needs the normalized
// convention. Fill order is column-major (storage order), real part before
// imaginary part — part of the reproducibility contract.

// Independent complex Gaussian entries: (a + ib)/1, a,b ~ N(0,1).
ComplexMatrix sample_ginue(int n, RngStream& rng);

// Independent real Gaussian entries (imaginary parts exactly zero).
ComplexMatrix sample_ginoe(int n, RngStream& rng);

// Diagonal matrices with iid entries: uncorrelated spectra.
enum class PoissonKind {
    Real1D,     // real N(0,1) diagonal
    Complex2D,  // complex diagonal, independent N(0,1) parts
};

ComplexMatrix sample_poisson_diagonal(int n, PoissonKind kind, RngStream& rng);

// Crossover family between an uncorrelated diagonal and GinUE:
//   H(α) = (H0 + α V) / √(1+α²)
// MM1: H0 real diagonal, MM2: H0 complex diagonal; V is GinUE. H0 is drawn
// before V, so α = 0 reproduces the pure diagonal draw exactly.
enum class MatrixModel { MM1, MM2 };

std::string to_string(MatrixModel m);

struct CrossoverSpec {
    MatrixModel model = MatrixModel::MM1;
    int n = 0;
    double alpha = 0.0;
};

// Rejects n outside [2, 8192] and negative or non-finite alpha.
void validate(const CrossoverSpec& spec);

ComplexMatrix sample_crossover(const CrossoverSpec& spec, RngStream& rng);

}  // namespace ginspectra
