#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ginspectra/eig.hpp"
#include "ginspectra/rng.hpp"
#include "ginspectra/types.hpp"

namespace ginspectra {

// Periodic spin-1/2 chains on L sites, Hilbert space dimension 2^L.
// Site 1 is the leftmost Kronecker factor; the bond sum runs j = 1..L with
// site L+1 identified with site 1 (so L = 2 double-counts its single bond,
// exactly as the formulas read).
//
//   H0  = 1/2 Σ_j [ σx_j σx_{j+1} + σy_j σy_{j+1} + 2λ_j σz_j ]    (Hermitian)
//   H1  = Σ_j [ (1+iγ_j)/2 σx σx + (1−iγ_j)/2 σy σy + λ_j σz ]
//   Him = i/2 Σ_j γ_j [ σx σx − σy σy ]                      (skew-Hermitian)
//   H2  = H1 + Σ_j λ1_j σx_j
//   H3  = Σ_j [ (1+iγ_j)/2 σx σx + (1−iγ_j)/2 σy σy + iλ_j σz + λ1_j σx ]
//
// A pinned coupling is uniform across the chain; a Gaussian-sourced coupling
// is site-resolved (independent N(0,1) per site, per bond for γ), modelling
// a spatially inhomogeneous random field. Uniform random couplings would
// leave the translation/reflection symmetry of the ring intact and force
// exact two-fold degeneracies on most of the spectrum, which wipes out the
// spacing-ratio statistics these models are built to probe.
enum class SpinModel { H0, H1, H2, H3, Him };

std::string to_string(SpinModel m);
SpinModel spin_model_from_string(const std::string& name);

enum class Axis { X, Y, Z };

// A coupling is either pinned to a value (uniform across the chain) or drawn
// fresh from N(0,1) per site per realization.
struct ParamSource {
    enum class Kind { Fixed, GaussianStandard };
    Kind kind = Kind::GaussianStandard;
    double value = 0.0;

    static ParamSource fixed(double v) { return {Kind::Fixed, v}; }
    static ParamSource gaussian() { return {Kind::GaussianStandard, 0.0}; }
};

struct SpinChainSpec {
    SpinModel model = SpinModel::H1;
    int length = 0;  // sites, 2..12
    ParamSource gamma;
    ParamSource lambda;
    ParamSource lambda1;
};

// Rejects out-of-range lengths and parameters the model does not use
// (e.g. lambda1 for H1, or any of lambda/lambda1 for Him).
void validate(const SpinChainSpec& spec);

// True if `spec.model` has the given coupling in its formula.
bool model_uses_param(SpinModel model, const std::string& name);

// Coupling values of one realization, plus the stream seed they came from.
// Each coupling the model uses holds either a single value (uniform across
// the chain: every Fixed source) or one value per site (Gaussian sources;
// gamma[j-1] sits on the bond joining sites j and j+1). Couplings the model
// does not use stay empty and are ignored.
struct RealizedParams {
    std::vector<double> gamma;
    std::vector<double> lambda;
    std::vector<double> lambda1;
    std::uint64_t seed = 0;
};

// Draws Gaussian sources in the fixed order gamma, lambda, lambda1 (only
// those the model uses), sites ascending within each coupling; Fixed values
// pass through untouched as single-entry (uniform) couplings.
RealizedParams realize_params(const SpinChainSpec& spec, RngStream& rng);

// σ_axis acting on `site` (1-based) of an L-site chain: Kronecker product of
// identities with one Pauli factor. dim 2^L.
ComplexMatrix site_operator(int length, int site, Axis axis);

// Assembles H directly in the computational basis (bit flips and diagonal
// signs per basis state — no Kronecker products). A used coupling may hold
// one value (broadcast to all sites), length values (site-resolved), or be
// empty (exact zeros). All models run the identical assembly loop, so e.g.
// H1 with γ = 0 equals H0 bit-for-bit when the λ values match.
ComplexMatrix build_hamiltonian(const SpinChainSpec& spec,
                                const RealizedParams& p);

// Diagonal unitary R = ⊗_j (1/√2) diag(1−i, 1+i); conjugation by R maps
// σx -> σy, σy -> −σx sitewise.
ComplexMatrix rotation_operator(int length);

struct SymmetryCheck {
    bool pass = false;
    double defect = 0.0;  // ‖R conj(H) R⁻¹ − H‖_F / ‖H‖_F
};

// Tests invariance of H under the antiunitary R·K (K = entrywise complex
// conjugation). Models without the transverse field (H0, H1, Him) pass;
// a nonzero λ1 field breaks it.
SymmetryCheck rt_symmetry_check(const ComplexMatrix& h, double tol = 1e-10);

struct PairingCheck {
    bool pass = false;
    std::int64_t unmatched = 0;  // eigenvalues with no conjugate partner
};

// Greedily matches each eigenvalue with |Im λ| above tol·scale to a partner
// within tol·scale of its conjugate (scale = spectral radius). Spectra of
// RT-symmetric Hamiltonians pass: eigenvalues are real or in conjugate
// pairs.
PairingCheck conjugation_pairing_check(const Spectrum& s, double tol = 1e-8);

}  // namespace ginspectra
