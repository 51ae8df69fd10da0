#include "ginspectra/spin_ops.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

namespace ginspectra {

namespace {

constexpr int kMinLength = 2;
constexpr int kMaxLength = 12;

const Complex kImag(0.0, 1.0);

ComplexMatrix pauli(Axis axis) {
    ComplexMatrix m(2, 2);
    switch (axis) {
        case Axis::X:
            m << 0, 1, 1, 0;
            break;
        case Axis::Y:
            m << 0, -kImag, kImag, 0;
            break;
        case Axis::Z:
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
    return out;
}

// ⊗ product over the chain with the given Pauli factors at 1-based sites
// (identity elsewhere). Site 1 is the leftmost factor.
ComplexMatrix pauli_string(int length,
                           const std::vector<std::pair<int, Axis>>& factors) {
    auto factor_at = [&](int site) -> ComplexMatrix {
        for (const auto& [s, a] : factors)
            if (s == site) return pauli(a);
        return ComplexMatrix::Identity(2, 2);
    };
    ComplexMatrix m = factor_at(1);
    for (int site = 2; site <= length; ++site) m = kron(m, factor_at(site));
    return m;
}

void check_length(int length) {
    if (length < kMinLength || length > kMaxLength)
        throw ValidationError("chain length " + std::to_string(length) +
                              " outside supported range [" +
                              std::to_string(kMinLength) + ", " +
                              std::to_string(kMaxLength) + "]");
}

// A used coupling may hold no values (exact zeros), one shared value, or one
// value per site; anything else is a caller bug. Rejects non-finite entries.
const std::vector<double>& check_coupling(const std::vector<double>& v,
                                          const char* name, int length) {
    if (!v.empty() && v.size() != 1 &&
        v.size() != static_cast<std::size_t>(length))
        throw ValidationError(std::string("coupling ") + name + " has " +
                              std::to_string(v.size()) +
                              " values; expected 0, 1, or " +
                              std::to_string(length));
    for (double x : v)
        if (!std::isfinite(x))
            throw ValidationError(std::string("coupling ") + name +
                                  " has a non-finite value");
    return v;
}

double value_at(const std::vector<double>& v, int j) {  // j is 0-based
    if (v.empty()) return 0.0;
    return v.size() == 1 ? v[0] : v[static_cast<std::size_t>(j)];
}

}  // namespace

std::string to_string(SpinModel m) {
    switch (m) {
        case SpinModel::H0: return "H0";
        case SpinModel::H1: return "H1";
        case SpinModel::H2: return "H2";
        case SpinModel::H3: return "H3";
        case SpinModel::Him: return "Him";
    }
    return "?";
}

SpinModel spin_model_from_string(const std::string& name) {
    if (name == "H0") return SpinModel::H0;
    if (name == "H1") return SpinModel::H1;
    if (name == "H2") return SpinModel::H2;
    if (name == "H3") return SpinModel::H3;
    if (name == "Him") return SpinModel::Him;
    throw ValidationError("unknown spin model '" + name + "'");
}

bool model_uses_param(SpinModel model, const std::string& name) {
    const bool gamma = name == "gamma";
    const bool lambda = name == "lambda";
    const bool lambda1 = name == "lambda1";
    if (!gamma && !lambda && !lambda1)
        throw ValidationError("unknown parameter '" + name + "'");
    switch (model) {
        case SpinModel::H0: return lambda;
        case SpinModel::H1: return gamma || lambda;
        case SpinModel::H2:
        case SpinModel::H3: return true;
        case SpinModel::Him: return gamma;
    }
    return false;
}

void validate(const SpinChainSpec& spec) {
    check_length(spec.length);
    // A pinned value on a coupling the model does not have is always a
    // mistake; an untouched (default Gaussian) source is simply unused.
    const std::pair<const char*, const ParamSource*> params[] = {
        {"gamma", &spec.gamma},
        {"lambda", &spec.lambda},
        {"lambda1", &spec.lambda1},
    };
    for (const auto& [name, src] : params) {
        if (!model_uses_param(spec.model, name) &&
            src->kind == ParamSource::Kind::Fixed)
            throw ValidationError("model " + to_string(spec.model) +
                                  " does not use parameter " + name);
        if (src->kind == ParamSource::Kind::Fixed &&
            !std::isfinite(src->value))
            throw ValidationError(std::string("parameter ") + name +
                                  " must be finite");
    }
}

RealizedParams realize_params(const SpinChainSpec& spec, RngStream& rng) {
    validate(spec);
    RealizedParams out;
    out.seed = rng.derived_seed();
    // Fixed draw order gamma, lambda, lambda1, sites ascending within each
    // coupling; Fixed sources and couplings absent from the model consume no
    // randomness. Gaussian couplings are site-resolved: a fresh N(0,1) per
    // site (per bond for gamma).
    auto realize = [&](const char* name,
                       const ParamSource& src) -> std::vector<double> {
        if (!model_uses_param(spec.model, name)) return {};
        if (src.kind == ParamSource::Kind::Fixed) return {src.value};
        std::vector<double> v(static_cast<std::size_t>(spec.length));
        for (double& x : v) x = rng.gauss();
        return v;
    };
    out.gamma = realize("gamma", spec.gamma);
    out.lambda = realize("lambda", spec.lambda);
    out.lambda1 = realize("lambda1", spec.lambda1);
    return out;
}

ComplexMatrix site_operator(int length, int site, Axis axis) {
    if (length < 1 || length > kMaxLength)
        throw ValidationError("chain length " + std::to_string(length) +
                              " outside supported range [1, " +
                              std::to_string(kMaxLength) + "]");
    if (site < 1 || site > length)
        throw ValidationError("site " + std::to_string(site) +
                              " outside chain of length " +
                              std::to_string(length));
    return pauli_string(length, {{site, axis}});
}

ComplexMatrix build_hamiltonian(const SpinChainSpec& spec,
                                const RealizedParams& p) {
    validate(spec);
    const int length = spec.length;
    static const std::vector<double> kNone;
    auto coupling = [&](const char* name,
                        const std::vector<double>& v) -> const auto& {
        return model_uses_param(spec.model, name)
                   ? check_coupling(v, name, length)
                   : kNone;
    };
    const std::vector<double>& gv = coupling("gamma", p.gamma);
    const std::vector<double>& lv = coupling("lambda", p.lambda);
    const std::vector<double>& l1v = coupling("lambda1", p.lambda1);

    // Direct assembly in the computational basis. Site j (1-based, leftmost
    // Kronecker factor first) owns bit length−j of the basis index; bit 0
    // means spin up (σz = +1). σxσx flips both bond bits; σyσy does the same
    // with the sign table of σy's ±i factors; σz is the ± diagonal; σx flips
    // one bit. Every model runs the identical loop with its per-site
    // coefficients — halvings are exact, so γ = 0 reproduces H0's
    // coefficients bit-for-bit, and the diagonal of basis state b is the
    // exact negation of its all-flipped partner's.
    const Eigen::Index dim = Eigen::Index(1) << length;
    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
    for (int j = 1; j <= length; ++j) {
        const int jp = (j % length) + 1;
        const std::uint64_t mj = 1ULL << (length - j);
        const std::uint64_t mjp = 1ULL << (length - jp);
        const double hg = value_at(gv, j - 1) / 2.0;
        const double l = value_at(lv, j - 1);
        const double l1 = value_at(l1v, j - 1);
        Complex cxx(0.5, hg), cyy(0.5, -hg), cz(l, 0.0);
        const Complex cx(l1, 0.0);
        switch (spec.model) {
            case SpinModel::H0:
            case SpinModel::H1:
            case SpinModel::H2:
                break;
            case SpinModel::H3:
                cz = Complex(0.0, l);
                break;
            case SpinModel::Him:
                cxx = Complex(0.0, hg);
                cyy = Complex(0.0, -hg);
                break;
        }
        const std::uint64_t mb = mj | mjp;  // L = 2 repeats its single bond
        for (Eigen::Index b = 0; b < dim; ++b) {
            const std::uint64_t ub = static_cast<std::uint64_t>(b);
            const Eigen::Index bond = static_cast<Eigen::Index>(ub ^ mb);
            h(bond, b) += cxx;
            const bool same = ((ub & mj) != 0) == ((ub & mjp) != 0);
            h(bond, b) += same ? -cyy : cyy;
            h(b, b) += ((ub & mj) != 0) ? -cz : cz;
            h(static_cast<Eigen::Index>(ub ^ mj), b) += cx;
        }
    }
    return h;
}

namespace {

// Diagonal of R = ⊗_j (1/√2) diag(1−i, 1+i) without forming the matrix.
Eigen::VectorXcd rotation_diagonal(int length) {
    const double s = 1.0 / std::sqrt(2.0);
    const Complex lo(s, -s), hi(s, s);
    Eigen::VectorXcd d(1);
    d(0) = Complex(1.0, 0.0);
    for (int j = 0; j < length; ++j) {
        Eigen::VectorXcd next(d.size() * 2);
        for (Eigen::Index i = 0; i < d.size(); ++i) {
            next(2 * i) = d(i) * lo;
            next(2 * i + 1) = d(i) * hi;
        }
        d.swap(next);
    }
    return d;
}

}  // namespace

ComplexMatrix rotation_operator(int length) {
    if (length < 1 || length > kMaxLength)
        throw ValidationError("chain length " + std::to_string(length) +
                              " outside supported range [1, " +
                              std::to_string(kMaxLength) + "]");
    return rotation_diagonal(length).asDiagonal();
}

SymmetryCheck rt_symmetry_check(const ComplexMatrix& h, double tol) {
    if (h.rows() != h.cols() || h.rows() == 0)
        throw ValidationError("symmetry check needs a square matrix");
    int length = 0;
    for (Eigen::Index dim = h.rows(); dim > 1; dim >>= 1) {
        if (dim & 1)
            throw ValidationError(
                "matrix dimension is not a power of two; not a spin chain");
        ++length;
    }
    if (length < 1 || length > kMaxLength)
        throw ValidationError("matrix dimension outside supported chain sizes");

    // R is diagonal unitary, so (R conj(H) R⁻¹)_ij = r_i conj(h_ij) conj(r_j)
    // — no dense products needed.
    const Eigen::VectorXcd r = rotation_diagonal(length);
    const double scale = h.norm();
    SymmetryCheck out;
    if (scale == 0.0) {
        out.pass = true;
        out.defect = 0.0;
        return out;
    }
    double sumsq = 0.0;
    for (Eigen::Index j = 0; j < h.cols(); ++j)
        for (Eigen::Index i = 0; i < h.rows(); ++i) {
            const Complex t = r(i) * std::conj(h(i, j)) * std::conj(r(j));
            sumsq += std::norm(t - h(i, j));
        }
    out.defect = std::sqrt(sumsq) / scale;
    out.pass = out.defect <= tol;
    return out;
}

PairingCheck conjugation_pairing_check(const Spectrum& s, double tol) {
    PairingCheck out;
    const auto& ev = s.eigenvalues;
    double radius = 0.0;
    for (const Complex& v : ev) radius = std::max(radius, std::abs(v));
    if (radius == 0.0) {
        out.pass = true;
        return out;
    }
    const double eps = tol * radius;
    std::vector<std::size_t> open;  // indices awaiting a conjugate partner
    for (std::size_t k = 0; k < ev.size(); ++k) {
        if (std::abs(ev[k].imag()) <= eps) continue;  // real: self-paired
        open.push_back(k);
    }
    std::vector<bool> used(ev.size(), false);
    std::int64_t unmatched = 0;
    for (std::size_t k : open) {
        if (used[k]) continue;
        const Complex want = std::conj(ev[k]);
        bool found = false;
        for (std::size_t j : open) {
            if (j == k || used[j]) continue;
            if (std::abs(ev[j] - want) <= eps) {
                used[k] = used[j] = true;
                found = true;
                break;
            }
        }
        if (!found) ++unmatched;
    }
    out.unmatched = unmatched;
    out.pass = unmatched == 0;
    return out;
}

}  // namespace ginspectra
