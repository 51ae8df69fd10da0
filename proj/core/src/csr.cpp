#include "ginspectra/csr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ginspectra {

namespace {

// Two smallest (squared distance, index) pairs in lexicographic order. The
// squared distance avoids the sqrt and is what the tie rule is defined on.
struct TwoNearest {
    double d1 = 0.0, d2 = 0.0;
    Eigen::Index j1 = -1, j2 = -1;
};

TwoNearest two_nearest(const std::vector<Complex>& ev, std::size_t k) {
    TwoNearest best;
    bool have1 = false, have2 = false;
    for (std::size_t j = 0; j < ev.size(); ++j) {
        if (j == k) continue;
        const double d = std::norm(ev[j] - ev[k]);
        const auto less = [&](double da, std::size_t ja, double db,
                              std::size_t jb) {
            return da != db ? da < db : ja < jb;
        };
        if (!have1 || less(d, j, best.d1, std::size_t(best.j1))) {
            if (have1) {
                best.d2 = best.d1;
                best.j2 = best.j1;
                have2 = true;
            }
            best.d1 = d;
            best.j1 = static_cast<Eigen::Index>(j);
            have1 = true;
        } else if (!have2 || less(d, j, best.d2, std::size_t(best.j2))) {
            best.d2 = d;
            best.j2 = static_cast<Eigen::Index>(j);
            have2 = true;
        }
    }
    return best;
}

int clamped_bin(double value, double lo, double width, int bins) {
    int idx = static_cast<int>(std::floor((value - lo) / width));
    if (idx < 0) idx = 0;
    if (idx >= bins) idx = bins - 1;
    return idx;
}

Histogram1D make_hist(double lo, double hi, int bins) {
    if (bins < 1) throw ValidationError("histogram needs at least one bin");
    Histogram1D h;
    h.lo = lo;
    h.hi = hi;
    h.counts.assign(bins, 0);
    h.density.assign(bins, 0.0);
    return h;
}

void finalize_density(Histogram1D& h) {
    const double w = h.bin_width();
    for (int i = 0; i < h.bins(); ++i)
        h.density[i] = h.total == 0
                           ? 0.0
                           : static_cast<double>(h.counts[i]) /
                                 (static_cast<double>(h.total) * w);
}

void require_ratios(const CsrSet& csr) {
    if (csr.ratios.empty())
        throw ValidationError("no spacing ratios to bin");
}

}  // namespace

CsrSet complex_spacing_ratios(const Spectrum& s) {
    if (s.eigenvalues.size() < 3)
        throw ValidationError("spacing ratios need at least 3 eigenvalues");
    // Canonical order first: the output is then independent of how the
    // eigensolver happened to order the spectrum.
    const std::vector<Complex> ev =
        sort_spectrum(Spectrum{s.eigenvalues, 0.0, false, {}}).eigenvalues;

    CsrSet out;
    out.source_eigenvalues = static_cast<std::int64_t>(ev.size());
    out.ratios.reserve(ev.size());
    for (std::size_t k = 0; k < ev.size(); ++k) {
        const TwoNearest nn = two_nearest(ev, k);
        if (nn.d2 == 0.0) {
            // At least triply degenerate point: the ratio is undefined.
            ++out.skipped_degenerate;
            continue;
        }
        if (nn.d1 == 0.0) {
            // Exactly degenerate nearest neighbor: z = 0, kept.
            out.ratios.push_back(Complex(0.0, 0.0));
            continue;
        }
        out.ratios.push_back((ev[nn.j1] - ev[k]) / (ev[nn.j2] - ev[k]));
    }
    return out;
}

void append(CsrSet& pool, const CsrSet& more) {
    pool.ratios.insert(pool.ratios.end(), more.ratios.begin(),
                       more.ratios.end());
    pool.skipped_degenerate += more.skipped_degenerate;
    pool.source_eigenvalues += more.source_eigenvalues;
}

Histogram1D radial_marginal(const CsrSet& csr, int bins) {
    require_ratios(csr);
    Histogram1D h = make_hist(0.0, 1.0, bins);
    const double w = h.bin_width();
    for (const Complex& z : csr.ratios) {
        // |z| <= 1 up to division rounding; r = 1 (or a stray ulp above)
        // lands in the last bin.
        h.counts[clamped_bin(std::abs(z), 0.0, w, bins)] += 1;
    }
    h.total = static_cast<std::int64_t>(csr.ratios.size());
    finalize_density(h);
    return h;
}

Histogram1D angular_marginal(const CsrSet& csr, int bins) {
    require_ratios(csr);
    const double pi = std::numbers::pi;
    Histogram1D h = make_hist(-pi, pi, bins);
    const double w = h.bin_width();
    for (const Complex& z : csr.ratios) {
        double theta = std::arg(z);  // (−π, π]; arg(0) = 0 by convention
        if (theta == pi) theta = -pi;  // wrap the branch point into [−π, π)
        h.counts[clamped_bin(theta, -pi, w, bins)] += 1;
    }
    h.total = static_cast<std::int64_t>(csr.ratios.size());
    finalize_density(h);
    return h;
}

Histogram2D density_2d(const CsrSet& csr, int grid) {
    require_ratios(csr);
    if (grid < 1) throw ValidationError("histogram needs at least one bin");
    Histogram2D h;
    h.grid = grid;
    h.counts.assign(static_cast<std::size_t>(grid) * grid, 0);
    h.density.assign(h.counts.size(), 0.0);
    const double w = h.cell_width();
    for (const Complex& z : csr.ratios) {
        const int ix = clamped_bin(z.real(), -1.0, w, grid);
        const int iy = clamped_bin(z.imag(), -1.0, w, grid);
        h.counts[static_cast<std::size_t>(iy) * grid + ix] += 1;
    }
    h.total = static_cast<std::int64_t>(csr.ratios.size());
    const double area = w * w;
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        h.density[i] = static_cast<double>(h.counts[i]) /
                       (static_cast<double>(h.total) * area);
    return h;
}

Signatures signatures(const CsrSet& csr) {
    require_ratios(csr);
    Signatures out;
    out.count = static_cast<std::int64_t>(csr.ratios.size());
    const double n = static_cast<double>(out.count);
    double sum_r = 0.0, sum_c = 0.0;
    for (const Complex& z : csr.ratios) {
        sum_r += std::abs(z);
        sum_c += std::cos(std::arg(z));
    }
    out.mean_r = sum_r / n;
    out.mean_cos_theta = sum_c / n;
    if (out.count > 1) {
        double var_r = 0.0, var_c = 0.0;
        for (const Complex& z : csr.ratios) {
            const double dr = std::abs(z) - out.mean_r;
            const double dc = std::cos(std::arg(z)) - out.mean_cos_theta;
            var_r += dr * dr;
            var_c += dc * dc;
        }
        var_r /= n - 1.0;
        var_c /= n - 1.0;
        out.stderr_r = std::sqrt(var_r / n);
        out.stderr_cos_theta = std::sqrt(var_c / n);
    }
    return out;
}

ReferenceCurves poisson_reference(int bins_r, int bins_theta) {
    ReferenceCurves ref;
    ref.radial = make_hist(0.0, 1.0, bins_r);
    for (int i = 0; i < bins_r; ++i)
        ref.radial.density[i] = 2.0 * ref.radial.center(i);
    const double pi = std::numbers::pi;
    ref.angular = make_hist(-pi, pi, bins_theta);
    for (int i = 0; i < bins_theta; ++i)
        ref.angular.density[i] = 1.0 / (2.0 * pi);
    ref.sig.mean_r = 2.0 / 3.0;
    ref.sig.mean_cos_theta = 0.0;
    return ref;
}

}  // namespace ginspectra
