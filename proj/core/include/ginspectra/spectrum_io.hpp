#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "ginspectra/csr.hpp"
#include "ginspectra/eig.hpp"

namespace ginspectra {

// Doubles are emitted with 17 significant digits (%.17g): enough for exact
// binary round-trip.
std::string format_g17(double v);

// Locale-independent strict double parse of the whole string; throws
// ValidationError on anything malformed.
double parse_double(const std::string& text);

// Spectrum CSV layout:
//   # model=H2
//   # seed=1234567890
//   # params=gamma=...;lambda=...;lambda1=...
//   # residual=...
//   re,im
//   <re>,<im>
// Header lines other than the column row are present only when the spectrum
// carries provenance. Values round-trip exactly.
void write_spectrum(const std::filesystem::path& file, const Spectrum& s);

// Strict parser: malformed rows, bad headers and empty eigenvalue sections
// raise ValidationError naming the file and line.
Spectrum read_spectrum(const std::filesystem::path& file);

// Which analytic/simulated reference columns marginal CSVs carry.
enum class ReferenceChoice { None, Poisson, Ginue, Both };

std::string to_string(ReferenceChoice r);
ReferenceChoice reference_from_string(const std::string& name);

// Marginal CSV: bin_lo,bin_hi,density[,reference_poisson][,reference_ginue].
// Reference columns are the matching marginal of the reference curves,
// evaluated on the same bins.
void write_marginal_csv(const std::filesystem::path& file,
                        const Histogram1D& h, ReferenceChoice ref,
                        const Histogram1D* poisson, const Histogram1D* ginue);

// 2-D density CSV: x_lo,x_hi,y_lo,y_hi,density (row-major in y).
void write_density2d_csv(const std::filesystem::path& file,
                         const Histogram2D& h);

}  // namespace ginspectra
