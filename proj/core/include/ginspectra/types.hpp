#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ginspectra {

using Complex = std::complex<double>;

// Dense square complex matrix, column-major. Dimensions in this package are
// small enough (<= a few thousand) that dense storage is always the right
// call; sparsity is never exploited.
using ComplexMatrix = Eigen::MatrixXcd;

// Input or configuration rejected before any numerics ran. CLI maps this to
// exit code 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numerical kernel failed (non-convergence, non-finite data mid-pipeline).
// CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline bool is_finite(const ComplexMatrix& a) {
    return a.allFinite();
}

}  // namespace ginspectra
