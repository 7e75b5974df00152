#pragma once

#include <vector>

#include "nasinit/matrix.hpp"

namespace nasinit::linalg {

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Eigenvalues are sorted descending (stable on ties); `vectors` holds the
/// matching unit eigenvectors as ROWS.
struct SymmetricEigen {
    std::vector<double> values;
    Matrix vectors;
};

SymmetricEigen symmetric_eigen(const Matrix& a);

/// Lower-triangular Cholesky factor; returns false when `a` is not
/// numerically positive definite.
bool cholesky(const Matrix& a, Matrix& lower);

/// log|A| from a Cholesky factor.
double log_det_from_cholesky(const Matrix& lower);

/// A^{-1} from a Cholesky factor.
Matrix inverse_from_cholesky(const Matrix& lower);

} // namespace nasinit::linalg
