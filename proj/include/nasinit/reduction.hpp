#pragma once

#include <string_view>
#include <vector>

#include "nasinit/matrix.hpp"

namespace nasinit {

enum class ReductionMethod { PCA, TSVD };

std::string_view to_string(ReductionMethod m);
ReductionMethod parse_reduction(std::string_view name);

/// A fitted linear projection onto k orthonormal directions.
///
/// Both methods are solved deterministically through the eigen-decomposition
/// of the D x D Gram matrix (centered for PCA, raw for TSVD). Each component
/// is sign-normalized so its largest-magnitude entry is positive; this makes
/// fits bit-stable on identical input.
struct ReductionModel {
    ReductionMethod method = ReductionMethod::PCA;
    Matrix components;                   // k x D, orthonormal rows
    std::vector<double> column_means;    // D entries for PCA, empty for TSVD
    std::vector<double> singular_values; // k, nonincreasing
    std::vector<double> explained_variance;
    /// PCA: share of total variance. TSVD: share of the squared Frobenius
    /// norm, sigma_i^2 / ||X||_F^2. Nonincreasing in both cases.
    std::vector<double> explained_variance_ratio;

    std::size_t n_components() const noexcept { return components.rows(); }
    std::size_t n_features() const noexcept { return components.cols(); }
};

struct ReducedMatrix {
    Matrix points; // N x k
    ReductionMethod method = ReductionMethod::PCA;
    std::size_t k = 0;
};

/// Requires 1 <= k <= min(N-1, D); throws ParameterError otherwise.
ReductionModel fit_pca(const Matrix& x, std::size_t k);

/// Requires 1 <= k <= min(N, D); throws ParameterError otherwise.
ReductionModel fit_truncated_svd(const Matrix& x, std::size_t k);

ReductionModel fit_reduction(ReductionMethod method, const Matrix& x, std::size_t k);

/// Throws ParameterError when x has a different column count than the model.
ReducedMatrix transform(const ReductionModel& model, const Matrix& x);

/// Maps reduced coordinates back to feature space (exact when k = D).
Matrix inverse_transform(const ReductionModel& model, const Matrix& reduced);

} // namespace nasinit
