#pragma once

#include <span>

#include "nasinit/matrix.hpp"

namespace nasinit {

/// The three internal validity indices. Calinski-Harabasz and Davies-Bouldin
/// use +infinity as the sentinel for their degenerate cases.
struct MetricReport {
    double silhouette = 0.0;
    double calinski_harabasz = 0.0;
    double davies_bouldin = 0.0;
};

/// Mean silhouette over non-noise points; singleton clusters score 0.
/// Throws UndefinedMetricError with fewer than two clusters.
double silhouette(const Matrix& x, std::span<const int> labels);

/// Throws UndefinedMetricError unless 2 <= k < N. Zero within-cluster
/// dispersion yields +infinity.
double calinski_harabasz(const Matrix& x, std::span<const int> labels);

/// Throws UndefinedMetricError when k < 2. Coincident centroids yield +infinity.
double davies_bouldin(const Matrix& x, std::span<const int> labels);

MetricReport evaluate_metrics(const Matrix& x, std::span<const int> labels);

} // namespace nasinit
