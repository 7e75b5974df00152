#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nasinit/clustering.hpp"
#include "nasinit/encoding.hpp"
#include "nasinit/metrics.hpp"
#include "nasinit/reduction.hpp"

namespace nasinit {

/// One cell of a calibration curve. `metrics` is empty when the cell failed;
/// `error` then says why.
struct SweepRow {
    ReductionMethod method = ReductionMethod::TSVD;
    EncodingKind encoding = EncodingKind::Original;
    std::size_t n_components = 0;
    std::size_t n_clusters = 0;
    std::optional<MetricReport> metrics;
    std::string error;
};

/// Reduce with each method to each component count, cluster with `params`
/// (k-means, n_clusters = 10 by default) and score. Rows are ordered by
/// method, then component count.
std::vector<SweepRow> sweep_components(const Matrix& features, EncodingKind encoding,
                                       std::span<const ReductionMethod> methods,
                                       std::span<const std::size_t> component_counts,
                                       const ClusterParams& params, std::size_t threads = 1);

/// Clusters an already reduced matrix with each k in `k_list`.
std::vector<SweepRow> sweep_cluster_counts(const ReducedMatrix& reduced, EncodingKind encoding,
                                           std::span<const std::size_t> k_list,
                                           const ClusterParams& params, std::size_t threads = 1);

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows);

/// c0, c1, label rows for external scatter plots. Uses the first two columns.
void write_scatter_csv(std::ostream& os, const Matrix& points, std::span<const int> labels);

} // namespace nasinit
