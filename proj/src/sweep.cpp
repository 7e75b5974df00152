#include "nasinit/sweep.hpp"

#include <ostream>

#include "nasinit/csv.hpp"
#include "nasinit/error.hpp"
#include "nasinit/parallel.hpp"

namespace nasinit {

namespace {

void score(SweepRow& row, const Matrix& points, const ClusterParams& params) {
    try {
        const ClusterModel model = fit_clusters(points, params);
        row.metrics = evaluate_metrics(points, model.labels);
    } catch (const Error& e) {
        row.error = e.what();
    }
}

} // namespace

std::vector<SweepRow> sweep_components(const Matrix& features, EncodingKind encoding,
                                       std::span<const ReductionMethod> methods,
                                       std::span<const std::size_t> component_counts,
                                       const ClusterParams& params, std::size_t threads) {
    std::vector<SweepRow> rows;
    for (auto method : methods)
        for (auto k : component_counts) {
            SweepRow r;
            r.method = method;
            r.encoding = encoding;
            r.n_components = k;
            r.n_clusters = params.n_clusters;
            rows.push_back(r);
        }
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        SweepRow& row = rows[i];
        try {
            const auto model = fit_reduction(row.method, features, row.n_components);
            score(row, transform(model, features).points, params);
        } catch (const Error& e) {
            row.error = e.what();
        }
    });
    return rows;
}

std::vector<SweepRow> sweep_cluster_counts(const ReducedMatrix& reduced, EncodingKind encoding,
                                           std::span<const std::size_t> k_list,
                                           const ClusterParams& params, std::size_t threads) {
    std::vector<SweepRow> rows;
    for (auto k : k_list) {
        SweepRow r;
        r.method = reduced.method;
        r.encoding = encoding;
        r.n_components = reduced.k;
        r.n_clusters = k;
        rows.push_back(r);
    }
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        ClusterParams p = params;
        p.n_clusters = rows[i].n_clusters;
        score(rows[i], reduced.points, p);
    });
    return rows;
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
    os << "method,encoding,n_components,n_clusters,silhouette,calinski_harabasz,davies_bouldin\n";
    for (const auto& r : rows) {
        os << to_string(r.method) << ',' << to_string(r.encoding) << ',' << r.n_components << ','
           << r.n_clusters << ',';
        if (r.metrics)
            os << format_double(r.metrics->silhouette) << ','
               << format_double(r.metrics->calinski_harabasz) << ','
               << format_double(r.metrics->davies_bouldin);
        else
            os << "NA,NA,NA";
        os << '\n';
    }
}

void write_scatter_csv(std::ostream& os, const Matrix& points, std::span<const int> labels) {
    if (points.cols() < 2) throw ParameterError("scatter export needs at least 2 columns");
    os << "c0,c1,label\n";
    for (std::size_t i = 0; i < points.rows(); ++i)
        os << format_double(points(i, 0)) << ',' << format_double(points(i, 1)) << ',' << labels[i]
           << '\n';
}

} // namespace nasinit
