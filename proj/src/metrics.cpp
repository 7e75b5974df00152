#include "nasinit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "nasinit/clustering.hpp"
#include "nasinit/error.hpp"

namespace nasinit {

namespace {

// Non-noise rows relabelled to 0..k-1 in order of first appearance of the
// original label value (sorted), plus per-cluster sizes.
struct Compact {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> label;
    std::vector<std::size_t> size;
};

Compact compact(const Matrix& x, std::span<const int> labels) {
    if (labels.size() != x.rows()) throw ParameterError("label count does not match row count");
    std::map<int, std::size_t> ids;
    for (int l : labels)
        if (l != kNoise) ids.emplace(l, 0);
    std::size_t next = 0;
    for (auto& [l, id] : ids) id = next++;

    Compact c;
    c.size.assign(ids.size(), 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == kNoise) continue;
        c.rows.push_back(i);
        c.label.push_back(ids[labels[i]]);
        ++c.size[c.label.back()];
    }
    return c;
}

Matrix centroids(const Matrix& x, const Compact& c) {
    Matrix m(c.size.size(), x.cols());
    for (std::size_t t = 0; t < c.rows.size(); ++t) {
        auto row = x.row(c.rows[t]);
        for (std::size_t j = 0; j < x.cols(); ++j) m(c.label[t], j) += row[j];
    }
    for (std::size_t k = 0; k < c.size.size(); ++k)
        for (std::size_t j = 0; j < x.cols(); ++j) m(k, j) /= static_cast<double>(c.size[k]);
    return m;
}

} // namespace

double silhouette(const Matrix& x, std::span<const int> labels) {
    const Compact c = compact(x, labels);
    const std::size_t k = c.size.size();
    if (k < 2) throw UndefinedMetricError("silhouette needs at least two clusters");

    const std::size_t n = c.rows.size();
    std::vector<double> sums(k);
    double total = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        std::fill(sums.begin(), sums.end(), 0.0);
        auto xi = x.row(c.rows[t]);
        for (std::size_t u = 0; u < n; ++u)
            sums[c.label[u]] += std::sqrt(squared_distance(xi, x.row(c.rows[u])));
        const std::size_t own = c.label[t];
        if (c.size[own] < 2) continue; // singleton convention: contributes 0
        const double a = sums[own] / static_cast<double>(c.size[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t q = 0; q < k; ++q)
            if (q != own) b = std::min(b, sums[q] / static_cast<double>(c.size[q]));
        const double denom = std::max(a, b);
        if (denom > 0.0) total += (b - a) / denom;
    }
    return total / static_cast<double>(n);
}

double calinski_harabasz(const Matrix& x, std::span<const int> labels) {
    const Compact c = compact(x, labels);
    const std::size_t k = c.size.size();
    const std::size_t n = c.rows.size();
    if (k < 2 || k >= n)
        throw UndefinedMetricError("Calinski-Harabasz needs 2 <= k < N (k=" + std::to_string(k) +
                                   ", N=" + std::to_string(n) + ")");
    const Matrix cent = centroids(x, c);
    std::vector<double> overall(x.cols(), 0.0);
    for (std::size_t r : c.rows)
        for (std::size_t j = 0; j < x.cols(); ++j) overall[j] += x(r, j);
    for (double& v : overall) v /= static_cast<double>(n);

    double between = 0.0, within = 0.0;
    for (std::size_t q = 0; q < k; ++q)
        between += static_cast<double>(c.size[q]) * squared_distance(cent.row(q), overall);
    for (std::size_t t = 0; t < n; ++t) within += squared_distance(x.row(c.rows[t]), cent.row(c.label[t]));
    if (within == 0.0) return std::numeric_limits<double>::infinity();
    return (between / static_cast<double>(k - 1)) / (within / static_cast<double>(n - k));
}

double davies_bouldin(const Matrix& x, std::span<const int> labels) {
    const Compact c = compact(x, labels);
    const std::size_t k = c.size.size();
    if (k < 2) throw UndefinedMetricError("Davies-Bouldin needs at least two clusters");
    const Matrix cent = centroids(x, c);

    std::vector<double> spread(k, 0.0);
    for (std::size_t t = 0; t < c.rows.size(); ++t)
        spread[c.label[t]] += std::sqrt(squared_distance(x.row(c.rows[t]), cent.row(c.label[t])));
    for (std::size_t q = 0; q < k; ++q) spread[q] /= static_cast<double>(c.size[q]);

    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double worst = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            const double d = std::sqrt(squared_distance(cent.row(i), cent.row(j)));
            if (d == 0.0) return std::numeric_limits<double>::infinity();
            worst = std::max(worst, (spread[i] + spread[j]) / d);
        }
        total += worst;
    }
    return total / static_cast<double>(k);
}

MetricReport evaluate_metrics(const Matrix& x, std::span<const int> labels) {
    return {silhouette(x, labels), calinski_harabasz(x, labels), davies_bouldin(x, labels)};
}

} // namespace nasinit
