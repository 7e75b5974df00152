#include "nasinit/reduction.hpp"

#include <cmath>
#include <string>

#include "nasinit/error.hpp"
#include "nasinit/linalg.hpp"

namespace nasinit {

std::string_view to_string(ReductionMethod m) { return m == ReductionMethod::PCA ? "pca" : "tsvd"; }

ReductionMethod parse_reduction(std::string_view name) {
    if (name == "pca") return ReductionMethod::PCA;
    if (name == "tsvd") return ReductionMethod::TSVD;
    throw ParameterError("unknown reducer '" + std::string(name) + "'");
}

namespace {

// X^T X over (optionally centered) rows. Zero entries are skipped, which
// matters for the sparse uncentered encodings.
Matrix gram(const Matrix& x, const std::vector<double>& means) {
    const std::size_t d = x.cols();
    Matrix g(d, d);
    std::vector<double> row(d);
    std::vector<std::size_t> nz;
    for (std::size_t r = 0; r < x.rows(); ++r) {
        nz.clear();
        for (std::size_t c = 0; c < d; ++c) {
            row[c] = x(r, c) - (means.empty() ? 0.0 : means[c]);
            if (row[c] != 0.0) nz.push_back(c);
        }
        for (std::size_t a : nz)
            for (std::size_t b : nz)
                if (b >= a) g(a, b) += row[a] * row[b];
    }
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < a; ++b) g(a, b) = g(b, a);
    return g;
}

void fix_sign(std::span<double> v) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
    if (v[arg] < 0)
        for (double& x : v) x = -x;
}

ReductionModel fit_from_gram(ReductionMethod method, const Matrix& g, std::size_t k,
                             std::size_t n_rows) {
    const std::size_t d = g.rows();
    auto eig = linalg::symmetric_eigen(g);

    double total = 0.0;
    for (std::size_t i = 0; i < d; ++i) total += g(i, i);

    ReductionModel m;
    m.method = method;
    m.components = Matrix(k, d);
    for (std::size_t c = 0; c < k; ++c) {
        auto dst = m.components.row(c);
        auto src = eig.vectors.row(c);
        std::copy(src.begin(), src.end(), dst.begin());
        fix_sign(dst);
        const double lambda = std::max(eig.values[c], 0.0);
        m.singular_values.push_back(std::sqrt(lambda));
        m.explained_variance.push_back(n_rows > 1 ? lambda / static_cast<double>(n_rows - 1) : 0.0);
        m.explained_variance_ratio.push_back(total > 0.0 ? lambda / total : 0.0);
    }
    return m;
}

void check_input(const Matrix& x, std::size_t k, std::size_t k_max) {
    if (x.rows() < 2) throw ParameterError("reduction needs at least 2 rows");
    if (k < 1 || k > k_max)
        throw ParameterError("component count " + std::to_string(k) + " outside [1, " +
                             std::to_string(k_max) + "]");
}

} // namespace

ReductionModel fit_pca(const Matrix& x, std::size_t k) {
    check_input(x, k, std::min(x.rows() - (x.rows() > 0 ? 1 : 0), x.cols()));
    std::vector<double> means(x.cols(), 0.0);
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t c = 0; c < x.cols(); ++c) means[c] += x(r, c);
    for (double& m : means) m /= static_cast<double>(x.rows());

    ReductionModel m = fit_from_gram(ReductionMethod::PCA, gram(x, means), k, x.rows());
    m.column_means = std::move(means);
    return m;
}

ReductionModel fit_truncated_svd(const Matrix& x, std::size_t k) {
    check_input(x, k, std::min(x.rows(), x.cols()));
    ReductionModel m = fit_from_gram(ReductionMethod::TSVD, gram(x, {}), k, x.rows());
    // Report the variance actually carried by each projected column.
    auto projected = transform(m, x).points;
    for (std::size_t c = 0; c < k; ++c) {
        double mean = 0.0, ss = 0.0;
        for (std::size_t r = 0; r < x.rows(); ++r) mean += projected(r, c);
        mean /= static_cast<double>(x.rows());
        for (std::size_t r = 0; r < x.rows(); ++r) ss += (projected(r, c) - mean) * (projected(r, c) - mean);
        m.explained_variance[c] = ss / static_cast<double>(x.rows() - 1);
    }
    return m;
}

ReductionModel fit_reduction(ReductionMethod method, const Matrix& x, std::size_t k) {
    return method == ReductionMethod::PCA ? fit_pca(x, k) : fit_truncated_svd(x, k);
}

ReducedMatrix transform(const ReductionModel& model, const Matrix& x) {
    if (x.cols() != model.n_features())
        throw ParameterError("transform: matrix has " + std::to_string(x.cols()) +
                             " columns, model expects " + std::to_string(model.n_features()));
    const std::size_t k = model.n_components();
    ReducedMatrix out{Matrix(x.rows(), k), model.method, k};
    const bool centered = !model.column_means.empty();
    for (std::size_t r = 0; r < x.rows(); ++r) {
        auto row = x.row(r);
        for (std::size_t c = 0; c < k; ++c) {
            auto comp = model.components.row(c);
            double s = 0.0;
            for (std::size_t j = 0; j < row.size(); ++j)
                s += (row[j] - (centered ? model.column_means[j] : 0.0)) * comp[j];
            out.points(r, c) = s;
        }
    }
    return out;
}

Matrix inverse_transform(const ReductionModel& model, const Matrix& reduced) {
    if (reduced.cols() != model.n_components())
        throw ParameterError("inverse_transform: width does not match component count");
    const std::size_t d = model.n_features();
    Matrix out(reduced.rows(), d);
    for (std::size_t r = 0; r < reduced.rows(); ++r)
        for (std::size_t j = 0; j < d; ++j) {
            double s = model.column_means.empty() ? 0.0 : model.column_means[j];
            for (std::size_t c = 0; c < model.n_components(); ++c)
                s += reduced(r, c) * model.components(c, j);
            out(r, j) = s;
        }
    return out;
}

} // namespace nasinit
