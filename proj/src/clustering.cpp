#include "nasinit/clustering.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <string>

#include "nasinit/error.hpp"
#include "nasinit/linalg.hpp"

namespace nasinit {

std::string_view to_string(ClusterMethod m) {
    switch (m) {
    case ClusterMethod::KMeans: return "kmeans";
    case ClusterMethod::DBSCAN: return "dbscan";
    case ClusterMethod::BGM: return "bgm";
    }
    return "?";
}

ClusterMethod parse_cluster_method(std::string_view name) {
    if (name == "kmeans") return ClusterMethod::KMeans;
    if (name == "dbscan") return ClusterMethod::DBSCAN;
    if (name == "bgm") return ClusterMethod::BGM;
    throw ParameterError("unknown clustering method '" + std::string(name) + "'");
}

std::size_t count_distinct_rows(const Matrix& x) {
    std::vector<std::size_t> idx(x.rows());
    std::iota(idx.begin(), idx.end(), 0);
    auto less = [&](std::size_t a, std::size_t b) {
        auto ra = x.row(a), rb = x.row(b);
        return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    };
    std::sort(idx.begin(), idx.end(), less);
    std::size_t distinct = idx.empty() ? 0 : 1;
    for (std::size_t i = 1; i < idx.size(); ++i)
        if (less(idx[i - 1], idx[i])) ++distinct;
    return distinct;
}

// ---------------------------------------------------------------- k-means

std::vector<std::size_t> kmeanspp_seed(const Matrix& x, std::size_t k, Rng& rng) {
    const std::size_t n = x.rows();
    if (k == 0 || k > n) throw ParameterError("kmeans++: need 1 <= k <= N");
    std::vector<std::size_t> chosen{static_cast<std::size_t>(uniform_index(rng, n))};
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(x.row(i), x.row(chosen[0]));

    while (chosen.size() < k) {
        const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
        std::size_t pick = n - 1;
        if (total > 0.0) {
            const double target = uniform_unit(rng) * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (target < acc && d2[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
            // Rounding can leave target >= acc; fall back to the last positive weight.
            if (!(d2[pick] > 0.0))
                for (std::size_t i = n; i-- > 0;)
                    if (d2[i] > 0.0) {
                        pick = i;
                        break;
                    }
        } else {
            pick = static_cast<std::size_t>(uniform_index(rng, n));
        }
        chosen.push_back(pick);
        for (std::size_t i = 0; i < n; ++i)
            d2[i] = std::min(d2[i], squared_distance(x.row(i), x.row(pick)));
    }
    return chosen;
}

namespace {

struct LloydResult {
    std::vector<int> labels;
    Matrix centers;
    double inertia = 0.0;
    std::vector<double> history;
    std::size_t n_iter = 0;
    bool converged = false;
};

// Nearest center, ties to the lowest index. Returns the total squared distance.
double assign(const Matrix& x, const Matrix& centers, std::vector<int>& labels,
              std::vector<double>& cost) {
    double inertia = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        int arg = 0;
        for (std::size_t c = 0; c < centers.rows(); ++c) {
            const double d = squared_distance(x.row(i), centers.row(c));
            if (d < best) {
                best = d;
                arg = static_cast<int>(c);
            }
        }
        labels[i] = arg;
        cost[i] = best;
        inertia += best;
    }
    return inertia;
}

// Re-seeds empty clusters with the point that currently pays the most, taken
// from a cluster that can spare it. Lowers (never raises) the inertia.
double fill_empty_clusters(const Matrix& x, Matrix& centers, std::vector<int>& labels,
                           std::vector<double>& cost, double inertia) {
    const std::size_t k = centers.rows();
    std::vector<std::size_t> sizes(k, 0);
    for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
    for (std::size_t c = 0; c < k; ++c) {
        if (sizes[c] > 0) continue;
        std::size_t far = x.rows();
        for (std::size_t i = 0; i < x.rows(); ++i) {
            if (sizes[static_cast<std::size_t>(labels[i])] < 2) continue;
            if (far == x.rows() || cost[i] > cost[far]) far = i;
        }
        if (far == x.rows()) throw ParameterError("kmeans: cannot populate every cluster");
        --sizes[static_cast<std::size_t>(labels[far])];
        ++sizes[c];
        labels[far] = static_cast<int>(c);
        inertia -= cost[far];
        cost[far] = 0.0;
        auto dst = centers.row(c);
        auto src = x.row(far);
        std::copy(src.begin(), src.end(), dst.begin());
    }
    return inertia;
}

Matrix cluster_means(const Matrix& x, const std::vector<int>& labels, std::size_t k) {
    Matrix means(k, x.cols());
    std::vector<double> counts(k, 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        if (labels[i] < 0) continue;
        const auto c = static_cast<std::size_t>(labels[i]);
        counts[c] += 1.0;
        auto row = x.row(i);
        for (std::size_t j = 0; j < x.cols(); ++j) means(c, j) += row[j];
    }
    for (std::size_t c = 0; c < k; ++c)
        if (counts[c] > 0)
            for (std::size_t j = 0; j < x.cols(); ++j) means(c, j) /= counts[c];
    return means;
}

LloydResult lloyd(const Matrix& x, std::size_t k, const ClusterParams& p, double tol, Rng& rng) {
    LloydResult r;
    r.centers = Matrix(k, x.cols());
    auto seeds = kmeanspp_seed(x, k, rng);
    for (std::size_t c = 0; c < k; ++c) {
        auto src = x.row(seeds[c]);
        std::copy(src.begin(), src.end(), r.centers.row(c).begin());
    }

    r.labels.assign(x.rows(), 0);
    std::vector<double> cost(x.rows());
    for (std::size_t it = 0; it < p.max_iter; ++it) {
        double inertia = assign(x, r.centers, r.labels, cost);
        inertia = fill_empty_clusters(x, r.centers, r.labels, cost, inertia);
        r.history.push_back(inertia);
        r.n_iter = it + 1;

        Matrix next = cluster_means(x, r.labels, k);
        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) shift += squared_distance(next.row(c), r.centers.row(c));
        r.centers = std::move(next);
        if (shift <= tol) {
            r.converged = true;
            break;
        }
    }
    double inertia = assign(x, r.centers, r.labels, cost);
    r.inertia = fill_empty_clusters(x, r.centers, r.labels, cost, inertia);
    r.history.push_back(r.inertia);
    return r;
}

double mean_column_variance(const Matrix& x) {
    if (x.rows() == 0 || x.cols() == 0) return 0.0;
    double total = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) {
        double mean = 0.0, ss = 0.0;
        for (std::size_t i = 0; i < x.rows(); ++i) mean += x(i, j);
        mean /= static_cast<double>(x.rows());
        for (std::size_t i = 0; i < x.rows(); ++i) ss += (x(i, j) - mean) * (x(i, j) - mean);
        total += ss / static_cast<double>(x.rows());
    }
    return total / static_cast<double>(x.cols());
}

} // namespace

ClusterModel kmeans(const Matrix& x, const ClusterParams& p) {
    const std::size_t k = p.n_clusters;
    if (k == 0) throw ParameterError("kmeans: n_clusters must be >= 1");
    if (p.n_init == 0) throw ParameterError("kmeans: n_init must be >= 1");
    const std::size_t distinct = count_distinct_rows(x);
    if (k > distinct)
        throw ParameterError("kmeans: " + std::to_string(k) + " clusters requested but only " +
                             std::to_string(distinct) + " distinct rows");

    // Shift threshold scaled by the data's spread, so tolerance is unit-free.
    const double tol = p.tolerance * mean_column_variance(x);

    LloydResult best;
    bool have = false;
    for (std::size_t run = 0; run < p.n_init; ++run) {
        Rng rng(derive_seed(p.seed, run));
        LloydResult r = lloyd(x, k, p, tol, rng);
        if (!have || r.inertia < best.inertia) {
            best = std::move(r);
            have = true;
        }
    }

    ClusterModel m;
    m.method = ClusterMethod::KMeans;
    m.labels = std::move(best.labels);
    m.centers = std::move(best.centers);
    m.inertia = best.inertia;
    m.n_effective_clusters = k;
    m.n_iter = best.n_iter;
    m.converged = best.converged;
    m.history = std::move(best.history);
    return m;
}

// ---------------------------------------------------------------- DBSCAN

namespace {

// Neighbours within eps (self included), ascending by row index. Rows are
// swept in order of the first coordinate so only a slab is compared.
std::vector<std::vector<std::size_t>> eps_neighbours(const Matrix& x, double eps) {
    const std::size_t n = x.rows();
    std::vector<std::vector<std::size_t>> nbrs(n);
    if (n == 0) return nbrs;
    const double eps2 = eps * eps;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return x(a, 0) < x(b, 0); });
    std::size_t lo = 0;
    for (std::size_t a = 0; a < n; ++a) {
        const std::size_t i = order[a];
        while (x(order[lo], 0) < x(i, 0) - eps) ++lo;
        for (std::size_t b = lo; b < n && x(order[b], 0) <= x(i, 0) + eps; ++b) {
            const std::size_t j = order[b];
            if (squared_distance(x.row(i), x.row(j)) <= eps2) nbrs[i].push_back(j);
        }
        std::sort(nbrs[i].begin(), nbrs[i].end());
    }
    return nbrs;
}

} // namespace

ClusterModel dbscan(const Matrix& x, const ClusterParams& p) {
    if (!(p.eps > 0.0)) throw ParameterError("dbscan: eps must be > 0");
    if (p.min_samples < 1) throw ParameterError("dbscan: min_samples must be >= 1");
    const std::size_t n = x.rows();
    auto nbrs = eps_neighbours(x, p.eps);
    std::vector<bool> core(n);
    for (std::size_t i = 0; i < n; ++i) core[i] = nbrs[i].size() >= p.min_samples;

    ClusterModel m;
    m.method = ClusterMethod::DBSCAN;
    m.labels.assign(n, kNoise);
    int next_label = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!core[i] || m.labels[i] != kNoise) continue;
        const int label = next_label++;
        m.labels[i] = label;
        std::deque<std::size_t> queue{i};
        while (!queue.empty()) {
            const std::size_t u = queue.front();
            queue.pop_front();
            for (std::size_t v : nbrs[u]) {
                if (m.labels[v] != kNoise) continue;
                m.labels[v] = label;
                if (core[v]) queue.push_back(v);
            }
        }
    }
    const auto k = static_cast<std::size_t>(next_label);
    m.centers = cluster_means(x, m.labels, k);
    m.n_effective_clusters = k;
    m.converged = true;
    return m;
}

// ------------------------------------------------- Bayesian Gaussian mixture

double digamma(double x) {
    double result = 0.0;
    while (x < 10.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    const double f = 1.0 / (x * x);
    result += std::log(x) - 0.5 / x -
              f * (1.0 / 12 - f * (1.0 / 120 - f * (1.0 / 252 - f * (1.0 / 240 - f * (1.0 / 132)))));
    return result;
}

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kRegCovar = 1e-6;

struct Component {
    double alpha = 0, beta = 0, nu = 0;
    std::vector<double> mean;
    Matrix scale_inv;  // W^{-1}
    Matrix w;          // W
    double log_det_w = 0;
    double e_log_pi = 0;
    double e_log_det_lambda = 0;
};

// Posterior of one component from its sufficient statistics. A scale matrix
// that is not positive definite gets kRegCovar (growing) added to its diagonal.
void posterior(Component& q, double nk, const std::vector<double>& xbar, const Matrix& s,
               double alpha0, double beta0, double nu0, const std::vector<double>& m0,
               const Matrix& w0_inv) {
    const std::size_t d = m0.size();
    q.alpha = alpha0 + nk;
    q.beta = beta0 + nk;
    q.nu = nu0 + nk;
    q.mean.assign(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) q.mean[j] = (beta0 * m0[j] + nk * xbar[j]) / q.beta;
    q.scale_inv = Matrix(d, d);
    const double shrink = beta0 * nk / (beta0 + nk);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
            q.scale_inv(a, b) = w0_inv(a, b) + nk * s(a, b) +
                                shrink * (xbar[a] - m0[a]) * (xbar[b] - m0[b]);

    Matrix chol;
    double reg = kRegCovar;
    while (!linalg::cholesky(q.scale_inv, chol)) {
        for (std::size_t a = 0; a < d; ++a) q.scale_inv(a, a) += reg;
        reg *= 10.0;
        if (reg > 1e6) throw RuntimeFailure("bgm: covariance could not be regularized");
    }
    q.w = linalg::inverse_from_cholesky(chol);
    q.log_det_w = -linalg::log_det_from_cholesky(chol);
    q.e_log_det_lambda = static_cast<double>(d) * std::log(2.0) + q.log_det_w;
    for (std::size_t i = 1; i <= d; ++i) q.e_log_det_lambda += digamma((q.nu + 1.0 - i) / 2.0);
}

double quad_form(const Matrix& w, const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) s += a[i] * w(i, j) * b[j];
    return s;
}

double trace_product(const Matrix& a, const Matrix& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * b(j, i);
    return s;
}

// log B(W, nu) of the Wishart normalizer, given log|W|.
double log_wishart_norm(double log_det_w, double nu, std::size_t d) {
    double s = 0.5 * nu * d * std::log(2.0) + 0.25 * d * (d - 1.0) * std::log(M_PI);
    for (std::size_t i = 1; i <= d; ++i) s += std::lgamma((nu + 1.0 - i) / 2.0);
    return -0.5 * nu * log_det_w - s;
}

class VariationalMixture {
public:
    VariationalMixture(const Matrix& x, std::size_t k) : x_(x), k_(k), d_(x.cols()) {
        const std::size_t n = x.rows();
        alpha0_ = 1.0 / static_cast<double>(k);
        beta0_ = 1.0;
        nu0_ = static_cast<double>(d_);
        m0_.assign(d_, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d_; ++j) m0_[j] += x(i, j);
        for (double& v : m0_) v /= static_cast<double>(n);
        // W0^{-1} = nu0 * S with S the 1/N empirical covariance, so a single
        // component's expected covariance reproduces S.
        w0_inv_ = Matrix(d_, d_);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t a = 0; a < d_; ++a)
                for (std::size_t b = 0; b < d_; ++b)
                    w0_inv_(a, b) += (x(i, a) - m0_[a]) * (x(i, b) - m0_[b]);
        for (std::size_t a = 0; a < d_; ++a)
            for (std::size_t b = 0; b < d_; ++b) w0_inv_(a, b) *= nu0_ / static_cast<double>(n);
        Matrix chol;
        double reg = kRegCovar;
        while (!linalg::cholesky(w0_inv_, chol)) {
            for (std::size_t a = 0; a < d_; ++a) w0_inv_(a, a) += reg;
            reg *= 10.0;
        }
        log_det_w0_ = -linalg::log_det_from_cholesky(chol);
        comps_.resize(k);
    }

    void m_step(const Matrix& resp) {
        const std::size_t n = x_.rows();
        nk_.assign(k_, 0.0);
        xbar_.assign(k_, std::vector<double>(d_, 0.0));
        sk_.assign(k_, Matrix(d_, d_));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = 0; c < k_; ++c) {
                nk_[c] += resp(i, c);
                for (std::size_t j = 0; j < d_; ++j) xbar_[c][j] += resp(i, c) * x_(i, j);
            }
        for (std::size_t c = 0; c < k_; ++c) {
            nk_[c] += 10.0 * DBL_EPSILON;
            for (double& v : xbar_[c]) v /= nk_[c];
        }
        std::vector<double> diff(d_);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = 0; c < k_; ++c) {
                const double r = resp(i, c);
                if (r == 0.0) continue;
                for (std::size_t j = 0; j < d_; ++j) diff[j] = x_(i, j) - xbar_[c][j];
                for (std::size_t a = 0; a < d_; ++a)
                    for (std::size_t b = 0; b < d_; ++b) sk_[c](a, b) += r * diff[a] * diff[b];
            }
        double alpha_sum = 0.0;
        for (std::size_t c = 0; c < k_; ++c) {
            for (std::size_t a = 0; a < d_; ++a)
                for (std::size_t b = 0; b < d_; ++b) sk_[c](a, b) /= nk_[c];
            posterior(comps_[c], nk_[c], xbar_[c], sk_[c], alpha0_, beta0_, nu0_, m0_, w0_inv_);
            alpha_sum += comps_[c].alpha;
        }
        const double dg_sum = digamma(alpha_sum);
        for (auto& q : comps_) q.e_log_pi = digamma(q.alpha) - dg_sum;
    }

    void e_step(Matrix& resp) const {
        const std::size_t n = x_.rows();
        std::vector<double> log_rho(k_), diff(d_);
        for (std::size_t i = 0; i < n; ++i) {
            double mx = -std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k_; ++c) {
                const auto& q = comps_[c];
                for (std::size_t j = 0; j < d_; ++j) diff[j] = x_(i, j) - q.mean[j];
                log_rho[c] = q.e_log_pi + 0.5 * q.e_log_det_lambda -
                             0.5 * static_cast<double>(d_) / q.beta -
                             0.5 * q.nu * quad_form(q.w, diff, diff) - 0.5 * d_ * kLog2Pi;
                mx = std::max(mx, log_rho[c]);
            }
            double z = 0.0;
            for (std::size_t c = 0; c < k_; ++c) z += std::exp(log_rho[c] - mx);
            const double log_z = mx + std::log(z);
            for (std::size_t c = 0; c < k_; ++c) resp(i, c) = std::exp(log_rho[c] - log_z);
        }
    }

    // Full evidence lower bound for the current q(Z) = resp and q(theta).
    double lower_bound(const Matrix& resp) const {
        const double d = static_cast<double>(d_);
        double e_px = 0, e_pz = 0, e_ppi = 0, e_pmu = 0, e_qz = 0, e_qpi = 0, e_qmu = 0;

        double alpha_sum = 0.0, lgamma_alpha = 0.0;
        for (const auto& q : comps_) {
            alpha_sum += q.alpha;
            lgamma_alpha += std::lgamma(q.alpha);
        }
        const double kd = static_cast<double>(k_);
        e_ppi = std::lgamma(kd * alpha0_) - kd * std::lgamma(alpha0_);
        e_qpi = std::lgamma(alpha_sum) - lgamma_alpha;
        const double log_b0 = log_wishart_norm(log_det_w0_, nu0_, d_);

        std::vector<double> diff(d_);
        for (std::size_t c = 0; c < k_; ++c) {
            const auto& q = comps_[c];
            for (std::size_t j = 0; j < d_; ++j) diff[j] = xbar_[c][j] - q.mean[j];
            e_px += 0.5 * nk_[c] *
                    (q.e_log_det_lambda - d / q.beta - q.nu * trace_product(sk_[c], q.w) -
                     q.nu * quad_form(q.w, diff, diff) - d * kLog2Pi);
            e_pz += nk_[c] * q.e_log_pi;
            e_ppi += (alpha0_ - 1.0) * q.e_log_pi;

            for (std::size_t j = 0; j < d_; ++j) diff[j] = q.mean[j] - m0_[j];
            e_pmu += 0.5 * (d * std::log(beta0_ / (2.0 * M_PI)) + q.e_log_det_lambda -
                            d * beta0_ / q.beta - beta0_ * q.nu * quad_form(q.w, diff, diff)) +
                     log_b0 + 0.5 * (nu0_ - d - 1.0) * q.e_log_det_lambda -
                     0.5 * q.nu * trace_product(w0_inv_, q.w);

            e_qpi += (q.alpha - 1.0) * q.e_log_pi;
            const double entropy = -log_wishart_norm(q.log_det_w, q.nu, d_) -
                                   0.5 * (q.nu - d - 1.0) * q.e_log_det_lambda + 0.5 * q.nu * d;
            e_qmu += 0.5 * q.e_log_det_lambda + 0.5 * d * std::log(q.beta / (2.0 * M_PI)) - 0.5 * d -
                     entropy;
        }
        for (double r : resp.data())
            if (r > 0.0) e_qz += r * std::log(r);
        return e_px + e_pz + e_ppi + e_pmu - e_qz - e_qpi - e_qmu;
    }

    const std::vector<Component>& components() const { return comps_; }

private:
    const Matrix& x_;
    std::size_t k_, d_;
    double alpha0_, beta0_, nu0_, log_det_w0_ = 0;
    std::vector<double> m0_;
    Matrix w0_inv_;
    std::vector<Component> comps_;
    std::vector<double> nk_;
    std::vector<std::vector<double>> xbar_;
    std::vector<Matrix> sk_;
};

} // namespace

ClusterModel fit_bgm(const Matrix& x, const ClusterParams& p) {
    const std::size_t k = p.n_clusters;
    if (k < 1) throw ParameterError("bgm: n_clusters must be >= 1");
    if (x.rows() < 2) throw ParameterError("bgm: need at least 2 rows");
    const std::size_t n = x.rows();

    Matrix resp(n, k);
    if (k <= count_distinct_rows(x)) {
        ClusterParams init = p;
        init.n_init = 1;
        init.seed = derive_seed(p.seed, 0xB6D);
        auto km = kmeans(x, init);
        for (std::size_t i = 0; i < n; ++i) resp(i, static_cast<std::size_t>(km.labels[i])) = 1.0;
    } else {
        Rng rng(derive_seed(p.seed, 0xB6E));
        for (std::size_t i = 0; i < n; ++i) {
            double z = 0.0;
            for (std::size_t c = 0; c < k; ++c) z += (resp(i, c) = uniform_unit(rng) + 1e-12);
            for (std::size_t c = 0; c < k; ++c) resp(i, c) /= z;
        }
    }

    VariationalMixture vm(x, k);
    ClusterModel m;
    m.method = ClusterMethod::BGM;
    vm.m_step(resp);
    double bound = vm.lower_bound(resp);
    m.history.push_back(bound);
    for (std::size_t it = 0; it < p.max_iter; ++it) {
        vm.e_step(resp);
        vm.m_step(resp);
        const double next = vm.lower_bound(resp);
        m.history.push_back(next);
        m.n_iter = it + 1;
        const double change = next - bound;
        bound = next;
        if (std::abs(change) < p.tolerance) {
            m.converged = true;
            break;
        }
    }
    vm.e_step(resp);

    m.labels.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t arg = 0;
        for (std::size_t c = 1; c < k; ++c)
            if (resp(i, c) > resp(i, arg)) arg = c;
        m.labels[i] = static_cast<int>(arg);
    }

    const auto& comps = vm.components();
    double alpha_sum = 0.0;
    for (const auto& q : comps) alpha_sum += q.alpha;
    m.centers = Matrix(k, x.cols());
    const double threshold = 1.0 / (10.0 * static_cast<double>(k));
    for (std::size_t c = 0; c < k; ++c) {
        const auto& q = comps[c];
        std::copy(q.mean.begin(), q.mean.end(), m.centers.row(c).begin());
        m.weights.push_back(q.alpha / alpha_sum);
        Matrix cov = q.scale_inv;
        for (double& v : cov.data()) v /= q.nu;
        m.covariances.push_back(std::move(cov));
        if (m.weights.back() >= threshold) ++m.n_effective_clusters;
    }
    return m;
}

ClusterModel fit_clusters(const Matrix& x, const ClusterParams& p) {
    switch (p.method) {
    case ClusterMethod::KMeans: return kmeans(x, p);
    case ClusterMethod::DBSCAN: return dbscan(x, p);
    case ClusterMethod::BGM: return fit_bgm(x, p);
    }
    throw ParameterError("unknown clustering method");
}

Matrix extract_centroids(const ClusterModel& m) {
    if (m.centers.rows() == 0) throw EmptyResultError("clustering produced no clusters");
    if (m.method != ClusterMethod::BGM) return m.centers;

    std::vector<std::size_t> order(m.centers.rows());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return m.weights[a] > m.weights[b]; });
    Matrix out;
    for (std::size_t c : order) out.append_row(m.centers.row(c));
    return out;
}

} // namespace nasinit
