#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "nasinit/matrix.hpp"
#include "nasinit/random.hpp"

namespace nasinit {

enum class ClusterMethod { KMeans, DBSCAN, BGM };
enum class CovarianceType { Full };
enum class WeightPrior { DirichletDistribution };

std::string_view to_string(ClusterMethod m);
ClusterMethod parse_cluster_method(std::string_view name);

/// Defaults follow the clustering hyperparameter table: 500 iterations for
/// every method, 50 k-means++ restarts, eps = 0.30 and 200 (read as
/// min_samples) for DBSCAN, full covariances with a Dirichlet weight prior
/// for the Bayesian mixture.
struct ClusterParams {
    ClusterMethod method = ClusterMethod::KMeans;
    std::size_t n_clusters = 10;
    std::size_t max_iter = 500;
    std::size_t n_init = 50;
    double eps = 0.30;
    std::size_t min_samples = 200;
    CovarianceType covariance = CovarianceType::Full;
    WeightPrior weight_prior = WeightPrior::DirichletDistribution;
    double tolerance = 1e-4;
    std::uint64_t seed = 0;
};

inline constexpr int kNoise = -1;

struct ClusterModel {
    ClusterMethod method = ClusterMethod::KMeans;
    std::vector<int> labels;           // per row; kNoise only for DBSCAN
    Matrix centers;                    // one row per cluster/component
    std::vector<double> weights;       // BGM mixture weights (posterior mean)
    std::vector<Matrix> covariances;   // BGM expected covariances
    double inertia = 0.0;              // KMEANS
    std::size_t n_effective_clusters = 0;
    std::size_t n_iter = 0;
    bool converged = false;
    /// KMEANS: inertia after every assignment step of the winning restart.
    /// BGM: evidence lower bound after every variational update.
    std::vector<double> history;
};

/// k-means++ seeding: first center uniform, each further center drawn with
/// probability proportional to its squared distance to the nearest chosen one.
std::vector<std::size_t> kmeanspp_seed(const Matrix& x, std::size_t k, Rng& rng);

/// Lloyd iterations from k-means++ seeds, best of n_init restarts. Restart i
/// draws from derive_seed(seed, i). Throws ParameterError when k exceeds the
/// number of distinct rows.
ClusterModel kmeans(const Matrix& x, const ClusterParams& p);

/// Density clustering with Euclidean eps-balls (self included in the count).
/// Clusters are numbered by their first core point in row order and border
/// points join the first cluster that reaches them.
ClusterModel dbscan(const Matrix& x, const ClusterParams& p);

/// Variational Bayesian Gaussian mixture with a Dirichlet weight prior and
/// full covariances, initialized from a single seeded k-means run.
ClusterModel fit_bgm(const Matrix& x, const ClusterParams& p);

ClusterModel fit_clusters(const Matrix& x, const ClusterParams& p);

/// KMEANS centroids; BGM means ordered by descending weight; DBSCAN cluster
/// means. Throws EmptyResultError when there are none.
Matrix extract_centroids(const ClusterModel& m);

/// Number of distinct rows (exact comparison).
std::size_t count_distinct_rows(const Matrix& x);

double digamma(double x);

} // namespace nasinit
