#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nasinit/benchmark.hpp"
#include "nasinit/clustering.hpp"
#include "nasinit/encoding.hpp"
#include "nasinit/reduction.hpp"
#include "nasinit/search.hpp"

namespace nasinit {

struct PipelineConfig {
    std::optional<std::filesystem::path> dataset; // synthetic benchmark when absent
    std::uint64_t synthetic_seed = 0;
    std::size_t n_samples = 10000;
    EncodingKind encoding = EncodingKind::Original;
    ReductionMethod reducer = ReductionMethod::TSVD;
    std::size_t components = 2;
    ClusterMethod cluster = ClusterMethod::BGM;
    std::size_t k = 27;
    Strategy strategy = Strategy::BAE;
    SearchConfig search; // population, tournament, evaluations, budget
    std::size_t runs = 100;
    std::uint64_t seed = 0;
    std::filesystem::path out = "out";
    std::size_t threads = 0; // 0: all cores
    std::vector<std::size_t> component_grid{2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<std::size_t> k_grid{5, 10, 15, 20, 27, 30};
    bool feature_header = true;
};

/// Stream identifiers mixed into the master seed.
inline constexpr std::uint64_t kSampleStream = 1;
inline constexpr std::uint64_t kClusterStream = 2;
inline constexpr std::uint64_t kSearchStream = 3;

/// "2,3,10" -> {2, 3, 10}. Blank text is an empty grid. Throws ParameterError
/// on entries that are not positive integers.
std::vector<std::size_t> parse_grid(std::string_view text);
std::string format_grid(const std::vector<std::size_t>& grid);

TabularBenchmark open_benchmark(const PipelineConfig& cfg);

/// Clustering recipe derived from the config; its sample seed matches the
/// one `cmd_sample` draws with, so B-AE sees the same N architectures.
ClusteringRecipe make_recipe(const PipelineConfig& cfg);

/// Writes samples.jsonl and features_original.csv / features_binary.csv.
void cmd_sample(const PipelineConfig& cfg, std::ostream& log);

/// Reads the feature matrices written by `cmd_sample` from `cfg.out` and
/// writes sweep_components.csv, sweep_clusters.csv and one scatter file per
/// encoding and reducer. Throws ParameterError on an empty grid and
/// RuntimeFailure when every cell failed.
void cmd_calibrate(const PipelineConfig& cfg, std::ostream& log);

/// Runs the configured strategy and writes trace.csv, summary.csv and
/// manifest.json. Returns the number of failed runs.
std::size_t cmd_search(const PipelineConfig& cfg, std::ostream& log);

/// Reads search output directories and writes summary.csv, comparison.csv
/// and curves.csv to `out`. Throws ValidationError when the traces being
/// compared disagree on C or a (strategy, budget) pair appears twice.
void cmd_report(const std::vector<std::filesystem::path>& dirs, const std::filesystem::path& out,
                std::ostream& log);

} // namespace nasinit
