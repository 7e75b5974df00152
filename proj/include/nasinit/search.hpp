#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nasinit/benchmark.hpp"
#include "nasinit/clustering.hpp"
#include "nasinit/encoding.hpp"
#include "nasinit/reduction.hpp"
#include "nasinit/search_space.hpp"

namespace nasinit {

enum class SelectionMetric { Validation, Test };

std::string_view to_string(SelectionMetric m);
SelectionMetric parse_selection_metric(std::string_view name);

struct SearchConfig {
    std::size_t population_size = 27;   // P
    std::size_t tournament_size = 10;   // S
    std::size_t total_evaluations = 2000; // C
    int budget = 108;
    SelectionMetric selection = SelectionMetric::Validation;
    MutationPolicy mutation_policy = MutationPolicy::BothSteps;
    std::uint64_t seed = 0;
    /// Re-mutation attempts allowed per child when a closed-world benchmark
    /// does not know the proposed architecture.
    std::size_t mutation_resample_budget = 100;
    SpaceConstraints constraints;

    /// Throws ParameterError unless S <= P <= C and the budget is tabulated.
    void validate() const;
};

struct EvaluatedModel {
    CellArchitecture arch;
    double fitness = 0.0;         // selection metric
    double report_accuracy = 0.0; // test accuracy at the budget
    double validation_accuracy = 0.0;
    std::size_t evaluation_index = 0; // 0-based age
};

/// Incumbent after one evaluation. The incumbent is the highest-fitness
/// model so far (earliest on ties), so `incumbent_fitness` is nondecreasing;
/// its test accuracy is what gets reported.
struct TraceEntry {
    std::size_t evaluation_index = 0;
    double incumbent_fitness = 0.0;
    double incumbent_test_accuracy = 0.0;
    double incumbent_validation_accuracy = 0.0;
};

struct RunTrace {
    std::size_t run_id = 0;
    std::uint64_t seed = 0;
    std::vector<TraceEntry> entries; // one per evaluation, length C
    EvaluatedModel best;

    double final_test_accuracy() const { return entries.back().incumbent_test_accuracy; }
};

/// Called after every evolution step with the population (oldest first)
/// and the model that was just removed.
using PopulationObserver =
    std::function<void(const std::deque<EvaluatedModel>& population, const EvaluatedModel& removed)>;

/// Aging evolution: fill a FIFO population of P (from `init` in order, or by
/// random sampling), then repeatedly pick the fittest of S members drawn
/// with replacement, mutate it, append the child and drop the oldest, until
/// C models have been evaluated.
/// Throws ParameterError when init is given with |init| != P or invalid
/// members, and RuntimeFailure when the resample budget is exhausted.
RunTrace aging_evolution(const TabularBenchmark& b, const SearchConfig& cfg,
                         std::optional<std::span<const CellArchitecture>> init = std::nullopt,
                         const PopulationObserver& observer = {});

/// C independent random architectures.
RunTrace random_search(const TabularBenchmark& b, const SearchConfig& cfg);

/// Maps each centroid (in order) to the nearest sampled architecture in
/// reduced space that has not been taken yet. Ties go to the lower sample
/// index. Throws ParameterError when there are more centroids than samples.
std::vector<CellArchitecture> centroid_init(std::span<const BenchmarkRecord> samples,
                                            const Matrix& reduced, const Matrix& centroids);

enum class Strategy { RS, AE, BAE };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view name);

/// How B-AE derives its initial population.
struct ClusteringRecipe {
    EncodingKind encoding = EncodingKind::Original;
    ReductionMethod reducer = ReductionMethod::TSVD;
    std::size_t components = 2;
    ClusterParams clustering{ClusterMethod::BGM, 27};
    std::size_t n_samples = 10000;
    std::uint64_t sample_seed = 0;
};

struct CentroidPopulation {
    std::vector<BenchmarkRecord> samples;
    ReducedMatrix reduced;
    ClusterModel model;
    Matrix centroids;
    std::vector<CellArchitecture> population;
};

/// Encodes records with their test accuracies into a feature matrix.
Matrix encode_records(std::span<const BenchmarkRecord> records, EncodingKind kind);

/// sample -> encode -> reduce -> cluster -> extract centroids -> nearest samples.
CentroidPopulation build_centroid_population(const TabularBenchmark& b, const ClusteringRecipe& recipe);

struct RunFailure {
    std::size_t run_id;
    std::uint64_t seed;
    std::string message;
};

struct ExperimentResult {
    Strategy strategy = Strategy::AE;
    std::vector<RunTrace> traces; // successful runs, ascending run_id
    std::vector<RunFailure> failures;
    std::optional<CentroidPopulation> initialization; // B-AE only
};

/// Seed of run i: derive_seed(cfg.seed, i).
std::uint64_t run_seed(std::uint64_t master, std::size_t run);

/// M independent runs; B-AE clusters once and every run starts from the same
/// centroid population. Output does not depend on `threads`.
ExperimentResult run_experiment(const TabularBenchmark& b, const SearchConfig& cfg, Strategy strategy,
                                std::size_t runs, const std::optional<ClusteringRecipe>& recipe,
                                std::size_t threads = 1);

/// run_id, iteration, incumbent_test_accuracy, incumbent_validation_accuracy
void write_trace_csv(std::ostream& os, std::span<const RunTrace> traces);

} // namespace nasinit
