#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "nasinit/encoding.hpp"
#include "nasinit/random.hpp"
#include "nasinit/search_space.hpp"

namespace nasinit {

struct BudgetMetrics {
    double validation = 0.0;
    double test = 0.0;
};

struct BenchmarkRecord {
    CellArchitecture arch;
    std::array<BudgetMetrics, 4> metrics{}; // indexed like kBudgets
    std::optional<double> training_time;

    const BudgetMetrics& at(int budget) const { return metrics[budget_index(budget)]; }
    PerformanceQuad test_quad() const;
    /// Throws ValidationError naming the first out-of-range field.
    void validate() const;
};

struct EvalResult {
    double validation_accuracy = 0.0;
    double test_accuracy = 0.0;
    std::string lookup_key;
};

enum class Provenance { Ingested, Synthetic };

std::string_view to_string(Provenance p);

/// Fixed weights of the synthetic surrogate landscape.
struct SurrogateWeights {
    static constexpr double base = 0.80;
    static constexpr double conv3x3 = 0.010;
    static constexpr double conv1x1 = 0.004;
    static constexpr double maxpool3x3 = -0.006;
    static constexpr double depth = 0.008;
    static constexpr double edge = 0.002;
    static constexpr double noise = 0.01;
    static constexpr double validation_jitter = 0.002;
    static constexpr std::array<double, 4> budget_scale{0.92, 0.96, 0.99, 1.00};
};

/// Architecture -> accuracy lookup keyed by canonical_key. An ingested
/// benchmark answers only what it stores (closed world); the synthetic one
/// computes every answer on demand from the surrogate formula.
class TabularBenchmark {
public:
    /// Prunes and keys every record; a repeated key replaces the earlier
    /// record in place and is counted in duplicate_count().
    static TabularBenchmark from_records(std::vector<BenchmarkRecord> records, bool closed_world = true);
    static TabularBenchmark synthetic(std::uint64_t seed, SpaceConstraints c = {});

    Provenance provenance() const noexcept { return provenance_; }
    bool closed_world() const noexcept { return closed_world_; }
    std::uint64_t synthetic_seed() const noexcept { return seed_; }
    const SpaceConstraints& constraints() const noexcept { return constraints_; }

    /// Stored records (empty for the synthetic benchmark).
    const std::vector<BenchmarkRecord>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }
    std::size_t duplicate_count() const noexcept { return duplicates_; }

    /// Throws ParameterError for budgets outside {4, 12, 36, 108} and
    /// MissingArchitectureError for closed-world misses.
    EvalResult query(const CellArchitecture& arch, int budget) const;

    /// Every budget at once; the returned record holds prune(arch).
    BenchmarkRecord lookup(const CellArchitecture& arch) const;

private:
    TabularBenchmark() = default;
    BenchmarkRecord surrogate(const CellArchitecture& pruned, const std::string& key) const;

    Provenance provenance_ = Provenance::Ingested;
    bool closed_world_ = true;
    std::uint64_t seed_ = 0;
    SpaceConstraints constraints_;
    std::vector<BenchmarkRecord> records_;
    std::unordered_map<std::string, std::size_t> index_;
    std::size_t duplicates_ = 0;
};

/// One JSON-lines record. Throws StructuralError / ValidationError.
BenchmarkRecord parse_record(std::string_view json_line);
std::string format_record(const BenchmarkRecord& r);

/// Throws ParseError (with line number) on malformed JSON and ValidationError
/// (prefixed with the line number) on invalid content.
TabularBenchmark load_dataset(std::istream& is);
TabularBenchmark load_dataset(const std::filesystem::path& path);

/// Uniform sample without replacement, seed-deterministic. For a synthetic
/// benchmark this draws n architectures with distinct keys from the space.
/// Throws ParameterError when n exceeds a closed-world benchmark's size.
std::vector<BenchmarkRecord> sample_records(const TabularBenchmark& b, std::size_t n, Rng& rng);

} // namespace nasinit
