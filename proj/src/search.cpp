#include "nasinit/search.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "nasinit/csv.hpp"
#include "nasinit/error.hpp"
#include "nasinit/parallel.hpp"

namespace nasinit {

std::string_view to_string(SelectionMetric m) { return m == SelectionMetric::Validation ? "validation" : "test"; }

SelectionMetric parse_selection_metric(std::string_view name) {
    if (name == "validation" || name == "val") return SelectionMetric::Validation;
    if (name == "test") return SelectionMetric::Test;
    throw ParameterError("unknown selection metric '" + std::string(name) + "'");
}

void SearchConfig::validate() const {
    if (tournament_size < 1) throw ParameterError("tournament size must be >= 1");
    if (tournament_size > population_size)
        throw ParameterError("tournament size S=" + std::to_string(tournament_size) +
                             " exceeds population size P=" + std::to_string(population_size));
    if (population_size > total_evaluations)
        throw ParameterError("population size P=" + std::to_string(population_size) +
                             " exceeds evaluation budget C=" + std::to_string(total_evaluations));
    budget_index(budget);
    constraints.validate();
}

namespace {

class Evaluator {
public:
    Evaluator(const TabularBenchmark& b, const SearchConfig& cfg) : b_(b), cfg_(cfg) {}

    EvaluatedModel operator()(const CellArchitecture& arch) {
        const EvalResult r = b_.query(arch, cfg_.budget);
        EvaluatedModel m{arch,
                         cfg_.selection == SelectionMetric::Validation ? r.validation_accuracy
                                                                       : r.test_accuracy,
                         r.test_accuracy, r.validation_accuracy, count_};
        ++count_;
        return m;
    }

    std::size_t count() const { return count_; }

private:
    const TabularBenchmark& b_;
    const SearchConfig& cfg_;
    std::size_t count_ = 0;
};

class TraceRecorder {
public:
    explicit TraceRecorder(RunTrace& t) : trace_(t) {}

    void record(const EvaluatedModel& m) {
        if (!have_ || m.fitness > trace_.best.fitness) {
            trace_.best = m;
            have_ = true;
        }
        trace_.entries.push_back({m.evaluation_index, trace_.best.fitness, trace_.best.report_accuracy,
                                  trace_.best.validation_accuracy});
    }

private:
    RunTrace& trace_;
    bool have_ = false;
};

// Random architecture that the benchmark can answer for.
EvaluatedModel evaluate_random(Evaluator& eval, const TabularBenchmark& b, const SearchConfig& cfg,
                               Rng& rng) {
    for (std::size_t attempt = 0;; ++attempt) {
        CellArchitecture arch = random_architecture(rng, cfg.constraints);
        try {
            return eval(arch);
        } catch (const MissingArchitectureError&) {
            if (attempt + 1 >= cfg.mutation_resample_budget * 100 || b.size() == 0)
                throw RuntimeFailure("random sampling: benchmark knows none of " +
                                     std::to_string(attempt + 1) + " drawn architectures");
        }
    }
}

} // namespace

RunTrace aging_evolution(const TabularBenchmark& b, const SearchConfig& cfg,
                         std::optional<std::span<const CellArchitecture>> init,
                         const PopulationObserver& observer) {
    cfg.validate();
    if (init) {
        if (init->size() != cfg.population_size)
            throw ParameterError("initial population has " + std::to_string(init->size()) +
                                 " members, expected P=" + std::to_string(cfg.population_size));
        for (const auto& a : *init)
            if (!is_valid(a, cfg.constraints)) throw ParameterError("initial population holds an invalid cell");
    }

    Rng rng(cfg.seed);
    RunTrace trace;
    trace.seed = cfg.seed;
    trace.entries.reserve(cfg.total_evaluations);
    TraceRecorder recorder(trace);
    Evaluator eval(b, cfg);

    std::deque<EvaluatedModel> population;
    while (population.size() < cfg.population_size) {
        EvaluatedModel m = init ? eval((*init)[population.size()]) : evaluate_random(eval, b, cfg, rng);
        recorder.record(m);
        population.push_back(std::move(m));
    }

    while (eval.count() < cfg.total_evaluations) {
        std::optional<EvaluatedModel> child;
        for (std::size_t attempt = 0; !child; ++attempt) {
            if (attempt >= cfg.mutation_resample_budget)
                throw RuntimeFailure("aging evolution: no admissible child after " +
                                     std::to_string(attempt) + " attempts at evaluation " +
                                     std::to_string(eval.count()));
            // Tournament with replacement; ties go to the oldest contender.
            const EvaluatedModel* parent = nullptr;
            for (std::size_t s = 0; s < cfg.tournament_size; ++s) {
                const auto& cand = population[uniform_index(rng, population.size())];
                if (!parent || cand.fitness > parent->fitness ||
                    (cand.fitness == parent->fitness && cand.evaluation_index < parent->evaluation_index))
                    parent = &cand;
            }
            try {
                CellArchitecture arch = mutate(parent->arch, rng, cfg.mutation_policy, cfg.constraints);
                child = eval(arch);
            } catch (const MutationError&) {
            } catch (const MissingArchitectureError&) {
            }
        }
        recorder.record(*child);
        population.push_back(std::move(*child));
        EvaluatedModel dead = std::move(population.front());
        population.pop_front();
        if (observer) observer(population, dead);
    }
    return trace;
}

RunTrace random_search(const TabularBenchmark& b, const SearchConfig& cfg) {
    if (cfg.total_evaluations < 1) throw ParameterError("random search needs C >= 1");
    budget_index(cfg.budget);
    Rng rng(cfg.seed);
    RunTrace trace;
    trace.seed = cfg.seed;
    TraceRecorder recorder(trace);
    Evaluator eval(b, cfg);
    while (eval.count() < cfg.total_evaluations) recorder.record(evaluate_random(eval, b, cfg, rng));
    return trace;
}

std::vector<CellArchitecture> centroid_init(std::span<const BenchmarkRecord> samples, const Matrix& reduced,
                                            const Matrix& centroids) {
    if (reduced.rows() != samples.size())
        throw ParameterError("reduced matrix rows do not match the sample count");
    if (centroids.rows() == 0) throw ParameterError("no centroids");
    if (centroids.cols() != reduced.cols())
        throw ParameterError("centroid dimension does not match the reduced space");
    if (centroids.rows() > samples.size())
        throw ParameterError(std::to_string(centroids.rows()) + " centroids but only " +
                             std::to_string(samples.size()) + " samples");

    std::vector<std::size_t> order(samples.size());
    std::unordered_set<std::string> taken;
    std::vector<CellArchitecture> out;
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
        std::vector<double> d(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) d[i] = squared_distance(reduced.row(i), centroids.row(c));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
        bool placed = false;
        for (std::size_t i : order) {
            if (!taken.insert(canonical_key(samples[i].arch)).second) continue;
            out.push_back(samples[i].arch);
            placed = true;
            break;
        }
        if (!placed) throw ParameterError("not enough distinct sampled architectures for every centroid");
    }
    return out;
}

std::string_view to_string(Strategy s) {
    switch (s) {
    case Strategy::RS: return "rs";
    case Strategy::AE: return "ae";
    case Strategy::BAE: return "bae";
    }
    return "?";
}

Strategy parse_strategy(std::string_view name) {
    if (name == "rs") return Strategy::RS;
    if (name == "ae") return Strategy::AE;
    if (name == "bae" || name == "b-ae" || name == "b_ae") return Strategy::BAE;
    throw ParameterError("unknown strategy '" + std::string(name) + "'");
}

Matrix encode_records(std::span<const BenchmarkRecord> records, EncodingKind kind) {
    Matrix m;
    for (const auto& r : records) m.append_row(encode(kind, r.arch, r.test_quad()).values);
    return m;
}

CentroidPopulation build_centroid_population(const TabularBenchmark& b, const ClusteringRecipe& recipe) {
    CentroidPopulation cp;
    Rng rng(recipe.sample_seed);
    cp.samples = sample_records(b, recipe.n_samples, rng);
    const Matrix features = encode_records(cp.samples, recipe.encoding);
    const ReductionModel reducer = fit_reduction(recipe.reducer, features, recipe.components);
    cp.reduced = transform(reducer, features);
    cp.model = fit_clusters(cp.reduced.points, recipe.clustering);
    cp.centroids = extract_centroids(cp.model);
    cp.population = centroid_init(cp.samples, cp.reduced.points, cp.centroids);
    return cp;
}

std::uint64_t run_seed(std::uint64_t master, std::size_t run) { return derive_seed(master, run); }

ExperimentResult run_experiment(const TabularBenchmark& b, const SearchConfig& cfg, Strategy strategy,
                                std::size_t runs, const std::optional<ClusteringRecipe>& recipe,
                                std::size_t threads) {
    ExperimentResult result;
    result.strategy = strategy;
    if (strategy == Strategy::BAE) {
        if (!recipe) throw ParameterError("B-AE needs a clustering recipe");
        result.initialization = build_centroid_population(b, *recipe);
        if (result.initialization->population.size() != cfg.population_size)
            throw ParameterError("clustering produced " +
                                 std::to_string(result.initialization->population.size()) +
                                 " centroids but the population size is " +
                                 std::to_string(cfg.population_size));
    }

    std::vector<std::optional<RunTrace>> traces(runs);
    std::vector<std::string> errors(runs);
    parallel_for(runs, threads, [&](std::size_t i) {
        SearchConfig run_cfg = cfg;
        run_cfg.seed = run_seed(cfg.seed, i);
        try {
            RunTrace t;
            switch (strategy) {
            case Strategy::RS: t = random_search(b, run_cfg); break;
            case Strategy::AE: t = aging_evolution(b, run_cfg); break;
            case Strategy::BAE:
                t = aging_evolution(b, run_cfg,
                                    std::span<const CellArchitecture>(result.initialization->population));
                break;
            }
            t.run_id = i;
            traces[i] = std::move(t);
        } catch (const Error& e) {
            errors[i] = e.what();
        }
    });

    for (std::size_t i = 0; i < runs; ++i) {
        if (traces[i])
            result.traces.push_back(std::move(*traces[i]));
        else
            result.failures.push_back({i, run_seed(cfg.seed, i), errors[i]});
    }
    return result;
}

void write_trace_csv(std::ostream& os, std::span<const RunTrace> traces) {
    os << "run_id,iteration,incumbent_test_accuracy,incumbent_validation_accuracy\n";
    for (const auto& t : traces)
        for (const auto& e : t.entries)
            os << t.run_id << ',' << e.evaluation_index + 1 << ',' << format_double(e.incumbent_test_accuracy)
               << ',' << format_double(e.incumbent_validation_accuracy) << '\n';
}

} // namespace nasinit
