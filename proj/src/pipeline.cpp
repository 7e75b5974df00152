#include "nasinit/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "nasinit/csv.hpp"
#include "nasinit/error.hpp"
#include "nasinit/json_io.hpp"
#include "nasinit/stats.hpp"
#include "nasinit/sweep.hpp"

namespace nasinit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw RuntimeFailure("cannot write " + p.string());
    return os;
}

std::ifstream open_in(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) throw ValidationError("cannot read " + p.string());
    return is;
}

fs::path features_path(const fs::path& dir, EncodingKind k) {
    return dir / ("features_" + std::string(to_string(k)) + ".csv");
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = m.row(r);
        rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    return rows;
}

} // namespace

std::vector<std::size_t> parse_grid(std::string_view text) {
    std::vector<std::size_t> grid;
    if (text.find_first_not_of(" \t") == std::string_view::npos) return grid;
    for (const auto& item : split_csv_line(text)) {
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        const std::string_view v =
            first == std::string::npos ? std::string_view{} : std::string_view(item).substr(first, last - first + 1);
        std::size_t value = 0;
        const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), value);
        if (v.empty() || ec != std::errc{} || end != v.data() + v.size() || value == 0)
            throw ParameterError("grid entry '" + item + "' is not a positive integer");
        grid.push_back(value);
    }
    return grid;
}

std::string format_grid(const std::vector<std::size_t>& grid) {
    std::string out;
    for (std::size_t i = 0; i < grid.size(); ++i) out += (i ? "," : "") + std::to_string(grid[i]);
    return out;
}

TabularBenchmark open_benchmark(const PipelineConfig& cfg) {
    if (cfg.dataset) return load_dataset(*cfg.dataset);
    return TabularBenchmark::synthetic(cfg.synthetic_seed);
}

ClusteringRecipe make_recipe(const PipelineConfig& cfg) {
    ClusteringRecipe r;
    r.encoding = cfg.encoding;
    r.reducer = cfg.reducer;
    r.components = cfg.components;
    r.clustering.method = cfg.cluster;
    r.clustering.n_clusters = cfg.k;
    r.clustering.seed = derive_seed(cfg.seed, kClusterStream);
    r.n_samples = cfg.n_samples;
    r.sample_seed = derive_seed(cfg.seed, kSampleStream);
    return r;
}

void cmd_sample(const PipelineConfig& cfg, std::ostream& log) {
    if (cfg.n_samples == 0) throw ParameterError("--n-samples must be >= 1");
    const TabularBenchmark b = open_benchmark(cfg);
    Rng rng(make_recipe(cfg).sample_seed);
    const auto records = sample_records(b, cfg.n_samples, rng);

    fs::create_directories(cfg.out);
    {
        auto os = open_out(cfg.out / "samples.jsonl");
        for (const auto& r : records) os << format_record(r) << '\n';
    }
    for (EncodingKind k : {EncodingKind::Original, EncodingKind::Binary}) {
        auto os = open_out(features_path(cfg.out, k));
        write_feature_csv(os, k, encode_records(records, k), cfg.feature_header);
    }
    log << "sampled " << records.size() << " architectures from the " << to_string(b.provenance())
        << " benchmark into " << cfg.out.string() << '\n';
}

void cmd_calibrate(const PipelineConfig& cfg, std::ostream& log) {
    if (cfg.component_grid.empty()) throw ParameterError("component grid is empty");
    if (cfg.k_grid.empty()) throw ParameterError("cluster-count grid is empty");
    for (const auto* grid : {&cfg.component_grid, &cfg.k_grid})
        if (std::find(grid->begin(), grid->end(), std::size_t{0}) != grid->end())
            throw ParameterError("grid entries must be >= 1");

    const std::vector<ReductionMethod> reducers{ReductionMethod::PCA, ReductionMethod::TSVD};
    std::vector<SweepRow> comp_rows, k_rows;
    std::size_t computed = 0;
    auto tally = [&](const std::vector<SweepRow>& rows) {
        for (const auto& r : rows)
            if (r.metrics) ++computed;
    };

    for (EncodingKind enc : {EncodingKind::Original, EncodingKind::Binary}) {
        const fs::path fp = features_path(cfg.out, enc);
        if (!fs::exists(fp)) throw ValidationError(fp.string() + " not found; run the sample command first");
        auto is = open_in(fp);
        const Matrix features = read_feature_csv(is);

        // Component curves use the fixed k-means setting of the calibration study.
        ClusterParams kp;
        kp.seed = derive_seed(cfg.seed, kClusterStream);
        auto rows = sweep_components(features, enc, reducers, cfg.component_grid, kp, cfg.threads);
        tally(rows);
        comp_rows.insert(comp_rows.end(), rows.begin(), rows.end());

        ClusterParams cp = make_recipe(cfg).clustering;
        for (ReductionMethod m : reducers) {
            ReducedMatrix reduced;
            try {
                reduced = transform(fit_reduction(m, features, cfg.components), features);
            } catch (const Error& e) {
                for (std::size_t k : cfg.k_grid)
                    k_rows.push_back({m, enc, cfg.components, k, std::nullopt, e.what()});
                continue;
            }
            rows = sweep_cluster_counts(reduced, enc, cfg.k_grid, cp, cfg.threads);
            tally(rows);
            k_rows.insert(k_rows.end(), rows.begin(), rows.end());

            try {
                const ClusterModel model = fit_clusters(reduced.points, cp);
                auto os = open_out(cfg.out / ("scatter_" + std::string(to_string(enc)) + "_" +
                                              std::string(to_string(m)) + ".csv"));
                write_scatter_csv(os, reduced.points, model.labels);
            } catch (const Error& e) {
                log << "scatter " << to_string(enc) << "/" << to_string(m) << " skipped: " << e.what() << '\n';
            }
        }
    }

    {
        auto os = open_out(cfg.out / "sweep_components.csv");
        write_sweep_csv(os, comp_rows);
    }
    {
        auto os = open_out(cfg.out / "sweep_clusters.csv");
        write_sweep_csv(os, k_rows);
    }
    const std::size_t total = comp_rows.size() + k_rows.size();
    log << "calibration: " << computed << " of " << total << " cells computed\n";
    for (const auto* rows : {&comp_rows, &k_rows})
        for (const auto& r : *rows)
            if (!r.metrics)
                log << "  failed " << to_string(r.method) << "/" << to_string(r.encoding) << " c="
                    << r.n_components << " k=" << r.n_clusters << ": " << r.error << '\n';
    if (computed == 0) throw RuntimeFailure("every calibration cell failed");
}

std::size_t cmd_search(const PipelineConfig& cfg, std::ostream& log) {
    if (cfg.runs == 0) throw ParameterError("--runs must be >= 1");
    SearchConfig sc = cfg.search;
    sc.seed = derive_seed(cfg.seed, kSearchStream);
    if (cfg.strategy != Strategy::RS) sc.validate();
    if (cfg.strategy == Strategy::BAE && cfg.k != sc.population_size)
        throw ParameterError("B-AE needs one centroid per population slot: --k " + std::to_string(cfg.k) +
                             " vs --population " + std::to_string(sc.population_size));

    const TabularBenchmark b = open_benchmark(cfg);
    std::optional<ClusteringRecipe> recipe;
    if (cfg.strategy == Strategy::BAE) recipe = make_recipe(cfg);
    const ExperimentResult res = run_experiment(b, sc, cfg.strategy, cfg.runs, recipe, cfg.threads);

    fs::create_directories(cfg.out);
    {
        auto os = open_out(cfg.out / "trace.csv");
        write_trace_csv(os, res.traces);
    }
    if (res.traces.size() >= 2) {
        std::vector<double> finals;
        for (const auto& t : res.traces) finals.push_back(t.final_test_accuracy());
        const SummaryRow row{sc.budget, std::string(to_string(cfg.strategy)), summarize(finals)};
        auto os = open_out(cfg.out / "summary.csv");
        write_summary_csv(os, std::span<const SummaryRow>(&row, 1));
    }

    json m;
    m["strategy"] = to_string(cfg.strategy);
    json provenance{{"source", to_string(b.provenance())}};
    if (cfg.dataset) {
        provenance["dataset"] = cfg.dataset->string();
        provenance["records"] = b.size();
        provenance["duplicates_replaced"] = b.duplicate_count();
    } else {
        provenance["synthetic_seed"] = cfg.synthetic_seed;
    }
    m["provenance"] = provenance;
    m["config"] = {{"seed", cfg.seed},
                   {"runs", cfg.runs},
                   {"population", sc.population_size},
                   {"tournament", sc.tournament_size},
                   {"evaluations", sc.total_evaluations},
                   {"budget", sc.budget},
                   {"selection", to_string(sc.selection)},
                   {"mutation_policy", to_string(sc.mutation_policy)},
                   {"mutation_resample_budget", sc.mutation_resample_budget},
                   {"search_master_seed", sc.seed}};
    json seeds = json::array();
    for (std::size_t i = 0; i < cfg.runs; ++i) seeds.push_back(run_seed(sc.seed, i));
    m["run_seeds"] = seeds;
    if (recipe) {
        const auto& init = *res.initialization;
        m["recipe"] = {{"encoding", to_string(recipe->encoding)},
                       {"reducer", to_string(recipe->reducer)},
                       {"components", recipe->components},
                       {"cluster", to_string(recipe->clustering.method)},
                       {"k", recipe->clustering.n_clusters},
                       {"n_samples", recipe->n_samples},
                       {"sample_seed", recipe->sample_seed},
                       {"cluster_seed", recipe->clustering.seed}};
        m["centroids"] = matrix_to_json(init.centroids);
        json pop = json::array();
        for (const auto& a : init.population) {
            json e = arch_to_json(a);
            e["key"] = canonical_key(a);
            pop.push_back(std::move(e));
        }
        m["initial_population"] = pop;
    }
    json failures = json::array();
    for (const auto& f : res.failures) {
        failures.push_back({{"run_id", f.run_id}, {"seed", f.seed}, {"message", f.message}});
        log << "run " << f.run_id << " (seed " << f.seed << ") failed: " << f.message << '\n';
    }
    m["failures"] = failures;
    {
        auto os = open_out(cfg.out / "manifest.json");
        os << m.dump(2) << '\n';
    }
    log << to_string(cfg.strategy) << ": " << res.traces.size() << " of " << cfg.runs << " runs completed, C="
        << sc.total_evaluations << ", budget " << sc.budget << '\n';
    return res.failures.size();
}

namespace {

struct TraceSet {
    std::string strategy;
    int budget = 0;
    std::size_t evaluations = 0;
    std::map<std::size_t, std::vector<double>> runs; // run_id -> incumbent per iteration
    fs::path dir;
};

TraceSet read_trace_set(const fs::path& dir) {
    TraceSet t;
    t.dir = dir;
    json m;
    try {
        auto is = open_in(dir / "manifest.json");
        m = json::parse(is);
        t.strategy = m.at("strategy").get<std::string>();
        t.budget = m.at("config").at("budget").get<int>();
        t.evaluations = m.at("config").at("evaluations").get<std::size_t>();
    } catch (const json::exception& e) {
        throw ParseError(0, (dir / "manifest.json").string() + ": " + e.what());
    }

    auto is = open_in(dir / "trace.csv");
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (lineno == 1 || line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() < 3) throw ParseError(lineno, (dir / "trace.csv").string() + ": expected 4 fields");
        try {
            const auto run = static_cast<std::size_t>(std::stoull(f[0]));
            const auto iter = static_cast<std::size_t>(std::stoull(f[1]));
            auto& v = t.runs[run];
            if (iter != v.size() + 1)
                throw ParseError(lineno, (dir / "trace.csv").string() + ": iterations out of order");
            v.push_back(parse_double(f[2]));
        } catch (const std::logic_error&) {
            throw ParseError(lineno, (dir / "trace.csv").string() + ": malformed row");
        } catch (const ParameterError& e) {
            throw ParseError(lineno, (dir / "trace.csv").string() + ": " + e.what());
        }
    }
    for (const auto& [run, v] : t.runs)
        if (v.size() != t.evaluations)
            throw ValidationError((dir / "trace.csv").string() + ": run " + std::to_string(run) + " has " +
                                  std::to_string(v.size()) + " entries, manifest says C=" +
                                  std::to_string(t.evaluations));
    if (t.runs.empty()) throw ValidationError((dir / "trace.csv").string() + ": no runs");
    return t;
}

int strategy_rank(const std::string& s) {
    try {
        return static_cast<int>(parse_strategy(s));
    } catch (const ParameterError&) {
        return 99;
    }
}

} // namespace

void cmd_report(const std::vector<fs::path>& dirs, const fs::path& out, std::ostream& log) {
    if (dirs.empty()) throw ParameterError("report needs at least one search directory");
    std::vector<TraceSet> sets;
    for (const auto& d : dirs) sets.push_back(read_trace_set(d));
    std::stable_sort(sets.begin(), sets.end(), [](const TraceSet& a, const TraceSet& b) {
        if (a.budget != b.budget) return a.budget < b.budget;
        return strategy_rank(a.strategy) < strategy_rank(b.strategy);
    });
    for (std::size_t i = 1; i < sets.size(); ++i)
        if (sets[i].budget == sets[i - 1].budget && sets[i].strategy == sets[i - 1].strategy)
            throw ValidationError("strategy " + sets[i].strategy + " at budget " + std::to_string(sets[i].budget) +
                                  " appears in both " + sets[i - 1].dir.string() + " and " + sets[i].dir.string());

    auto finals = [](const TraceSet& t) {
        std::vector<double> v;
        for (const auto& [run, trace] : t.runs) v.push_back(trace.back());
        return v;
    };

    std::vector<SummaryRow> summary;
    for (const auto& t : sets) {
        const auto f = finals(t);
        if (f.size() < 2) throw ValidationError(t.dir.string() + ": summary needs at least 2 runs");
        summary.push_back({t.budget, t.strategy, summarize(f)});
    }

    std::vector<ComparisonRow> comparisons;
    for (std::size_t i = 0; i < sets.size(); ++i)
        for (std::size_t j = i + 1; j < sets.size(); ++j) {
            if (sets[i].budget != sets[j].budget) continue;
            if (sets[i].evaluations != sets[j].evaluations)
                throw ValidationError("cannot compare " + sets[i].strategy + " (C=" +
                                      std::to_string(sets[i].evaluations) + ") with " + sets[j].strategy +
                                      " (C=" + std::to_string(sets[j].evaluations) + ") at budget " +
                                      std::to_string(sets[i].budget));
            const auto a = finals(sets[i]), b = finals(sets[j]);
            comparisons.push_back({sets[i].strategy + "-vs-" + sets[j].strategy, sets[i].budget,
                                   wilcoxon_rank_sum(a, b).p_value});
        }

    fs::create_directories(out);
    {
        auto os = open_out(out / "summary.csv");
        write_summary_csv(os, summary);
    }
    {
        auto os = open_out(out / "comparison.csv");
        write_comparison_csv(os, comparisons);
    }
    {
        auto os = open_out(out / "curves.csv");
        os << "budget,strategy,iteration,mean_incumbent_test_accuracy\n";
        for (const auto& t : sets)
            for (std::size_t it = 0; it < t.evaluations; ++it) {
                double s = 0.0;
                for (const auto& [run, trace] : t.runs) s += trace[it];
                os << t.budget << ',' << t.strategy << ',' << it + 1 << ','
                   << format_double(s / static_cast<double>(t.runs.size())) << '\n';
            }
    }
    log << "report: " << summary.size() << " summaries, " << comparisons.size() << " comparisons\n";
    if (comparisons.empty()) log << "note: no two strategies share a budget, nothing to compare\n";
}

} // namespace nasinit
