// nasinit: sample, calibrate, search and report subcommands.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "nasinit/error.hpp"
#include "nasinit/pipeline.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kRuntime = 3 };

int exit_code_for(const nasinit::Error& e) {
    using K = nasinit::Error::Kind;
    switch (e.kind()) {
    case K::Parameter: return kUsage;
    case K::Structural:
    case K::InvalidArchitecture:
    case K::Parse:
    case K::Validation:
    case K::MissingArchitecture: return kData;
    default: return kRuntime;
    }
}

} // namespace

int main(int argc, char** argv) {
    using namespace nasinit;

    CLI::App app{"Data-driven initialization for neural architecture search"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value configuration file (flags override it)");

    PipelineConfig cfg;
    std::string dataset, encoding = "original", reducer = "tsvd", cluster = "bgm", strategy = "bae";
    std::string out = cfg.out.string();

    app.add_option("--dataset", dataset, "JSON-lines benchmark file; synthetic benchmark when omitted");
    app.add_option("--synthetic-seed", cfg.synthetic_seed, "Seed of the synthetic benchmark");
    app.add_option("--n-samples", cfg.n_samples, "Architectures sampled for clustering")->capture_default_str();
    app.add_option("--encoding", encoding, "Feature encoding")
        ->check(CLI::IsMember({"original", "binary"}))
        ->capture_default_str();
    app.add_option("--reducer", reducer, "Dimensionality reduction")
        ->check(CLI::IsMember({"pca", "tsvd"}))
        ->capture_default_str();
    app.add_option("--components", cfg.components, "Reduced dimension")->capture_default_str();
    app.add_option("--cluster", cluster, "Clustering method")
        ->check(CLI::IsMember({"kmeans", "dbscan", "bgm"}))
        ->capture_default_str();
    app.add_option("--k", cfg.k, "Number of clusters")->capture_default_str();
    app.add_option("--strategy", strategy, "Search strategy")
        ->check(CLI::IsMember({"rs", "ae", "bae"}))
        ->capture_default_str();
    app.add_option("--population", cfg.search.population_size, "Population size P")->capture_default_str();
    app.add_option("--tournament", cfg.search.tournament_size, "Tournament size S")->capture_default_str();
    app.add_option("--evaluations", cfg.search.total_evaluations, "Evaluations per run C")->capture_default_str();
    app.add_option("--budget", cfg.search.budget, "Training-epoch column")
        ->check(CLI::IsMember({4, 12, 36, 108}))
        ->capture_default_str();
    app.add_option("--runs", cfg.runs, "Independent runs M")->capture_default_str();
    app.add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    app.add_option("--out", out, "Output directory")->capture_default_str();
    app.add_option("--threads", cfg.threads, "Worker threads, 0 for all cores")->capture_default_str();
    // Grids are read as text so that an empty value is an empty grid.
    std::string component_grid = format_grid(cfg.component_grid), k_grid = format_grid(cfg.k_grid);
    app.add_option("--component-grid", component_grid, "Component counts for calibration, comma separated")
        ->capture_default_str();
    app.add_option("--k-grid", k_grid, "Cluster counts for calibration, comma separated")->capture_default_str();
    app.add_flag("!--no-header", cfg.feature_header, "Omit the header row of feature CSVs");

    auto* sample = app.add_subcommand("sample", "Sample architectures and write both feature matrices");
    auto* calibrate = app.add_subcommand("calibrate", "Component and cluster-count sweeps");
    auto* search = app.add_subcommand("search", "Run M searches with one strategy");
    auto* report = app.add_subcommand("report", "Summaries, Wilcoxon comparisons and curves");
    std::vector<std::string> report_dirs;
    report->add_option("dirs", report_dirs, "Search output directories")->required();
    for (auto* sub : {sample, calibrate, search, report}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (!dataset.empty()) cfg.dataset = dataset;
        cfg.out = out;
        cfg.encoding = parse_encoding(encoding);
        cfg.reducer = parse_reduction(reducer);
        cfg.cluster = parse_cluster_method(cluster);
        cfg.strategy = parse_strategy(strategy);
        cfg.component_grid = parse_grid(component_grid);
        cfg.k_grid = parse_grid(k_grid);

        if (*sample) cmd_sample(cfg, std::cout);
        if (*calibrate) cmd_calibrate(cfg, std::cout);
        if (*search && cmd_search(cfg, std::cout) > 0) return kRuntime;
        if (*report) {
            std::vector<std::filesystem::path> dirs(report_dirs.begin(), report_dirs.end());
            cmd_report(dirs, cfg.out, std::cout);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntime;
    }
    return kOk;
}
