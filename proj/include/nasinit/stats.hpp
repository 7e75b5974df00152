#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nasinit {

struct SampleSummary {
    double mean = 0.0;
    double median = 0.0;
    double min = 0.0;
    double max = 0.0;
    double std = 0.0; // n-1 denominator
};

/// Throws ParameterError when fewer than two values are given.
SampleSummary summarize(std::span<const double> xs);

enum class TestMethod { Exact, NormalApprox };

/// Auto picks Exact when |a|+|b| <= 12 and there are no ties.
enum class TestMethodChoice { Auto, Exact, NormalApprox };

std::string_view to_string(TestMethod m);

struct TestResult {
    double statistic = 0.0; // Mann-Whitney U of `a`
    double p_value = 1.0;
    TestMethod method = TestMethod::Exact;
    bool two_sided = true;
};

/// Largest pooled size accepted by forced exact enumeration.
inline constexpr std::size_t kExactLimit = 20;

/// Wilcoxon rank-sum test with midranks. One-sided tests the alternative
/// that `a` tends to be larger than `b`.
/// Throws ParameterError on an empty sample, or when Exact is forced on a
/// pooled sample larger than kExactLimit.
TestResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b, bool two_sided = true,
                             TestMethodChoice method = TestMethodChoice::Auto);

/// Midranks (1-based) of the values, ties share their average rank.
std::vector<double> midranks(std::span<const double> xs);

struct SummaryRow {
    int budget = 0;
    std::string strategy;
    SampleSummary summary;
};

struct ComparisonRow {
    std::string pair; // "rs-vs-bae"
    int budget = 0;
    double p_value = 1.0;
};

/// budget,strategy,mean,median,min,max,std
void write_summary_csv(std::ostream& os, std::span<const SummaryRow> rows);
/// pair,budget,p_value,significant_at_0.05
void write_comparison_csv(std::ostream& os, std::span<const ComparisonRow> rows);

} // namespace nasinit
