#include "nasinit/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <ostream>

#include "nasinit/csv.hpp"
#include "nasinit/error.hpp"

namespace nasinit {

SampleSummary summarize(std::span<const double> xs) {
    if (xs.size() < 2) throw ParameterError("summary needs at least 2 values, got " + std::to_string(xs.size()));
    std::vector<double> s(xs.begin(), xs.end());
    std::sort(s.begin(), s.end());
    const std::size_t n = s.size();
    SampleSummary out;
    out.mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(n);
    out.median = n % 2 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
    out.min = s.front();
    out.max = s.back();
    double ss = 0.0;
    for (double x : s) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(n - 1));
    return out;
}

std::string_view to_string(TestMethod m) { return m == TestMethod::Exact ? "exact" : "normal-approx"; }

std::vector<double> midranks(std::span<const double> xs) {
    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return xs[i] < xs[j]; });
    std::vector<double> r(xs.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[order[k]] = rank;
        i = j + 1;
    }
    return r;
}

namespace {

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

// Upper and lower tail probabilities of U by enumerating every way to pick
// which n of the pooled ranks belong to `a`. Ranks are doubled to stay integral.
std::pair<double, double> exact_tails(const std::vector<double>& ranks, std::size_t n, double u_obs) {
    const std::size_t total = ranks.size();
    std::vector<long> r2(total);
    for (std::size_t i = 0; i < total; ++i) r2[i] = std::lround(2.0 * ranks[i]);
    const long shift = static_cast<long>(n * (n + 1)); // 2 * n(n+1)/2
    const long obs2 = std::lround(2.0 * u_obs);
    std::size_t le = 0, ge = 0, count = 0;
    for (std::uint32_t mask = 0; mask < (1u << total); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != n) continue;
        long w2 = 0;
        for (std::size_t i = 0; i < total; ++i)
            if (mask & (1u << i)) w2 += r2[i];
        const long u2 = w2 - shift;
        ++count;
        if (u2 <= obs2) ++le;
        if (u2 >= obs2) ++ge;
    }
    return {static_cast<double>(le) / static_cast<double>(count), static_cast<double>(ge) / static_cast<double>(count)};
}

} // namespace

TestResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b, bool two_sided,
                             TestMethodChoice method) {
    if (a.empty() || b.empty()) throw ParameterError("rank-sum test needs two non-empty samples");
    for (double x : a)
        if (std::isnan(x)) throw ParameterError("rank-sum test: NaN in sample");
    for (double x : b)
        if (std::isnan(x)) throw ParameterError("rank-sum test: NaN in sample");

    const std::size_t n = a.size(), m = b.size(), total = n + m;
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const std::vector<double> ranks = midranks(pooled);
    const double w = std::accumulate(ranks.begin(), ranks.begin() + static_cast<long>(n), 0.0);
    const double u = w - static_cast<double>(n * (n + 1)) / 2.0;

    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    double tie_sum = 0.0;
    for (std::size_t i = 0; i < total;) {
        std::size_t j = i;
        while (j + 1 < total && sorted[j + 1] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i + 1);
        tie_sum += t * t * t - t;
        i = j + 1;
    }
    const bool ties = tie_sum > 0.0;

    TestResult res;
    res.statistic = u;
    res.two_sided = two_sided;
    bool exact = false;
    switch (method) {
    case TestMethodChoice::Auto: exact = total <= 12 && !ties; break;
    case TestMethodChoice::Exact:
        if (total > kExactLimit)
            throw ParameterError("exact rank-sum enumeration limited to " + std::to_string(kExactLimit) +
                                 " pooled values, got " + std::to_string(total));
        exact = true;
        break;
    case TestMethodChoice::NormalApprox: exact = false; break;
    }

    double p;
    if (exact) {
        res.method = TestMethod::Exact;
        const auto [lower, upper] = exact_tails(ranks, n, u);
        p = two_sided ? 2.0 * std::min(lower, upper) : upper;
    } else {
        res.method = TestMethod::NormalApprox;
        const double dn = static_cast<double>(n), dm = static_cast<double>(m), dt = static_cast<double>(total);
        const double mu = dn * dm / 2.0;
        const double var = dn * dm / 12.0 * ((dt + 1.0) - tie_sum / (dt * (dt - 1.0)));
        if (var <= 0.0) {
            p = 1.0;
        } else if (two_sided) {
            const double z = std::max(std::abs(u - mu) - 0.5, 0.0) / std::sqrt(var);
            p = 2.0 * normal_sf(z);
        } else {
            p = normal_sf((u - mu - 0.5) / std::sqrt(var));
        }
    }
    res.p_value = std::clamp(p, 0.0, 1.0);
    return res;
}

void write_summary_csv(std::ostream& os, std::span<const SummaryRow> rows) {
    os << "budget,strategy,mean,median,min,max,std\n";
    for (const auto& r : rows)
        os << r.budget << ',' << r.strategy << ',' << format_double(r.summary.mean) << ','
           << format_double(r.summary.median) << ',' << format_double(r.summary.min) << ','
           << format_double(r.summary.max) << ',' << format_double(r.summary.std) << '\n';
}

void write_comparison_csv(std::ostream& os, std::span<const ComparisonRow> rows) {
    os << "pair,budget,p_value,significant_at_0.05\n";
    for (const auto& r : rows)
        os << r.pair << ',' << r.budget << ',' << format_double(r.p_value) << ','
           << (r.p_value < 0.05 ? "true" : "false") << '\n';
}

} // namespace nasinit
