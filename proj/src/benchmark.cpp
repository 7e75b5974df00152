#include "nasinit/benchmark.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <unordered_set>

#include "nasinit/error.hpp"
#include "nasinit/json_io.hpp"

namespace nasinit {

using nlohmann::json;

nlohmann::json arch_to_json(const CellArchitecture& arch) {
    json ops = json::array();
    for (auto op : arch.ops()) ops.push_back(std::string(to_string(op)));
    return json{{"adjacency", arch.adjacency()}, {"ops", ops}};
}

CellArchitecture arch_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("adjacency") || !j.contains("ops"))
        throw StructuralError("architecture needs 'adjacency' and 'ops'");
    const auto& adj = j.at("adjacency");
    if (!adj.is_array()) throw StructuralError("'adjacency' must be a list of rows");
    std::vector<std::vector<int>> rows;
    for (const auto& row : adj) {
        if (!row.is_array()) throw StructuralError("'adjacency' rows must be lists");
        std::vector<int> r;
        for (const auto& v : row) {
            if (!v.is_number_integer()) throw StructuralError("adjacency entries must be integers");
            r.push_back(v.get<int>());
        }
        rows.push_back(std::move(r));
    }
    const auto& jops = j.at("ops");
    if (!jops.is_array()) throw StructuralError("'ops' must be a list");
    std::vector<std::string> names;
    for (const auto& o : jops) {
        if (!o.is_string()) throw StructuralError("'ops' entries must be strings");
        names.push_back(o.get<std::string>());
    }
    if (names.size() == rows.size() && names.size() >= 2 && names.front() == "input" &&
        names.back() == "output")
        names = std::vector<std::string>(names.begin() + 1, names.end() - 1);
    std::vector<OperationLabel> ops;
    for (const auto& n : names) ops.push_back(parse_operation(n));
    return CellArchitecture(rows, std::move(ops));
}

std::string_view to_string(Provenance p) { return p == Provenance::Ingested ? "ingested" : "synthetic"; }

PerformanceQuad BenchmarkRecord::test_quad() const {
    PerformanceQuad q;
    for (std::size_t i = 0; i < metrics.size(); ++i) q.test[i] = metrics[i].test;
    return q;
}

void BenchmarkRecord::validate() const {
    auto check = [](double v, int budget, const char* field) {
        if (!(v >= 0.0 && v <= 1.0))
            throw ValidationError("metrics." + std::to_string(budget) + "." + field + " = " +
                                  std::to_string(v) + " outside [0, 1]");
    };
    for (std::size_t i = 0; i < metrics.size(); ++i) {
        check(metrics[i].validation, kBudgets[i], "val");
        check(metrics[i].test, kBudgets[i], "test");
    }
}

TabularBenchmark TabularBenchmark::from_records(std::vector<BenchmarkRecord> records, bool closed_world) {
    TabularBenchmark b;
    b.provenance_ = Provenance::Ingested;
    b.closed_world_ = closed_world;
    for (auto& r : records) {
        r.validate();
        if (!is_valid(r.arch, b.constraints_))
            throw ValidationError("record holds an invalid architecture");
        r.arch = prune(r.arch);
        std::string key = canonical_key(r.arch);
        auto [it, inserted] = b.index_.emplace(std::move(key), b.records_.size());
        if (inserted) {
            b.records_.push_back(std::move(r));
        } else {
            b.records_[it->second] = std::move(r);
            ++b.duplicates_;
        }
    }
    return b;
}

TabularBenchmark TabularBenchmark::synthetic(std::uint64_t seed, SpaceConstraints c) {
    c.validate();
    TabularBenchmark b;
    b.provenance_ = Provenance::Synthetic;
    b.closed_world_ = false;
    b.seed_ = seed;
    b.constraints_ = std::move(c);
    return b;
}

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Uniform in [-1, 1) from a hash value.
double signed_unit(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-52 - 1.0;
}

} // namespace

BenchmarkRecord TabularBenchmark::surrogate(const CellArchitecture& pruned, const std::string& key) const {
    using W = SurrogateWeights;
    const std::uint64_t key_hash = fnv1a(key);
    const double noise = W::noise * signed_unit(mix64(key_hash ^ mix64(seed_)));
    const double raw = W::base + W::conv3x3 * count_op(pruned, OperationLabel::Conv3x3) +
                       W::conv1x1 * count_op(pruned, OperationLabel::Conv1x1) +
                       W::maxpool3x3 * count_op(pruned, OperationLabel::MaxPool3x3) +
                       W::depth * longest_path(pruned) + W::edge * pruned.num_edges() + noise;

    BenchmarkRecord r{pruned, {}, std::nullopt};
    for (std::size_t i = 0; i < kBudgets.size(); ++i) {
        const double test = clamp01(W::budget_scale[i] * raw);
        const double jitter = W::validation_jitter *
                              signed_unit(mix64(key_hash + static_cast<std::uint64_t>(kBudgets[i])));
        r.metrics[i] = {clamp01(test + jitter), test};
    }
    return r;
}

BenchmarkRecord TabularBenchmark::lookup(const CellArchitecture& arch) const {
    const std::string key = canonical_key(arch);
    if (provenance_ == Provenance::Synthetic) return surrogate(prune(arch), key);
    auto it = index_.find(key);
    if (it == index_.end()) throw MissingArchitectureError("architecture " + key + " not in benchmark");
    return records_[it->second];
}

EvalResult TabularBenchmark::query(const CellArchitecture& arch, int budget) const {
    const std::size_t bi = budget_index(budget);
    const std::string key = canonical_key(arch);
    if (provenance_ == Provenance::Synthetic) {
        const auto r = surrogate(prune(arch), key);
        return {r.metrics[bi].validation, r.metrics[bi].test, key};
    }
    auto it = index_.find(key);
    if (it == index_.end()) throw MissingArchitectureError("architecture " + key + " not in benchmark");
    const auto& m = records_[it->second].metrics[bi];
    return {m.validation, m.test, key};
}

BenchmarkRecord parse_record(std::string_view line) {
    const json j = json::parse(line); // json::parse_error handled by caller
    if (!j.is_object()) throw StructuralError("record must be a JSON object");
    BenchmarkRecord r{arch_from_json(j), {}, std::nullopt};
    if (!j.contains("metrics") || !j.at("metrics").is_object())
        throw StructuralError("record needs a 'metrics' object");
    const auto& m = j.at("metrics");
    for (std::size_t i = 0; i < kBudgets.size(); ++i) {
        const std::string b = std::to_string(kBudgets[i]);
        if (!m.contains(b)) throw StructuralError("metrics." + b + " missing");
        const auto& e = m.at(b);
        if (!e.is_object() || !e.contains("val") || !e.contains("test") || !e.at("val").is_number() ||
            !e.at("test").is_number())
            throw StructuralError("metrics." + b + " needs numeric 'val' and 'test'");
        r.metrics[i] = {e.at("val").get<double>(), e.at("test").get<double>()};
    }
    if (j.contains("training_time") && j.at("training_time").is_number())
        r.training_time = j.at("training_time").get<double>();
    r.validate();
    return r;
}

std::string format_record(const BenchmarkRecord& r) {
    json j = arch_to_json(r.arch);
    json m = json::object();
    for (std::size_t i = 0; i < kBudgets.size(); ++i)
        m[std::to_string(kBudgets[i])] = {{"val", r.metrics[i].validation}, {"test", r.metrics[i].test}};
    j["metrics"] = m;
    if (r.training_time) j["training_time"] = *r.training_time;
    return j.dump();
}

TabularBenchmark load_dataset(std::istream& is) {
    std::vector<BenchmarkRecord> records;
    std::string line;
    std::size_t lineno = 0;
    const SpaceConstraints c;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            BenchmarkRecord r = parse_record(line);
            if (!is_valid(r.arch, c)) throw ValidationError("invalid architecture");
            records.push_back(std::move(r));
        } catch (const json::exception& e) {
            throw ParseError(lineno, e.what());
        } catch (const StructuralError& e) {
            throw ParseError(lineno, e.what());
        } catch (const ValidationError& e) {
            throw ValidationError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return TabularBenchmark::from_records(std::move(records), true);
}

TabularBenchmark load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open " + path.string());
    return load_dataset(in);
}

std::vector<BenchmarkRecord> sample_records(const TabularBenchmark& b, std::size_t n, Rng& rng) {
    if (b.provenance() == Provenance::Synthetic) {
        std::vector<BenchmarkRecord> out;
        std::unordered_set<std::string> seen;
        std::size_t misses = 0;
        while (out.size() < n) {
            CellArchitecture arch = random_architecture(rng, b.constraints());
            if (!seen.insert(canonical_key(arch)).second) {
                if (++misses > kRetryBudget * std::max<std::size_t>(n, 1))
                    throw SamplingError("could not draw enough distinct architectures");
                continue;
            }
            out.push_back(b.lookup(arch));
        }
        return out;
    }

    if (n > b.size())
        throw ParameterError("requested " + std::to_string(n) + " samples but the benchmark holds " +
                             std::to_string(b.size()) + " records");
    std::vector<std::size_t> idx(b.size());
    std::iota(idx.begin(), idx.end(), 0);
    // Partial Fisher-Yates: the first n slots end up a uniform ordered sample.
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(uniform_index(rng, idx.size() - i));
        std::swap(idx[i], idx[j]);
    }
    std::vector<BenchmarkRecord> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(b.records()[idx[i]]);
    return out;
}

} // namespace nasinit
