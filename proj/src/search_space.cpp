#include "nasinit/search_space.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "nasinit/error.hpp"

namespace nasinit {

std::string_view to_string(OperationLabel op) {
    switch (op) {
    case OperationLabel::Conv3x3: return "conv3x3";
    case OperationLabel::Conv1x1: return "conv1x1";
    case OperationLabel::MaxPool3x3: return "maxpool3x3";
    case OperationLabel::Input: return "input";
    case OperationLabel::Output: return "output";
    }
    return "?";
}

OperationLabel parse_operation(std::string_view name) {
    // The "-bn-relu" spellings are what NAS-Bench-101 exports use.
    if (name == "conv3x3" || name == "conv3x3-bn-relu") return OperationLabel::Conv3x3;
    if (name == "conv1x1" || name == "conv1x1-bn-relu") return OperationLabel::Conv1x1;
    if (name == "maxpool3x3") return OperationLabel::MaxPool3x3;
    throw StructuralError("unknown operation label '" + std::string(name) + "'");
}

bool is_searchable(OperationLabel op) noexcept {
    return op == OperationLabel::Conv3x3 || op == OperationLabel::Conv1x1 ||
           op == OperationLabel::MaxPool3x3;
}

void SpaceConstraints::validate() const {
    if (max_nodes < 2) throw ParameterError("max_nodes must be >= 2");
    if (max_edges < 1) throw ParameterError("max_edges must be >= 1");
    if (ops.empty()) throw ParameterError("operation set is empty");
    for (auto op : ops)
        if (!is_searchable(op)) throw ParameterError("terminal label in operation set");
}

CellArchitecture::CellArchitecture(const std::vector<std::vector<int>>& adjacency,
                                   std::vector<OperationLabel> ops)
    : n_(static_cast<int>(adjacency.size())), ops_(std::move(ops)) {
    if (n_ < 2) throw StructuralError("cell needs at least input and output nodes");
    adj_.reserve(static_cast<std::size_t>(n_) * n_);
    for (const auto& row : adjacency) {
        if (static_cast<int>(row.size()) != n_)
            throw StructuralError("adjacency matrix is not square");
        for (int v : row) {
            if (v != 0 && v != 1) throw StructuralError("adjacency entries must be 0 or 1");
            adj_.push_back(static_cast<std::uint8_t>(v));
        }
    }
    if (static_cast<int>(ops_.size()) != n_ - 2)
        throw StructuralError("ops list has " + std::to_string(ops_.size()) +
                              " labels, expected " + std::to_string(n_ - 2));
    for (auto op : ops_)
        if (!is_searchable(op)) throw StructuralError("input/output label on intermediate node");
}

int CellArchitecture::num_edges() const noexcept {
    return static_cast<int>(std::count(adj_.begin(), adj_.end(), std::uint8_t{1}));
}

OperationLabel CellArchitecture::label(int node) const {
    if (node == 0) return OperationLabel::Input;
    if (node == n_ - 1) return OperationLabel::Output;
    return ops_.at(static_cast<std::size_t>(node - 1));
}

std::vector<std::vector<int>> CellArchitecture::adjacency() const {
    std::vector<std::vector<int>> m(n_, std::vector<int>(n_, 0));
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) m[i][j] = adj_[index(i, j)];
    return m;
}

bool CellArchitecture::strictly_upper_triangular() const noexcept {
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j <= i; ++j)
            if (adj_[index(i, j)]) return false;
    return true;
}

namespace {

// Forward reachability from node 0; valid for any digraph, not just DAGs.
std::vector<bool> reachable_from_input(const CellArchitecture& a) {
    const int n = a.num_nodes();
    std::vector<bool> seen(n, false);
    std::vector<int> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v = 0; v < n; ++v)
            if (a.edge(u, v) && !seen[v]) {
                seen[v] = true;
                stack.push_back(v);
            }
    }
    return seen;
}

std::vector<bool> reaching_output(const CellArchitecture& a) {
    const int n = a.num_nodes();
    std::vector<bool> seen(n, false);
    std::vector<int> stack{n - 1};
    seen[n - 1] = true;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u = 0; u < n; ++u)
            if (a.edge(u, v) && !seen[u]) {
                seen[u] = true;
                stack.push_back(u);
            }
    }
    return seen;
}

} // namespace

bool CellArchitecture::has_input_output_path() const {
    return reachable_from_input(*this)[n_ - 1];
}

CellArchitecture CellArchitecture::with_edge_toggled(int from, int to) const {
    CellArchitecture copy = *this;
    auto& e = copy.adj_[index(from, to)];
    e = e ? 0 : 1;
    return copy;
}

CellArchitecture CellArchitecture::with_op(int node, OperationLabel op) const {
    if (node < 1 || node > n_ - 2) throw ParameterError("not an intermediate node");
    if (!is_searchable(op)) throw ParameterError("terminal label on intermediate node");
    CellArchitecture copy = *this;
    copy.ops_[static_cast<std::size_t>(node - 1)] = op;
    return copy;
}

bool is_valid(const CellArchitecture& arch, const SpaceConstraints& c) {
    if (arch.num_nodes() > c.max_nodes) return false;
    if (arch.num_edges() > c.max_edges) return false;
    if (!arch.strictly_upper_triangular()) return false;
    for (auto op : arch.ops())
        if (std::find(c.ops.begin(), c.ops.end(), op) == c.ops.end()) return false;
    return arch.has_input_output_path();
}

CellArchitecture prune(const CellArchitecture& arch) {
    if (!arch.strictly_upper_triangular())
        throw InvalidArchitectureError("adjacency matrix is not strictly upper-triangular");
    auto fwd = reachable_from_input(arch);
    if (!fwd[arch.num_nodes() - 1])
        throw InvalidArchitectureError("no path from input to output");
    auto bwd = reaching_output(arch);

    std::vector<int> keep;
    for (int v = 0; v < arch.num_nodes(); ++v)
        if (fwd[v] && bwd[v]) keep.push_back(v);

    CellArchitecture out;
    out.n_ = static_cast<int>(keep.size());
    out.adj_.assign(static_cast<std::size_t>(out.n_) * out.n_, 0);
    for (int i = 0; i < out.n_; ++i)
        for (int j = 0; j < out.n_; ++j) out.adj_[out.index(i, j)] = arch.edge(keep[i], keep[j]);
    for (int k = 1; k + 1 < out.n_; ++k) out.ops_.push_back(arch.label(keep[k]));
    return out;
}

namespace {

std::string hex64(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::uint64_t fold_sorted(std::vector<std::uint64_t> hashes, std::uint64_t seed) {
    std::sort(hashes.begin(), hashes.end());
    std::uint64_t h = seed;
    for (auto x : hashes) h = fnv1a(hex64(x) + ",", h);
    return h;
}

} // namespace

std::string canonical_key(const CellArchitecture& arch) {
    const CellArchitecture p = prune(arch);
    const int n = p.num_nodes();
    std::vector<std::uint64_t> h(n);
    for (int v = 0; v < n; ++v) h[v] = fnv1a(to_string(p.label(v)));

    const int rounds = SpaceConstraints{}.max_nodes;
    for (int r = 0; r < rounds; ++r) {
        std::vector<std::uint64_t> next(n);
        for (int v = 0; v < n; ++v) {
            std::vector<std::uint64_t> in, out;
            for (int u = 0; u < n; ++u) {
                if (p.edge(u, v)) in.push_back(h[u]);
                if (p.edge(v, u)) out.push_back(h[u]);
            }
            std::uint64_t x = fold_sorted(std::move(in), fnv1a("in|"));
            x = fold_sorted(std::move(out), fnv1a("|out|", x));
            next[v] = fnv1a(hex64(h[v]), x);
        }
        h = std::move(next);
    }
    return hex64(fold_sorted(h, fnv1a("cell|")));
}

int longest_path(const CellArchitecture& arch) {
    const CellArchitecture p = prune(arch);
    const int n = p.num_nodes();
    // Topological order is the index order; every pruned node is reachable.
    std::vector<int> depth(n, 0);
    for (int v = 1; v < n; ++v)
        for (int u = 0; u < v; ++u)
            if (p.edge(u, v)) depth[v] = std::max(depth[v], depth[u] + 1);
    return depth[n - 1];
}

int count_op(const CellArchitecture& arch, OperationLabel op) {
    return static_cast<int>(std::count(arch.ops().begin(), arch.ops().end(), op));
}

CellArchitecture random_architecture(Rng& rng, const SpaceConstraints& c) {
    c.validate();
    const int n = c.max_nodes;
    for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
        std::vector<std::vector<int>> m(n, std::vector<int>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) m[i][j] = coin_flip(rng) ? 1 : 0;
        std::vector<OperationLabel> ops(static_cast<std::size_t>(n - 2));
        for (auto& op : ops) op = c.ops[uniform_index(rng, c.ops.size())];

        CellArchitecture raw(m, std::move(ops));
        if (!raw.has_input_output_path()) continue;
        CellArchitecture pruned = prune(raw);
        if (is_valid(pruned, c)) return pruned;
    }
    throw SamplingError("random_architecture: no valid cell after " +
                        std::to_string(kRetryBudget) + " attempts");
}

CellArchitecture mutate_hidden_state(const CellArchitecture& arch, Rng& rng,
                                     const SpaceConstraints& c) {
    if (!is_valid(arch, c)) throw InvalidArchitectureError("mutation parent is not valid");
    const CellArchitecture parent = prune(arch);

    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < arch.num_nodes(); ++i)
        for (int j = i + 1; j < arch.num_nodes(); ++j) slots.emplace_back(i, j);

    // Drawing toggles without replacement accepts each admissible entry with
    // the same probability as retrying fresh draws, but terminates after at
    // most n(n-1)/2 tries.
    for (std::size_t remaining = slots.size(); remaining > 0; --remaining) {
        std::size_t pick = uniform_index(rng, remaining);
        std::swap(slots[pick], slots[remaining - 1]);
        auto [i, j] = slots[remaining - 1];
        CellArchitecture child = arch.with_edge_toggled(i, j);
        if (!is_valid(child, c)) continue;
        if (prune(child) == parent) continue;
        return child;
    }
    throw MutationError("hidden-state mutation: every single-edge toggle is inadmissible");
}

CellArchitecture mutate_operation(const CellArchitecture& arch, Rng& rng,
                                  const SpaceConstraints& c) {
    if (!is_valid(arch, c)) throw InvalidArchitectureError("mutation parent is not valid");
    const int intermediate = arch.num_nodes() - 2;
    if (intermediate < 1) throw MutationError("operation mutation: no intermediate nodes");
    if (c.ops.size() < 2) throw MutationError("operation mutation: single-label operation set");

    const int node = 1 + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(intermediate)));
    const OperationLabel current = arch.label(node);
    std::vector<OperationLabel> others;
    for (auto op : c.ops)
        if (op != current) others.push_back(op);
    return arch.with_op(node, others[uniform_index(rng, others.size())]);
}

std::string_view to_string(MutationPolicy p) {
    return p == MutationPolicy::BothSteps ? "both-steps" : "one-of";
}

MutationPolicy parse_mutation_policy(std::string_view name) {
    if (name == "both-steps") return MutationPolicy::BothSteps;
    if (name == "one-of") return MutationPolicy::OneOf;
    throw ParameterError("unknown mutation policy '" + std::string(name) + "'");
}

CellArchitecture mutate(const CellArchitecture& arch, Rng& rng, MutationPolicy policy,
                        const SpaceConstraints& c) {
    if (policy == MutationPolicy::BothSteps) {
        bool changed = false;
        CellArchitecture child = arch;
        try {
            child = mutate_hidden_state(child, rng, c);
            changed = true;
        } catch (const MutationError&) {
        }
        try {
            child = mutate_operation(child, rng, c);
            changed = true;
        } catch (const MutationError&) {
        }
        if (!changed) throw MutationError("mutate: neither hidden-state nor operation mutation applies");
        return child;
    }

    const bool hidden_first = coin_flip(rng);
    auto hidden = [&] { return mutate_hidden_state(arch, rng, c); };
    auto operation = [&] { return mutate_operation(arch, rng, c); };
    try {
        return hidden_first ? hidden() : operation();
    } catch (const MutationError&) {
    }
    try {
        return hidden_first ? operation() : hidden();
    } catch (const MutationError&) {
        throw MutationError("mutate: neither hidden-state nor operation mutation applies");
    }
}

} // namespace nasinit
