#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nasinit/random.hpp"

namespace nasinit {

/// Node labels of a cell. Only the first three are searchable; Input and
/// Output mark the terminal nodes and never appear in an ops list.
enum class OperationLabel : std::uint8_t { Conv3x3, Conv1x1, MaxPool3x3, Input, Output };

std::string_view to_string(OperationLabel op);
/// Parses "conv3x3" / "conv1x1" / "maxpool3x3" (the conv labels also with a
/// "-bn-relu" suffix). Throws StructuralError otherwise.
OperationLabel parse_operation(std::string_view name);
bool is_searchable(OperationLabel op) noexcept;

struct SpaceConstraints {
    int max_nodes = 7;
    int max_edges = 9;
    std::vector<OperationLabel> ops{OperationLabel::Conv3x3, OperationLabel::Conv1x1,
                                    OperationLabel::MaxPool3x3};

    /// Throws ParameterError when the limits are degenerate.
    void validate() const;
};

/// A feed-forward cell: node 0 is the input, node n-1 the output and nodes
/// 1..n-2 carry one operation label each. The adjacency matrix is stored
/// densely; upper-triangularity is a validity property, not a structural one,
/// so that `is_valid` can reject it instead of the constructor throwing.
class CellArchitecture {
public:
    /// The smallest cell: input wired straight to output.
    CellArchitecture() : n_(2), adj_{0, 1, 0, 0} {}

    /// Throws StructuralError unless the matrix is square with side >= 2,
    /// entries are 0/1 and `ops` has exactly n-2 searchable labels.
    CellArchitecture(const std::vector<std::vector<int>>& adjacency,
                     std::vector<OperationLabel> ops);

    int num_nodes() const noexcept { return n_; }
    int num_edges() const noexcept;
    bool edge(int from, int to) const { return adj_[index(from, to)] != 0; }
    const std::vector<OperationLabel>& ops() const noexcept { return ops_; }
    /// Label of any node, including the Input/Output terminals.
    OperationLabel label(int node) const;

    std::vector<std::vector<int>> adjacency() const;
    bool strictly_upper_triangular() const noexcept;
    /// True iff a directed path leads from node 0 to node n-1.
    bool has_input_output_path() const;

    CellArchitecture with_edge_toggled(int from, int to) const;
    CellArchitecture with_op(int node, OperationLabel op) const;

    friend bool operator==(const CellArchitecture&, const CellArchitecture&) = default;

private:
    std::size_t index(int from, int to) const {
        return static_cast<std::size_t>(from) * static_cast<std::size_t>(n_) +
               static_cast<std::size_t>(to);
    }

    int n_ = 0;
    std::vector<std::uint8_t> adj_;
    std::vector<OperationLabel> ops_;

    friend CellArchitecture prune(const CellArchitecture&);
};

/// Node/edge limits, strict upper-triangularity and input->output connectivity.
/// Labels outside `c.ops` also make the cell invalid.
bool is_valid(const CellArchitecture& arch, const SpaceConstraints& c = {});

/// Keeps only nodes that are reachable from the input and reach the output.
/// Idempotent. Throws InvalidArchitectureError when no input->output path
/// exists or the matrix is not strictly upper-triangular.
CellArchitecture prune(const CellArchitecture& arch);

/// Isomorphism-invariant key of prune(arch): Weisfeiler-Lehman style label
/// refinement over in/out neighbourhoods, then an order-free fold. Stable
/// across processes (no std::hash involved).
std::string canonical_key(const CellArchitecture& arch);

/// Edge count of the longest input->output path of prune(arch).
int longest_path(const CellArchitecture& arch);

int count_op(const CellArchitecture& arch, OperationLabel op);

inline constexpr int kRetryBudget = 10000;

/// Rejection sampler over the max_nodes frame; returns the pruned cell.
/// Throws SamplingError after kRetryBudget rejected draws.
CellArchitecture random_architecture(Rng& rng, const SpaceConstraints& c = {});

/// Toggles one adjacency entry chosen uniformly among those whose result is
/// valid and prunes to something different from prune(arch). The returned
/// cell is NOT pruned, so disconnected nodes can be reconnected later.
/// Throws MutationError when no such entry exists.
CellArchitecture mutate_hidden_state(const CellArchitecture& arch, Rng& rng,
                                     const SpaceConstraints& c = {});

/// Relabels one uniformly chosen intermediate node with a uniformly chosen
/// different label. Throws MutationError for cells without intermediate nodes.
CellArchitecture mutate_operation(const CellArchitecture& arch, Rng& rng,
                                  const SpaceConstraints& c = {});

enum class MutationPolicy {
    BothSteps, // hidden-state then operation; a failing step is skipped
    OneOf,     // one of the two, uniformly; falls back to the other on failure
};

std::string_view to_string(MutationPolicy p);
MutationPolicy parse_mutation_policy(std::string_view name);

/// Throws MutationError only when neither sub-mutation applies.
CellArchitecture mutate(const CellArchitecture& arch, Rng& rng,
                        MutationPolicy policy = MutationPolicy::BothSteps,
                        const SpaceConstraints& c = {});

} // namespace nasinit
