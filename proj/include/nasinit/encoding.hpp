#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "nasinit/matrix.hpp"
#include "nasinit/search_space.hpp"

namespace nasinit {

/// Epoch budgets at which the tabular benchmark reports metrics.
inline constexpr std::array<int, 4> kBudgets{4, 12, 36, 108};

/// Position of `epochs` in kBudgets; throws ParameterError for other values.
std::size_t budget_index(int epochs);

/// Test accuracies at 4, 12, 36 and 108 epochs, each in [0, 1].
struct PerformanceQuad {
    std::array<double, 4> test{};

    /// Throws ValidationError when an entry leaves [0, 1].
    void validate() const;
};

enum class EncodingKind { Original, Binary };

std::string_view to_string(EncodingKind k);
EncodingKind parse_encoding(std::string_view name);

inline constexpr std::size_t kFrameNodes = 7;
inline constexpr std::size_t kFrameIntermediate = kFrameNodes - 2;
inline constexpr std::size_t kOriginalLength = kFrameNodes * kFrameNodes + kFrameIntermediate + 4;  // 58
inline constexpr std::size_t kExpandedNodes = 2 + kFrameIntermediate * 3;                            // 17
inline constexpr std::size_t kBinaryLength = kExpandedNodes * kExpandedNodes + kFrameIntermediate + 4; // 298

struct FeatureVector {
    EncodingKind kind;
    std::vector<double> values;

    std::size_t length() const noexcept { return values.size(); }
};

/// Row i, column j of an n x n matrix lands at i*n + j.
std::vector<double> flatten_row_major(const std::vector<std::vector<int>>& matrix);

/// Op codes used in both encodings; 0 is padding.
int op_code(OperationLabel op);

/// 7x7 zero-padded adjacency (cell in the top-left block, output kept at its
/// own index) + 5 op codes + 4 test accuracies.
FeatureVector encode_original(const CellArchitecture& arch, const PerformanceQuad& perf);

/// 17x17 op-expanded adjacency over [input, (node, op) x 15, output]
/// + 5 op codes + 4 test accuracies.
FeatureVector encode_binary(const CellArchitecture& arch, const PerformanceQuad& perf);

FeatureVector encode(EncodingKind kind, const CellArchitecture& arch, const PerformanceQuad& perf);

/// Column names of the header CSV variant.
std::vector<std::string> feature_columns(EncodingKind kind);

/// One row per model; the header line is optional.
void write_feature_csv(std::ostream& os, EncodingKind kind, const Matrix& features, bool header);

/// Reads either CSV variant (a non-numeric first line is treated as header).
Matrix read_feature_csv(std::istream& is);

} // namespace nasinit
