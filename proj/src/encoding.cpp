#include "nasinit/encoding.hpp"

#include <istream>
#include <ostream>

#include "nasinit/csv.hpp"
#include "nasinit/error.hpp"

namespace nasinit {

std::size_t budget_index(int epochs) {
    for (std::size_t i = 0; i < kBudgets.size(); ++i)
        if (kBudgets[i] == epochs) return i;
    throw ParameterError("budget must be one of 4, 12, 36, 108 (got " + std::to_string(epochs) + ")");
}

void PerformanceQuad::validate() const {
    for (std::size_t i = 0; i < test.size(); ++i)
        if (!(test[i] >= 0.0 && test[i] <= 1.0))
            throw ValidationError("test accuracy at " + std::to_string(kBudgets[i]) +
                                  " epochs outside [0, 1]");
}

std::string_view to_string(EncodingKind k) {
    return k == EncodingKind::Original ? "original" : "binary";
}

EncodingKind parse_encoding(std::string_view name) {
    if (name == "original" || name == "short") return EncodingKind::Original;
    if (name == "binary" || name == "long") return EncodingKind::Binary;
    throw ParameterError("unknown encoding '" + std::string(name) + "'");
}

std::vector<double> flatten_row_major(const std::vector<std::vector<int>>& matrix) {
    std::vector<double> out;
    out.reserve(matrix.size() * matrix.size());
    for (const auto& row : matrix) {
        if (row.size() != matrix.size()) throw ParameterError("matrix is not square");
        for (int v : row) out.push_back(static_cast<double>(v));
    }
    return out;
}

int op_code(OperationLabel op) {
    switch (op) {
    case OperationLabel::Conv1x1: return 1;
    case OperationLabel::Conv3x3: return 2;
    case OperationLabel::MaxPool3x3: return 3;
    default: throw ParameterError("terminal labels have no op code");
    }
}

namespace {

void check_frame(const CellArchitecture& arch) {
    if (arch.num_nodes() > static_cast<int>(kFrameNodes))
        throw InvalidArchitectureError("cell has " + std::to_string(arch.num_nodes()) +
                                       " nodes; encodings support at most 7");
}

void append_tail(std::vector<double>& v, const CellArchitecture& arch, const PerformanceQuad& perf) {
    for (std::size_t i = 0; i < kFrameIntermediate; ++i)
        v.push_back(i < arch.ops().size() ? op_code(arch.ops()[i]) : 0.0);
    for (double acc : perf.test) v.push_back(acc);
}

} // namespace

FeatureVector encode_original(const CellArchitecture& arch, const PerformanceQuad& perf) {
    check_frame(arch);
    std::vector<std::vector<int>> frame(kFrameNodes, std::vector<int>(kFrameNodes, 0));
    for (int i = 0; i < arch.num_nodes(); ++i)
        for (int j = 0; j < arch.num_nodes(); ++j) frame[i][j] = arch.edge(i, j);

    FeatureVector fv{EncodingKind::Original, flatten_row_major(frame)};
    append_tail(fv.values, arch, perf);
    return fv;
}

FeatureVector encode_binary(const CellArchitecture& arch, const PerformanceQuad& perf) {
    check_frame(arch);
    const int n = arch.num_nodes();
    // Expanded index: input 0, (node i, op code c) -> 1 + 3(i-1) + (c-1), output 16.
    auto expanded = [&](int node) -> int {
        if (node == 0) return 0;
        if (node == n - 1) return static_cast<int>(kExpandedNodes) - 1;
        return 1 + 3 * (node - 1) + (op_code(arch.label(node)) - 1);
    };

    std::vector<std::vector<int>> frame(kExpandedNodes, std::vector<int>(kExpandedNodes, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (arch.edge(i, j)) frame[expanded(i)][expanded(j)] = 1;

    FeatureVector fv{EncodingKind::Binary, flatten_row_major(frame)};
    append_tail(fv.values, arch, perf);
    return fv;
}

FeatureVector encode(EncodingKind kind, const CellArchitecture& arch, const PerformanceQuad& perf) {
    return kind == EncodingKind::Original ? encode_original(arch, perf) : encode_binary(arch, perf);
}

std::vector<std::string> feature_columns(EncodingKind kind) {
    std::vector<std::string> cols;
    const std::size_t cells = kind == EncodingKind::Original ? kFrameNodes * kFrameNodes
                                                             : kExpandedNodes * kExpandedNodes;
    const char* prefix = kind == EncodingKind::Original ? "a" : "e";
    for (std::size_t i = 0; i < cells; ++i) cols.push_back(prefix + std::to_string(i));
    for (std::size_t i = 0; i < kFrameIntermediate; ++i) cols.push_back("op" + std::to_string(i));
    for (int b : kBudgets) cols.push_back("acc" + std::to_string(b));
    return cols;
}

void write_feature_csv(std::ostream& os, EncodingKind kind, const Matrix& features, bool header) {
    if (header) os << join_csv(feature_columns(kind)) << '\n';
    for (std::size_t r = 0; r < features.rows(); ++r) {
        auto row = features.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) os << ',';
            os << format_double(row[c]);
        }
        os << '\n';
    }
}

Matrix read_feature_csv(std::istream& is) {
    Matrix m;
    std::string line;
    std::size_t lineno = 0;
    std::vector<double> values;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        values.clear();
        try {
            for (const auto& f : fields) values.push_back(parse_double(f));
        } catch (const ParameterError& e) {
            if (lineno == 1) continue; // header line
            throw ParseError(lineno, e.what());
        }
        try {
            m.append_row(values);
        } catch (const ParameterError& e) {
            throw ParseError(lineno, e.what());
        }
    }
    return m;
}

} // namespace nasinit
