#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "nasinit/csv.hpp"
#include "nasinit/encoding.hpp"
#include "nasinit/error.hpp"

using namespace nasinit;
using Op = OperationLabel;

namespace {

const PerformanceQuad kPerf{{0.1, 0.2, 0.3, 0.4}};

// Independent construction of the op-expanded matrix from the definition:
// entry (p, q) is 1 iff the original edge exists and each intermediate
// endpoint carries exactly the op of its expanded slot.
std::vector<double> expanded_block(const CellArchitecture& a) {
    const int n = a.num_nodes();
    std::vector<double> out(17 * 17, 0.0);
    auto slots_of = [&](int node) {
        std::vector<int> s;
        if (node == 0) return std::vector<int>{0};
        if (node == n - 1) return std::vector<int>{16};
        const Op ops[3] = {Op::Conv1x1, Op::Conv3x3, Op::MaxPool3x3};
        for (int o = 0; o < 3; ++o)
            if (a.label(node) == ops[o]) s.push_back(1 + 3 * (node - 1) + o);
        return s;
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (a.edge(i, j))
                for (int p : slots_of(i))
                    for (int q : slots_of(j)) out[static_cast<std::size_t>(p * 17 + q)] = 1.0;
    return out;
}

} // namespace

TEST(FlattenRowMajor, SmallCases) {
    EXPECT_EQ(flatten_row_major({{0, 1}, {0, 0}}), (std::vector<double>{0, 1, 0, 0}));
    EXPECT_EQ(flatten_row_major(std::vector<std::vector<int>>(3, std::vector<int>(3, 0))), std::vector<double>(9, 0.0));
    std::vector<std::vector<int>> m(4, std::vector<int>(4, 0));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m[i][j] = (i * 7 + j * 3) % 2;
    const auto f = flatten_row_major(m);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) EXPECT_EQ(f[i * 4 + j], m[i][j]);
    EXPECT_THROW(flatten_row_major({{0, 1}, {0}}), ParameterError);
}

TEST(OpCode, Numbering) {
    EXPECT_EQ(op_code(Op::Conv1x1), 1);
    EXPECT_EQ(op_code(Op::Conv3x3), 2);
    EXPECT_EQ(op_code(Op::MaxPool3x3), 3);
    EXPECT_THROW(op_code(Op::Input), ParameterError);
}

TEST(EncodeOriginal, MinimalCell) {
    const PerformanceQuad zero{};
    const auto v = encode_original(CellArchitecture{}, zero).values;
    ASSERT_EQ(v.size(), 58u);
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(v[i], i == 1 ? 1.0 : 0.0) << i;
}

TEST(EncodeOriginal, LayoutOfSevenNodeCell) {
    std::vector<std::vector<int>> m(7, std::vector<int>(7, 0));
    m[0][1] = m[1][2] = m[2][3] = m[3][4] = m[4][5] = m[5][6] = m[0][6] = 1;
    const CellArchitecture a(m, {Op::Conv3x3, Op::Conv1x1, Op::MaxPool3x3, Op::Conv3x3, Op::Conv1x1});
    const auto fv = encode_original(a, kPerf);
    EXPECT_EQ(fv.kind, EncodingKind::Original);
    ASSERT_EQ(fv.length(), 58u);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) EXPECT_EQ(fv.values[i * 7 + j], m[i][j]);
    EXPECT_EQ(std::vector<double>(fv.values.begin() + 49, fv.values.begin() + 54),
              (std::vector<double>{2, 1, 3, 2, 1}));
    EXPECT_EQ(std::vector<double>(fv.values.begin() + 54, fv.values.end()), (std::vector<double>{0.1, 0.2, 0.3, 0.4}));
}

TEST(EncodeOriginal, OutputKeepsItsIndexUnderPadding) {
    const CellArchitecture a({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}}, {Op::MaxPool3x3});
    const auto v = encode_original(a, kPerf).values;
    EXPECT_EQ(v[0 * 7 + 1], 1.0);
    EXPECT_EQ(v[1 * 7 + 2], 1.0);
    EXPECT_EQ(v[1 * 7 + 6], 0.0);
    EXPECT_EQ(v[49], 3.0);
    EXPECT_EQ(v[50], 0.0);
}

TEST(EncodeOriginal, TooManyNodes) {
    std::vector<std::vector<int>> m(8, std::vector<int>(8, 0));
    m[0][7] = 1;
    const CellArchitecture a(m, std::vector<Op>(6, Op::Conv1x1));
    EXPECT_THROW(encode_original(a, kPerf), InvalidArchitectureError);
    EXPECT_THROW(encode_binary(a, kPerf), InvalidArchitectureError);
}

TEST(Encode, FixedLengthsOverSampledArchitectures) {
    Rng rng(3);
    for (int t = 0; t < 10000; ++t) {
        const CellArchitecture a = random_architecture(rng, {});
        EXPECT_EQ(encode(EncodingKind::Original, a, kPerf).length(), kOriginalLength);
        EXPECT_EQ(encode(EncodingKind::Binary, a, kPerf).length(), kBinaryLength);
    }
    EXPECT_EQ(kOriginalLength, 58u);
    EXPECT_EQ(kBinaryLength, 298u);
}

TEST(EncodeBinary, ExpandedBlockMatchesDefinitionAndEdgeCount) {
    Rng rng(4);
    for (int t = 0; t < 1000; ++t) {
        const CellArchitecture a = random_architecture(rng, {});
        const auto v = encode_binary(a, kPerf).values;
        const std::vector<double> block(v.begin(), v.begin() + 289);
        EXPECT_EQ(block, expanded_block(a));
        double ones = 0;
        for (double x : block) ones += x;
        EXPECT_EQ(ones, a.num_edges());
        const auto o = encode_original(a, kPerf).values;
        EXPECT_EQ(std::vector<double>(v.begin() + 289, v.end()), std::vector<double>(o.begin() + 49, o.end()));
    }
}

TEST(EncodeBinary, OpChangeChangesBlock) {
    const CellArchitecture a({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}}, {Op::Conv3x3});
    const auto v1 = encode_binary(a, kPerf).values;
    const auto v2 = encode_binary(a.with_op(1, Op::Conv1x1), kPerf).values;
    EXPECT_NE(std::vector<double>(v1.begin(), v1.begin() + 289), std::vector<double>(v2.begin(), v2.begin() + 289));
}

TEST(Encode, PureAndPerfOnlyInTail) {
    Rng rng(5);
    for (int t = 0; t < 200; ++t) {
        const CellArchitecture a = random_architecture(rng, {});
        const PerformanceQuad p{{uniform_unit(rng), uniform_unit(rng), uniform_unit(rng), uniform_unit(rng)}};
        const auto v1 = encode_original(a, kPerf).values;
        const auto v2 = encode_original(a, p).values;
        EXPECT_EQ(v1, encode_original(a, kPerf).values);
        EXPECT_EQ(std::vector<double>(v1.begin(), v1.begin() + 54), std::vector<double>(v2.begin(), v2.begin() + 54));
        for (int i = 0; i < 4; ++i) EXPECT_EQ(v2[54 + i], p.test[i]);
    }
}

TEST(PerformanceQuad, Bounds) {
    EXPECT_NO_THROW(kPerf.validate());
    PerformanceQuad bad{{0.1, 1.2, 0.3, 0.4}};
    EXPECT_THROW(bad.validate(), ValidationError);
    bad.test[1] = std::nan("");
    EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(Budget, Index) {
    EXPECT_EQ(budget_index(4), 0u);
    EXPECT_EQ(budget_index(108), 3u);
    EXPECT_THROW(budget_index(50), ParameterError);
}

TEST(EncodingKind, Parse) {
    EXPECT_EQ(parse_encoding("short"), EncodingKind::Original);
    EXPECT_EQ(parse_encoding("long"), EncodingKind::Binary);
    EXPECT_THROW(parse_encoding("dense"), ParameterError);
}

TEST(FeatureCsv, ColumnsAndRoundTrip) {
    const auto cols = feature_columns(EncodingKind::Original);
    ASSERT_EQ(cols.size(), 58u);
    EXPECT_EQ(cols.front(), "a0");
    EXPECT_EQ(cols[48], "a48");
    EXPECT_EQ(cols[49], "op0");
    EXPECT_EQ(cols[53], "op4");
    EXPECT_EQ(cols[54], "acc4");
    EXPECT_EQ(cols.back(), "acc108");
    EXPECT_EQ(feature_columns(EncodingKind::Binary).size(), 298u);

    Rng rng(6);
    Matrix m;
    for (int t = 0; t < 20; ++t) {
        const PerformanceQuad p{{uniform_unit(rng), uniform_unit(rng), uniform_unit(rng), uniform_unit(rng)}};
        m.append_row(encode_original(random_architecture(rng, {}), p).values);
    }
    for (bool header : {true, false}) {
        std::stringstream ss;
        write_feature_csv(ss, EncodingKind::Original, m, header);
        const Matrix back = read_feature_csv(ss);
        EXPECT_EQ(back, m);
    }
}

TEST(FeatureCsv, MalformedRowReportsLine) {
    std::stringstream ss("1,2,3\n4,x,6\n");
    try {
        read_feature_csv(ss);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    std::stringstream ragged("1,2,3\n4,5\n");
    EXPECT_THROW(read_feature_csv(ragged), ParseError);
}

TEST(Csv, DoubleFormattingRoundTrips) {
    for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5, 0.0, 123456789.125}) EXPECT_EQ(parse_double(format_double(x)), x);
    EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_TRUE(std::isinf(parse_double("inf")));
    EXPECT_THROW(parse_double("1.5abc"), ParameterError);
    EXPECT_EQ(split_csv_line("a,b,,c"), (std::vector<std::string>{"a", "b", "", "c"}));
}

TEST(MatrixType, AppendRowChecksWidth) {
    Matrix m = Matrix::from_rows({{1, 2}, {3, 4}});
    EXPECT_EQ(m.rows(), 2u);
    EXPECT_EQ(m(1, 0), 3.0);
    const std::vector<double> bad{1, 2, 3};
    EXPECT_THROW(m.append_row(bad), ParameterError);
    EXPECT_THROW(Matrix::from_rows({{1, 2}, {3}}), ParameterError);
}
