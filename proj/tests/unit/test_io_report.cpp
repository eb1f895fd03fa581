#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>
#include <string>

#include "lsketch/error.hpp"
#include "lsketch/matrix_io.hpp"
#include "lsketch/problems.hpp"
#include "lsketch/report.hpp"

using namespace lsketch;

namespace {

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("lsketch_test_" + name);
}

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) n += (c == '\n');
    return n;
}

ReportRow sample_row(std::uint64_t seed) {
    ReportRow r;
    r.spec = {ProblemKind::CoherentSpiked, 1024, 8, 10.0, 0.9, seed};
    r.method = Method::Projection;
    r.epsilon = 0.5;
    r.r = 0;
    r.k = 128;
    r.q = 0.1 + 1.0 / 3.0;
    r.seed = seed;
    r.residual = 1.2345678901234567;
    r.z_exact = 1.0 / 7.0;
    r.rel_error = r.residual / r.z_exact;
    r.forward_error = 3e-17;
    r.residual_bound_ok = true;
    r.forward_bound_ok = false;
    r.retries = 1;
    r.timings = {0.001, 0.002, 0.0003, 0.0041};
    return r;
}

}  // namespace

TEST(MatrixCsv, ParsesSimpleInput) {
    std::istringstream in("1,2\n3,4");
    const DenseMatrix m = read_matrix_csv(in);
    EXPECT_EQ(m, DenseMatrix::from_rows({{1, 2}, {3, 4}}));
}

TEST(MatrixCsv, SkipsHeaderOnRequest) {
    std::istringstream in("a,b\n1,2\n");
    EXPECT_EQ(read_matrix_csv(in, true), DenseMatrix::from_rows({{1, 2}}));
}

TEST(MatrixCsv, RaggedRowsReportsRow) {
    std::istringstream in("1,2\n3");
    try {
        read_matrix_csv(in);
        FAIL() << "expected RaggedRows";
    } catch (const ParseFailure& e) {
        EXPECT_EQ(e.kind(), ErrorKind::RaggedRows);
        EXPECT_EQ(e.row(), 2u);
    }
}

TEST(MatrixCsv, ParseErrorReportsRowAndColumn) {
    std::istringstream in("1,2\n3,x4\n");
    try {
        read_matrix_csv(in);
        FAIL() << "expected ParseError";
    } catch (const ParseFailure& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ParseError);
        EXPECT_EQ(e.row(), 2u);
        EXPECT_EQ(e.col(), 2u);
    }
}

TEST(MatrixCsv, SaveLoadBitwiseRoundTrip) {
    DenseMatrix m = gaussian_matrix(13, 4, 5);
    m(0, 0) = 1e-300;
    m(1, 0) = -0.0;
    m(2, 0) = 1.0 / 3.0;
    m(3, 0) = 123456789012345678.0;
    const auto path = temp_path("matrix.csv");
    save_matrix_csv(m, path);
    const DenseMatrix back = load_matrix_csv(path);
    EXPECT_EQ(back, m);
    std::filesystem::remove(path);
}

TEST(MatrixCsv, VectorRoundTripAndIoError) {
    const Vector v{1.5, -2.25, 1e-17};
    const auto path = temp_path("vector.csv");
    save_vector_csv(v, path);
    EXPECT_EQ(load_vector_csv(path), v);
    std::filesystem::remove(path);
    try {
        load_matrix_csv(temp_path("does_not_exist.csv"));
        FAIL() << "expected IoError";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IoError);
    }
}

TEST(FormatReal, RoundTripsSeventeenDigits) {
    for (double v : {0.1, 1.0 / 3.0, 2.0 / 3.0, 1e-310, 6.02214076e23, -7.5}) {
        double back = 0.0;
        ASSERT_TRUE(parse_real(format_real(v), back));
        EXPECT_EQ(back, v);
    }
    double x = 0.0;
    EXPECT_TRUE(parse_real("  2.5 ", x));
    EXPECT_EQ(x, 2.5);
    EXPECT_FALSE(parse_real("2.5abc", x));
    EXPECT_FALSE(parse_real("", x));
}

TEST(CsvRecord, QuotingRoundTrip) {
    EXPECT_EQ(quote_csv_field("plain"), "plain");
    EXPECT_EQ(quote_csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(quote_csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    const auto f = split_csv_record("x,\"a,b\",\"say \"\"hi\"\"\",");
    ASSERT_EQ(f.size(), 4u);
    EXPECT_EQ(f[1], "a,b");
    EXPECT_EQ(f[2], "say \"hi\"");
    EXPECT_EQ(f[3], "");
}

TEST(Report, EmptyCsvIsHeaderOnly) {
    std::ostringstream out;
    emit_report({}, ReportFormat::Csv, out);
    EXPECT_EQ(count_lines(out.str()), 1u);
    std::istringstream in(out.str());
    EXPECT_TRUE(parse_report(in, ReportFormat::Csv).rows.empty());
}

TEST(Report, TwoCellsGiveThreeLines) {
    ExperimentReport r{{sample_row(1), sample_row(2)}};
    std::ostringstream out;
    emit_report(r, ReportFormat::Csv, out);
    EXPECT_EQ(count_lines(out.str()), 3u);
}

TEST(Report, CsvRoundTrip) {
    ExperimentReport r{{sample_row(1), sample_row(2)}};
    r.rows[1].method = Method::Exact;
    r.rows[1].spec.kind = ProblemKind::IllConditioned;
    std::ostringstream out;
    emit_report(r, ReportFormat::Csv, out);
    std::istringstream in(out.str());
    EXPECT_EQ(parse_report(in, ReportFormat::Csv), r);
}

TEST(Report, JsonRoundTripAndSchemaVersion) {
    ExperimentReport r{{sample_row(3), sample_row(4)}};
    r.rows[0].rel_error = std::numeric_limits<double>::infinity();
    std::ostringstream out;
    emit_report(r, ReportFormat::Json, out);
    EXPECT_NE(out.str().find("\"schema_version\": 1"), std::string::npos);
    std::istringstream in(out.str());
    EXPECT_EQ(parse_report(in, ReportFormat::Json), r);
}

TEST(Report, TimingsCanBeOmitted) {
    ExperimentReport r{{sample_row(5)}};
    std::ostringstream out;
    emit_report(r, ReportFormat::Csv, out, false);
    std::istringstream in(out.str());
    const auto back = parse_report(in, ReportFormat::Csv);
    EXPECT_EQ(back.rows.at(0).timings.total, 0.0);
}

TEST(Report, RejectsMalformedInput) {
    std::istringstream bad_header("nope\n");
    EXPECT_THROW(parse_report(bad_header, ReportFormat::Csv), ParseFailure);
    std::istringstream bad_json("{\"schema_version\":2,\"rows\":[]}");
    EXPECT_THROW(parse_report(bad_json, ReportFormat::Json), Error);
    EXPECT_THROW(parse_method("magic"), Error);
    EXPECT_EQ(parse_method("cgnr"), Method::Cgnr);
    EXPECT_EQ(parse_report_format("json"), ReportFormat::Json);
}

TEST(Report, WritesToPath) {
    const auto path = temp_path("report.json");
    emit_report({{sample_row(6)}}, ReportFormat::Json, path);
    EXPECT_TRUE(std::filesystem::exists(path));
    std::filesystem::remove(path);
    EXPECT_THROW(emit_report({}, ReportFormat::Csv, "/nonexistent-dir/x.csv"), Error);
}
