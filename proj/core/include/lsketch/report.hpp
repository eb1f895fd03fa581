#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "lsketch/problems.hpp"
#include "lsketch/solver.hpp"

namespace lsketch {

enum class Method { Exact, Sampling, Projection, Cgnr };

std::string_view to_string(Method m) noexcept;
Method parse_method(std::string_view name);

enum class ReportFormat { Csv, Json };

ReportFormat parse_report_format(std::string_view name);

/// One (problem, method, seed) cell of an experiment.
struct ReportRow {
    ProblemSpec spec;
    Method method = Method::Exact;
    double epsilon = 0.0;
    std::size_t r = 0;
    std::size_t k = 0;
    double q = 0.0;
    std::uint64_t seed = 0;
    double residual = 0.0;       ///< ||A x - b||
    double z_exact = 0.0;        ///< min_x ||A x - b||
    double rel_error = 0.0;      ///< residual / z_exact (1 when both are 0)
    double forward_error = 0.0;  ///< ||x - x_opt||
    bool residual_bound_ok = false;  ///< residual <= (1 + eps) Z
    bool forward_bound_ok = false;   ///< forward error <= sqrt(eps) kappa sqrt(gamma^-2 - 1) ||x_opt||
    std::size_t retries = 0;
    PhaseTimings timings;

    friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct ExperimentReport {
    std::vector<ReportRow> rows;

    friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

inline constexpr int kReportSchemaVersion = 1;

/// CSV: header plus one RFC 4180 line per row. JSON: {"schema_version": 1,
/// "rows": [...]}. Reals use 17 significant digits so a parse gives back the
/// same bits. With `include_timings = false` the wall-clock columns are
/// written as zeros, making reruns byte-identical.
void emit_report(const ExperimentReport& report, ReportFormat format, std::ostream& out,
                 bool include_timings = true);
void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::filesystem::path& path, bool include_timings = true);

ExperimentReport parse_report(std::istream& in, ReportFormat format);

/// Splits one RFC 4180 record (quotes around fields, "" as an escaped quote).
std::vector<std::string> split_csv_record(std::string_view line);
/// Quotes a field when it contains a comma, quote, or line break.
std::string quote_csv_field(std::string_view field);

}  // namespace lsketch
