#include "lsketch/report.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include <json.hpp>

#include "lsketch/error.hpp"
#include "lsketch/matrix_io.hpp"

namespace lsketch {

namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 23> kColumns = {
    "kind",          "n",           "d",
    "kappa_target",  "gamma_target", "problem_seed",
    "method",        "epsilon",     "r",
    "k",             "q",           "seed",
    "residual",      "z_exact",     "rel_error",
    "forward_error", "residual_bound_ok", "forward_bound_ok",
    "retries",       "t_transform", "t_sketch_apply",
    "t_small_solve", "t_total",
};

template <typename Int>
Int parse_int(const std::string& s, std::size_t row, std::size_t col) {
    Int v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ParseFailure(ErrorKind::ParseError, row, col, "'" + s + "' is not an integer");
    }
    return v;
}

double parse_double(const std::string& s, std::size_t row, std::size_t col) {
    double v = 0.0;
    if (!parse_real(s, v)) {
        throw ParseFailure(ErrorKind::ParseError, row, col, "'" + s + "' is not a number");
    }
    return v;
}

bool parse_bool(const std::string& s, std::size_t row, std::size_t col) {
    if (s == "1" || s == "true") return true;
    if (s == "0" || s == "false") return false;
    throw ParseFailure(ErrorKind::ParseError, row, col, "'" + s + "' is not a boolean");
}

json row_to_json(const ReportRow& r, bool timings) {
    return json{
        {"kind", std::string(to_string(r.spec.kind))},
        {"n", r.spec.n},
        {"d", r.spec.d},
        {"kappa_target", r.spec.kappa_target},
        {"gamma_target", r.spec.gamma_target},
        {"problem_seed", r.spec.seed},
        {"method", std::string(to_string(r.method))},
        {"epsilon", r.epsilon},
        {"r", r.r},
        {"k", r.k},
        {"q", r.q},
        {"seed", r.seed},
        {"residual", r.residual},
        {"z_exact", r.z_exact},
        {"rel_error", r.rel_error},
        {"forward_error", r.forward_error},
        {"residual_bound_ok", r.residual_bound_ok},
        {"forward_bound_ok", r.forward_bound_ok},
        {"retries", r.retries},
        {"timings",
         {{"transform", timings ? r.timings.transform : 0.0},
          {"sketch_apply", timings ? r.timings.sketch_apply : 0.0},
          {"small_solve", timings ? r.timings.small_solve : 0.0},
          {"total", timings ? r.timings.total : 0.0}}},
    };
}

// Non-finite reals are written as null by the JSON encoder.
double real_or_inf(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

ReportRow row_from_json(const json& j) {
    ReportRow r;
    r.spec.kind = parse_problem_kind(j.at("kind").get<std::string>());
    r.spec.n = j.at("n").get<std::size_t>();
    r.spec.d = j.at("d").get<std::size_t>();
    r.spec.kappa_target = j.at("kappa_target").get<double>();
    r.spec.gamma_target = j.at("gamma_target").get<double>();
    r.spec.seed = j.at("problem_seed").get<std::uint64_t>();
    r.method = parse_method(j.at("method").get<std::string>());
    r.epsilon = j.at("epsilon").get<double>();
    r.r = j.at("r").get<std::size_t>();
    r.k = j.at("k").get<std::size_t>();
    r.q = j.at("q").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.residual = real_or_inf(j.at("residual"));
    r.z_exact = real_or_inf(j.at("z_exact"));
    r.rel_error = real_or_inf(j.at("rel_error"));
    r.forward_error = real_or_inf(j.at("forward_error"));
    r.residual_bound_ok = j.at("residual_bound_ok").get<bool>();
    r.forward_bound_ok = j.at("forward_bound_ok").get<bool>();
    r.retries = j.at("retries").get<std::size_t>();
    const json& t = j.at("timings");
    r.timings.transform = t.at("transform").get<double>();
    r.timings.sketch_apply = t.at("sketch_apply").get<double>();
    r.timings.small_solve = t.at("small_solve").get<double>();
    r.timings.total = t.at("total").get<double>();
    return r;
}

void write_csv(const ExperimentReport& report, std::ostream& out, bool timings) {
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
        if (c > 0) out << ',';
        out << kColumns[c];
    }
    out << '\n';
    auto real = [&](double v) { return format_real(v); };
    for (const auto& r : report.rows) {
        const std::array<std::string, kColumns.size()> fields = {
            quote_csv_field(to_string(r.spec.kind)),
            std::to_string(r.spec.n),
            std::to_string(r.spec.d),
            real(r.spec.kappa_target),
            real(r.spec.gamma_target),
            std::to_string(r.spec.seed),
            quote_csv_field(to_string(r.method)),
            real(r.epsilon),
            std::to_string(r.r),
            std::to_string(r.k),
            real(r.q),
            std::to_string(r.seed),
            real(r.residual),
            real(r.z_exact),
            real(r.rel_error),
            real(r.forward_error),
            r.residual_bound_ok ? "1" : "0",
            r.forward_bound_ok ? "1" : "0",
            std::to_string(r.retries),
            real(timings ? r.timings.transform : 0.0),
            real(timings ? r.timings.sketch_apply : 0.0),
            real(timings ? r.timings.small_solve : 0.0),
            real(timings ? r.timings.total : 0.0),
        };
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (c > 0) out << ',';
            out << fields[c];
        }
        out << '\n';
    }
}

ExperimentReport read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseFailure(ErrorKind::ParseError, 1, 0, "missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv_record(line);
    if (header.size() != kColumns.size()) {
        throw ParseFailure(ErrorKind::ParseError, 1, 0, "unexpected report header");
    }
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
        if (header[c] != kColumns[c]) {
            throw ParseFailure(ErrorKind::ParseError, 1, c + 1,
                               "expected column '" + std::string(kColumns[c]) + "'");
        }
    }

    ExperimentReport report;
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_csv_record(line);
        if (f.size() != kColumns.size()) {
            throw ParseFailure(ErrorKind::RaggedRows, row_no, f.size(), "wrong field count");
        }
        ReportRow r;
        r.spec.kind = parse_problem_kind(f[0]);
        r.spec.n = parse_int<std::size_t>(f[1], row_no, 2);
        r.spec.d = parse_int<std::size_t>(f[2], row_no, 3);
        r.spec.kappa_target = parse_double(f[3], row_no, 4);
        r.spec.gamma_target = parse_double(f[4], row_no, 5);
        r.spec.seed = parse_int<std::uint64_t>(f[5], row_no, 6);
        r.method = parse_method(f[6]);
        r.epsilon = parse_double(f[7], row_no, 8);
        r.r = parse_int<std::size_t>(f[8], row_no, 9);
        r.k = parse_int<std::size_t>(f[9], row_no, 10);
        r.q = parse_double(f[10], row_no, 11);
        r.seed = parse_int<std::uint64_t>(f[11], row_no, 12);
        r.residual = parse_double(f[12], row_no, 13);
        r.z_exact = parse_double(f[13], row_no, 14);
        r.rel_error = parse_double(f[14], row_no, 15);
        r.forward_error = parse_double(f[15], row_no, 16);
        r.residual_bound_ok = parse_bool(f[16], row_no, 17);
        r.forward_bound_ok = parse_bool(f[17], row_no, 18);
        r.retries = parse_int<std::size_t>(f[18], row_no, 19);
        r.timings.transform = parse_double(f[19], row_no, 20);
        r.timings.sketch_apply = parse_double(f[20], row_no, 21);
        r.timings.small_solve = parse_double(f[21], row_no, 22);
        r.timings.total = parse_double(f[22], row_no, 23);
        report.rows.push_back(r);
    }
    return report;
}

}  // namespace

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::Exact: return "exact";
        case Method::Sampling: return "sampling";
        case Method::Projection: return "projection";
        case Method::Cgnr: return "cgnr";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    if (name == "exact") return Method::Exact;
    if (name == "sampling") return Method::Sampling;
    if (name == "projection") return Method::Projection;
    if (name == "cgnr") return Method::Cgnr;
    raise(ErrorKind::InvalidArgument, "unknown method '" + std::string(name) + "'");
}

ReportFormat parse_report_format(std::string_view name) {
    if (name == "csv") return ReportFormat::Csv;
    if (name == "json") return ReportFormat::Json;
    raise(ErrorKind::InvalidArgument, "unknown report format '" + std::string(name) + "'");
}

std::string quote_csv_field(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_csv_record(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

void emit_report(const ExperimentReport& report, ReportFormat format, std::ostream& out,
                 bool include_timings) {
    if (format == ReportFormat::Csv) {
        write_csv(report, out, include_timings);
        return;
    }
    json rows = json::array();
    for (const auto& r : report.rows) rows.push_back(row_to_json(r, include_timings));
    const json doc = {{"schema_version", kReportSchemaVersion}, {"rows", std::move(rows)}};
    out << doc.dump(2) << '\n';
}

void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::filesystem::path& path, bool include_timings) {
    std::ofstream out(path);
    if (!out) raise(ErrorKind::IoError, "cannot open '" + path.string() + "' for writing");
    emit_report(report, format, out, include_timings);
    if (!out) raise(ErrorKind::IoError, "write to '" + path.string() + "' failed");
}

ExperimentReport parse_report(std::istream& in, ReportFormat format) {
    if (format == ReportFormat::Csv) return read_csv(in);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseFailure(ErrorKind::ParseError, 0, e.byte, e.what());
    }
    try {
        if (doc.at("schema_version").get<int>() != kReportSchemaVersion) {
            raise(ErrorKind::ParseError, "unsupported report schema_version");
        }
        ExperimentReport report;
        for (const auto& row : doc.at("rows")) report.rows.push_back(row_from_json(row));
        return report;
    } catch (const json::exception& e) {
        raise(ErrorKind::ParseError, std::string("malformed report: ") + e.what());
    }
}

}  // namespace lsketch
