#include "lsketch/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "lsketch/error.hpp"

namespace lsketch {

std::string format_real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

bool parse_real(std::string_view text, double& out) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
        text.remove_suffix(1);
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

DenseMatrix read_matrix_csv(std::istream& in, bool skip_header) {
    std::string line;
    std::size_t line_no = 0;
    if (skip_header) {
        std::getline(in, line);
        ++line_no;
    }
    std::vector<std::vector<double>> rows;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            const std::string_view field(line.data() + start,
                                         (comma == std::string::npos ? line.size() : comma) - start);
            double v = 0.0;
            if (!parse_real(field, v) || !std::isfinite(v)) {
                throw ParseFailure(ErrorKind::ParseError, rows.size() + 1, row.size() + 1,
                                   "line " + std::to_string(line_no) + ", field " +
                                       std::to_string(row.size() + 1) + ": '" +
                                       std::string(field) + "' is not a finite number");
            }
            row.push_back(v);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (rows.empty()) {
            width = row.size();
        } else if (row.size() != width) {
            throw ParseFailure(ErrorKind::RaggedRows, rows.size() + 1, row.size(),
                               "row " + std::to_string(rows.size() + 1) + " has " +
                                   std::to_string(row.size()) + " fields, expected " +
                                   std::to_string(width));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseFailure(ErrorKind::ParseError, 0, 0, "no data rows");

    DenseMatrix m(rows.size(), width);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < width; ++j) m(i, j) = rows[i][j];
    return m;
}

void write_matrix_csv(const DenseMatrix& m, std::ostream& out) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ',';
            out << format_real(m(i, j));
        }
        out << '\n';
    }
}

DenseMatrix load_matrix_csv(const std::filesystem::path& path, bool skip_header) {
    std::ifstream in(path);
    if (!in) raise(ErrorKind::IoError, "cannot open '" + path.string() + "' for reading");
    return read_matrix_csv(in, skip_header);
}

void save_matrix_csv(const DenseMatrix& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) raise(ErrorKind::IoError, "cannot open '" + path.string() + "' for writing");
    write_matrix_csv(m, out);
    if (!out) raise(ErrorKind::IoError, "write to '" + path.string() + "' failed");
}

Vector load_vector_csv(const std::filesystem::path& path, bool skip_header) {
    const DenseMatrix m = load_matrix_csv(path, skip_header);
    if (m.cols() != 1 && m.rows() != 1) {
        raise(ErrorKind::DimensionMismatch, "'" + path.string() + "' is not a single row or column");
    }
    return Vector(m.data().begin(), m.data().end());
}

void save_vector_csv(std::span<const double> v, const std::filesystem::path& path) {
    save_matrix_csv(DenseMatrix(v.size(), 1, Vector(v.begin(), v.end())), path);
}

}  // namespace lsketch
