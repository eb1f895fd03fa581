#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "lsketch/matrix.hpp"

namespace lsketch {

/// Shortest-safe decimal for a double: 17 significant digits, so that parsing
/// the text gives back the same bits.
std::string format_real(double v);
/// Parses a whole field as a double; false on trailing garbage or empty input.
bool parse_real(std::string_view text, double& out);

/// Rectangular numeric CSV, one matrix row per line. With `skip_header` the
/// first line is ignored. Errors carry 1-based positions: ParseError(row, col)
/// for a bad field and RaggedRows(row) for a row of the wrong width.
DenseMatrix read_matrix_csv(std::istream& in, bool skip_header = false);
void write_matrix_csv(const DenseMatrix& m, std::ostream& out);

DenseMatrix load_matrix_csv(const std::filesystem::path& path, bool skip_header = false);
void save_matrix_csv(const DenseMatrix& m, const std::filesystem::path& path);

/// A vector is stored as a one-column CSV (or read from a one-row one).
Vector load_vector_csv(const std::filesystem::path& path, bool skip_header = false);
void save_vector_csv(std::span<const double> v, const std::filesystem::path& path);

}  // namespace lsketch
