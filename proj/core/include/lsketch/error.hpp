#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lsketch {

enum class ErrorKind {
    InvalidArgument,
    DimensionMismatch,
    NonFinite,
    RankDeficient,
    ConvergenceFailure,
    NotPowerOfTwo,
    IndexOutOfRange,
    InvalidEpsilon,
    InvalidSparsity,
    ZeroRhs,
    InvalidGamma,
    ZeroMatrix,
    FrobeniusTooSmall,
    SpectralNormTooLarge,
    InvalidSpec,
    ConfigError,
    IoError,
    ParseError,
    RaggedRows,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library. `kind()` identifies the failure class;
/// the message carries the human-readable context.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

/// Failure while reading delimited text. Rows and columns are 1-based; 0 means
/// "not applicable".
class ParseFailure : public Error {
  public:
    ParseFailure(ErrorKind kind, std::size_t row, std::size_t col, const std::string& message);

    std::size_t row() const noexcept { return row_; }
    std::size_t col() const noexcept { return col_; }

  private:
    std::size_t row_;
    std::size_t col_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const char* message) {
    if (!condition) raise(kind, message);
}

}  // namespace lsketch
