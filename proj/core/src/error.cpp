#include "lsketch/error.hpp"

namespace lsketch {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::RankDeficient: return "RankDeficient";
        case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorKind::NotPowerOfTwo: return "NotPowerOfTwo";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::InvalidEpsilon: return "InvalidEpsilon";
        case ErrorKind::InvalidSparsity: return "InvalidSparsity";
        case ErrorKind::ZeroRhs: return "ZeroRhs";
        case ErrorKind::InvalidGamma: return "InvalidGamma";
        case ErrorKind::ZeroMatrix: return "ZeroMatrix";
        case ErrorKind::FrobeniusTooSmall: return "FrobeniusTooSmall";
        case ErrorKind::SpectralNormTooLarge: return "SpectralNormTooLarge";
        case ErrorKind::InvalidSpec: return "InvalidSpec";
        case ErrorKind::ConfigError: return "ConfigError";
        case ErrorKind::IoError: return "IoError";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::RaggedRows: return "RaggedRows";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

ParseFailure::ParseFailure(ErrorKind kind, std::size_t row, std::size_t col,
                           const std::string& message)
    : Error(kind, message), row_(row), col_(col) {}

void raise(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace lsketch
