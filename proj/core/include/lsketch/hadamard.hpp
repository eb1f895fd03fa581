#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lsketch/matrix.hpp"

namespace lsketch {

bool is_power_of_two(std::size_t n) noexcept;
/// Smallest power of two >= n (n = 0 gives 1).
std::size_t next_power_of_two(std::size_t n) noexcept;

/// Unnormalized Walsh-Hadamard transform H_n x, in place.
///
/// Butterflies run with stride n/2, n/4, ..., 1 so that the first stage splits
/// on the leading index bit. partial_rht_rows relies on this ordering to be
/// bit-exact with the full transform.
void fwht_inplace(std::span<double> x);

/// n^{-1/2} H_n x. Throws NotPowerOfTwo.
Vector fwht_normalized(std::span<const double> x);

// =============================================================================
/// Random +-1 diagonal D of the randomized Hadamard transform HD. Immutable
/// once drawn; `seed()` reproduces it through sample_signs.
class SignDiagonal {
  public:
    /// Adopts explicit signs; each must be +1 or -1 (InvalidArgument otherwise).
    SignDiagonal(std::vector<std::int8_t> signs, std::uint64_t seed);

    std::size_t size() const noexcept { return signs_.size(); }
    std::span<const std::int8_t> signs() const noexcept { return signs_; }
    std::int8_t operator[](std::size_t i) const noexcept { return signs_[i]; }
    std::uint64_t seed() const noexcept { return seed_; }

    /// The all-plus diagonal (D = I).
    static SignDiagonal identity(std::size_t n);

    friend bool operator==(const SignDiagonal&, const SignDiagonal&) = default;

  private:
    std::vector<std::int8_t> signs_;
    std::uint64_t seed_;
};

/// n independent fair signs, deterministic in seed.
SignDiagonal sample_signs(std::size_t n, std::uint64_t seed);

/// H D A, column by column.
DenseMatrix apply_rht(const DenseMatrix& a, const SignDiagonal& d);
/// H D x.
Vector apply_rht(std::span<const double> x, const SignDiagonal& d);

/// The rows of H D A listed in `rows` (any order, duplicates allowed), without
/// forming the whole transform: the index set is split on its leading bit and
/// each half recurses on a half-length transform of (top + bottom) or
/// (top - bottom), so the cost is O(n log |rows|) per column. Sub-blocks where
/// more than a quarter of the outputs are requested fall back to a full FWHT.
/// Bit-identical to slicing apply_rht.
DenseMatrix partial_rht_rows(const DenseMatrix& a, const SignDiagonal& d,
                             std::span<const std::size_t> rows);
/// Entries of H D x listed in `rows`.
Vector partial_rht_rows(std::span<const double> x, const SignDiagonal& d,
                        std::span<const std::size_t> rows);

/// A and b padded with zero rows up to a power of two. The least-squares
/// solution and optimal residual are unchanged by the padding.
struct PaddedProblem {
    std::size_t original_n;
    std::size_t padded_n;
    DenseMatrix a_pad;
    Vector b_pad;
};

PaddedProblem pad_pow2(const DenseMatrix& a, std::span<const double> b);
/// Zero-row padding of a single matrix to padded_n rows.
DenseMatrix pad_rows(const DenseMatrix& a, std::size_t padded_n);

}  // namespace lsketch
