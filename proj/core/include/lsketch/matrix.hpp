#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace lsketch {

/// Dense real vector. Plain std::vector so callers can hand in any contiguous
/// storage through std::span<const double>.
using Vector = std::vector<double>;

// =============================================================================
/// Dense real matrix with column-major storage.
///
/// Columns are contiguous, which is what the column-at-a-time Hadamard
/// transforms and Householder sweeps want. Shapes are always at least 1x1 and
/// entries are checked finite whenever a buffer is handed in from outside.
class DenseMatrix {
  public:
    /// rows x cols of zeros. Throws InvalidArgument on an empty shape.
    DenseMatrix(std::size_t rows, std::size_t cols);

    /// Adopts a column-major buffer of length rows*cols. Throws
    /// DimensionMismatch on a length mismatch and NonFinite on NaN/Inf.
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> col_major);

    /// Row-wise literal, e.g. `from_rows({{1, 2}, {3, 4}})`.
    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[j * rows_ + i]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[j * rows_ + i]; }

    std::span<double> col(std::size_t j) noexcept { return {data_.data() + j * rows_, rows_}; }
    std::span<const double> col(std::size_t j) const noexcept {
        return {data_.data() + j * rows_, rows_};
    }
    /// Copy of row i (rows are strided in column-major storage).
    Vector row(std::size_t i) const;

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    double frobenius_norm() const noexcept;
    DenseMatrix transpose() const;

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

  private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
double max_abs(std::span<const double> x);
bool all_finite(std::span<const double> x) noexcept;

/// x - y
Vector subtract(std::span<const double> x, std::span<const double> y);

/// A * x
Vector matvec(const DenseMatrix& a, std::span<const double> x);
/// A^T * x
Vector transpose_matvec(const DenseMatrix& a, std::span<const double> x);
/// A * B
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
/// A^T * B
DenseMatrix transpose_matmul(const DenseMatrix& a, const DenseMatrix& b);
/// A * A^T, exactly symmetric.
DenseMatrix outer_gram(const DenseMatrix& a);
/// A - B
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);

/// Largest entry of |A - B|.
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace lsketch
