#include "lsketch/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lsketch/error.hpp"

namespace lsketch {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols) {
    require(rows >= 1 && cols >= 1, ErrorKind::InvalidArgument, "matrix shape must be at least 1x1");
    data_.assign(rows * cols, 0.0);
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> col_major)
    : rows_(rows), cols_(cols), data_(std::move(col_major)) {
    require(rows >= 1 && cols >= 1, ErrorKind::InvalidArgument, "matrix shape must be at least 1x1");
    if (data_.size() != rows * cols) {
        raise(ErrorKind::DimensionMismatch,
              "buffer of length " + std::to_string(data_.size()) + " for a " +
                  std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
    }
    require(all_finite(data_), ErrorKind::NonFinite, "matrix entries must be finite");
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t m = rows.size();
    require(m >= 1, ErrorKind::InvalidArgument, "from_rows needs at least one row");
    const std::size_t n = rows.begin()->size();
    std::vector<double> buf(m * n);
    std::size_t i = 0;
    for (const auto& r : rows) {
        require(r.size() == n, ErrorKind::DimensionMismatch, "from_rows: ragged rows");
        std::size_t j = 0;
        for (double v : r) buf[j++ * m + i] = v;
        ++i;
    }
    return DenseMatrix(m, n, std::move(buf));
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
    return out;
}

Vector DenseMatrix::row(std::size_t i) const {
    Vector out(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out[j] = (*this)(i, j);
    return out;
}

double DenseMatrix::frobenius_norm() const noexcept { return norm2(data_); }

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix out(cols_, rows_);
    for (std::size_t j = 0; j < cols_; ++j)
        for (std::size_t i = 0; i < rows_; ++i) out(j, i) = (*this)(i, j);
    return out;
}

double dot(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size(), ErrorKind::DimensionMismatch, "dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double norm2(std::span<const double> x) {
    // Scaled accumulation keeps tiny and huge entries from under/overflowing.
    double scale = 0.0;
    double ssq = 1.0;
    for (double v : x) {
        if (v == 0.0) continue;
        const double a = std::abs(v);
        if (scale < a) {
            ssq = 1.0 + ssq * (scale / a) * (scale / a);
            scale = a;
        } else {
            ssq += (a / scale) * (a / scale);
        }
    }
    return scale * std::sqrt(ssq);
}

double max_abs(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

bool all_finite(std::span<const double> x) noexcept {
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

Vector subtract(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size(), ErrorKind::DimensionMismatch, "subtract: length mismatch");
    Vector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
    return out;
}

Vector matvec(const DenseMatrix& a, std::span<const double> x) {
    require(x.size() == a.cols(), ErrorKind::DimensionMismatch, "matvec: x length != cols");
    Vector out(a.rows(), 0.0);
    for (std::size_t j = 0; j < a.cols(); ++j) {
        const auto c = a.col(j);
        const double xj = x[j];
        for (std::size_t i = 0; i < a.rows(); ++i) out[i] += c[i] * xj;
    }
    return out;
}

Vector transpose_matvec(const DenseMatrix& a, std::span<const double> x) {
    require(x.size() == a.rows(), ErrorKind::DimensionMismatch,
            "transpose_matvec: x length != rows");
    Vector out(a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) out[j] = dot(a.col(j), x);
    return out;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    require(a.cols() == b.rows(), ErrorKind::DimensionMismatch, "matmul: inner dimensions differ");
    DenseMatrix out(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        auto oc = out.col(j);
        for (std::size_t p = 0; p < a.cols(); ++p) {
            const double bpj = b(p, j);
            if (bpj == 0.0) continue;
            const auto ac = a.col(p);
            for (std::size_t i = 0; i < a.rows(); ++i) oc[i] += ac[i] * bpj;
        }
    }
    return out;
}

DenseMatrix transpose_matmul(const DenseMatrix& a, const DenseMatrix& b) {
    require(a.rows() == b.rows(), ErrorKind::DimensionMismatch,
            "transpose_matmul: row counts differ");
    DenseMatrix out(a.cols(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (std::size_t i = 0; i < a.cols(); ++i) out(i, j) = dot(a.col(i), b.col(j));
    return out;
}

DenseMatrix outer_gram(const DenseMatrix& a) {
    const std::size_t m = a.rows();
    DenseMatrix out(m, m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i <= j; ++i) {
            double s = 0.0;
            for (std::size_t p = 0; p < a.cols(); ++p) s += a(i, p) * a(j, p);
            out(i, j) = s;
            out(j, i) = s;
        }
    }
    return out;
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorKind::DimensionMismatch,
            "subtract: shapes differ");
    DenseMatrix out(a.rows(), a.cols());
    auto o = out.data();
    auto x = a.data();
    auto y = b.data();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] - y[i];
    return out;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorKind::DimensionMismatch,
            "max_abs_diff: shapes differ");
    double m = 0.0;
    auto x = a.data();
    auto y = b.data();
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

}  // namespace lsketch
