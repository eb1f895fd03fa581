#include "lsketch/hadamard.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lsketch/error.hpp"
#include "lsketch/random.hpp"

namespace lsketch {

namespace {

void require_pow2(std::size_t n, const char* who) {
    if (!is_power_of_two(n)) {
        raise(ErrorKind::NotPowerOfTwo, std::string(who) + ": length " + std::to_string(n) +
                                            " is not a power of two");
    }
}

void require_signs(std::size_t n, const SignDiagonal& d, const char* who) {
    if (d.size() != n) {
        raise(ErrorKind::DimensionMismatch, std::string(who) + ": sign diagonal has length " +
                                                std::to_string(d.size()) + ", expected " +
                                                std::to_string(n));
    }
}

void apply_signs(std::span<const double> x, const SignDiagonal& d, std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = d[i] < 0 ? -x[i] : x[i];
}

// Evaluates the entries `idx` (sorted, unique, offset by `base`) of H_m x into
// out[0 .. idx.size()). `scratch` must hold at least m doubles; the half-length
// intermediate for this level lives in its first m/2 slots and deeper levels
// use what follows.
void pruned_fwht(std::span<const double> x, std::span<const std::size_t> idx, std::size_t base,
                 double* out, std::span<double> scratch) {
    const std::size_t m = x.size();
    if (m == 1) {
        out[0] = x[0];
        return;
    }
    if (4 * idx.size() > m) {
        auto buf = scratch.first(m);
        std::copy(x.begin(), x.end(), buf.begin());
        fwht_inplace(buf);
        for (std::size_t t = 0; t < idx.size(); ++t) out[t] = buf[idx[t] - base];
        return;
    }
    const std::size_t half = m / 2;
    const auto split = static_cast<std::size_t>(
        std::lower_bound(idx.begin(), idx.end(), base + half) - idx.begin());
    auto top = x.first(half);
    auto bottom = x.subspan(half);
    auto level = scratch.first(half);
    auto deeper = scratch.subspan(half);

    if (split > 0) {
        for (std::size_t i = 0; i < half; ++i) level[i] = top[i] + bottom[i];
        pruned_fwht(level, idx.first(split), base, out, deeper);
    }
    if (split < idx.size()) {
        for (std::size_t i = 0; i < half; ++i) level[i] = top[i] - bottom[i];
        pruned_fwht(level, idx.subspan(split), base + half, out + split, deeper);
    }
}

// Sorted unique row set plus, for every requested row, its slot in that set.
struct RowPlan {
    std::vector<std::size_t> unique;
    std::vector<std::size_t> slot;
};

RowPlan plan_rows(std::span<const std::size_t> rows, std::size_t n) {
    RowPlan p;
    p.unique.assign(rows.begin(), rows.end());
    for (std::size_t r : rows) {
        if (r >= n) {
            raise(ErrorKind::IndexOutOfRange,
                  "row " + std::to_string(r) + " out of range for n = " + std::to_string(n));
        }
    }
    std::sort(p.unique.begin(), p.unique.end());
    p.unique.erase(std::unique(p.unique.begin(), p.unique.end()), p.unique.end());
    p.slot.resize(rows.size());
    for (std::size_t t = 0; t < rows.size(); ++t) {
        p.slot[t] = static_cast<std::size_t>(
            std::lower_bound(p.unique.begin(), p.unique.end(), rows[t]) - p.unique.begin());
    }
    return p;
}

}  // namespace

bool is_power_of_two(std::size_t n) noexcept { return n > 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) noexcept {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fwht_inplace(std::span<double> x) {
    const std::size_t n = x.size();
    require_pow2(n, "fwht");
    for (std::size_t h = n / 2; h >= 1; h /= 2) {
        for (std::size_t i = 0; i < n; i += 2 * h) {
            for (std::size_t j = i; j < i + h; ++j) {
                const double a = x[j];
                const double b = x[j + h];
                x[j] = a + b;
                x[j + h] = a - b;
            }
        }
    }
}

Vector fwht_normalized(std::span<const double> x) {
    Vector out(x.begin(), x.end());
    fwht_inplace(out);
    const double scale = 1.0 / std::sqrt(static_cast<double>(out.size()));
    for (double& v : out) v *= scale;
    return out;
}

SignDiagonal::SignDiagonal(std::vector<std::int8_t> signs, std::uint64_t seed)
    : signs_(std::move(signs)), seed_(seed) {
    require(!signs_.empty(), ErrorKind::InvalidArgument, "sign diagonal must be non-empty");
    for (auto s : signs_)
        require(s == 1 || s == -1, ErrorKind::InvalidArgument, "signs must be +1 or -1");
}

SignDiagonal SignDiagonal::identity(std::size_t n) {
    return SignDiagonal(std::vector<std::int8_t>(n, 1), 0);
}

SignDiagonal sample_signs(std::size_t n, std::uint64_t seed) {
    require(n >= 1, ErrorKind::InvalidArgument, "sample_signs: n must be >= 1");
    RandomStream rng(seed, "rht-signs");
    std::vector<std::int8_t> signs(n);
    for (auto& s : signs) s = static_cast<std::int8_t>(rng.sign());
    return SignDiagonal(std::move(signs), seed);
}

DenseMatrix apply_rht(const DenseMatrix& a, const SignDiagonal& d) {
    const std::size_t n = a.rows();
    require_pow2(n, "apply_rht");
    require_signs(n, d, "apply_rht");
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    DenseMatrix out(n, a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        auto c = out.col(j);
        apply_signs(a.col(j), d, c);
        fwht_inplace(c);
        for (double& v : c) v *= scale;
    }
    return out;
}

Vector apply_rht(std::span<const double> x, const SignDiagonal& d) {
    DenseMatrix m(x.size(), 1, Vector(x.begin(), x.end()));
    auto out = apply_rht(m, d);
    return Vector(out.data().begin(), out.data().end());
}

DenseMatrix partial_rht_rows(const DenseMatrix& a, const SignDiagonal& d,
                             std::span<const std::size_t> rows) {
    const std::size_t n = a.rows();
    require_pow2(n, "partial_rht_rows");
    require_signs(n, d, "partial_rht_rows");
    require(!rows.empty(), ErrorKind::InvalidArgument, "partial_rht_rows: empty row set");
    const RowPlan plan = plan_rows(rows, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));

    Vector signed_col(n);
    Vector scratch(n);
    Vector values(plan.unique.size());
    DenseMatrix out(rows.size(), a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        apply_signs(a.col(j), d, signed_col);
        pruned_fwht(signed_col, plan.unique, 0, values.data(), scratch);
        auto oc = out.col(j);
        for (std::size_t t = 0; t < rows.size(); ++t) oc[t] = values[plan.slot[t]] * scale;
    }
    return out;
}

Vector partial_rht_rows(std::span<const double> x, const SignDiagonal& d,
                        std::span<const std::size_t> rows) {
    DenseMatrix m(x.size(), 1, Vector(x.begin(), x.end()));
    auto out = partial_rht_rows(m, d, rows);
    return Vector(out.data().begin(), out.data().end());
}

DenseMatrix pad_rows(const DenseMatrix& a, std::size_t padded_n) {
    require(padded_n >= a.rows(), ErrorKind::InvalidArgument, "pad_rows: cannot shrink");
    if (padded_n == a.rows()) return a;
    DenseMatrix out(padded_n, a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) std::ranges::copy(a.col(j), out.col(j).begin());
    return out;
}

PaddedProblem pad_pow2(const DenseMatrix& a, std::span<const double> b) {
    require(b.size() == a.rows(), ErrorKind::DimensionMismatch, "pad_pow2: b length != rows");
    const std::size_t padded = next_power_of_two(a.rows());
    Vector b_pad(padded, 0.0);
    std::ranges::copy(b, b_pad.begin());
    return PaddedProblem{a.rows(), padded, pad_rows(a, padded), std::move(b_pad)};
}

}  // namespace lsketch
