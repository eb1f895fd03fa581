#include "lsketch/sketches.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lsketch/error.hpp"
#include "lsketch/random.hpp"

namespace lsketch {

namespace {

constexpr double kDenseDrawThreshold = 0.02;

void require_dims(std::size_t n, std::size_t d) {
    require(d >= 1 && d <= n, ErrorKind::InvalidArgument, "need 1 <= d <= n");
}

double log40nd(std::size_t n, std::size_t d) {
    return std::log(40.0 * static_cast<double>(n) * static_cast<double>(d));
}

double q_formula(std::size_t n, std::size_t d, double c_q) {
    const double nn = static_cast<double>(n);
    const double dd = static_cast<double>(d);
    return c_q * dd * log40nd(n, d) / nn * (2.0 * std::log(nn) + 16.0 * dd + 16.0);
}

std::size_t ceil_count(double x) {
    if (!(x < static_cast<double>(std::numeric_limits<std::size_t>::max())))
        return std::numeric_limits<std::size_t>::max();
    return static_cast<std::size_t>(std::ceil(x));
}

}  // namespace

SamplingSize sampling_size_r(std::size_t n, std::size_t d, double eps) {
    require_dims(n, d);
    require(eps > 0.0 && eps < 1.0, ErrorKind::InvalidEpsilon, "sampling needs eps in (0, 1)");
    const double dd = static_cast<double>(d);
    const double l = log40nd(n, d);
    const double embed = 48.0 * 48.0 * dd * l * std::log(100.0 * 100.0 * dd * l);
    const double cross = 40.0 * dd * l / eps;
    const std::size_t r = ceil_count(std::max(embed, cross));
    if (r > n) return {n, true};
    return {r, false};
}

ProjectionSize projection_params(std::size_t n, std::size_t d, double eps, double c_q,
                                 double c_k) {
    require_dims(n, d);
    require(eps > 0.0 && eps < 0.5, ErrorKind::InvalidEpsilon, "projection needs eps in (0, 1/2)");
    require(c_q > 0.0 && c_k > 0.0, ErrorKind::InvalidArgument, "c_q and c_k must be positive");
    const double dd = static_cast<double>(d);
    ProjectionSize out{q_formula(n, d, c_q), 0, false};
    if (out.q >= 1.0) {
        out.q = 1.0;
        out.clamped = true;
    }
    out.k = ceil_count(std::max(c_k * (118.0 * 118.0 * dd + 98.0 * 98.0), 60.0 * dd / eps));
    if (out.k > n) {
        out.k = n;
        out.clamped = true;
    }
    return out;
}

std::size_t practical_sampling_size(std::size_t n, std::size_t d) {
    require_dims(n, d);
    return std::min(n, ceil_count(4.0 * static_cast<double>(d) * log40nd(n, d)));
}

ProjectionSize practical_projection_params(std::size_t n, std::size_t d, double eps) {
    require_dims(n, d);
    require(eps > 0.0 && eps < 1.0, ErrorKind::InvalidEpsilon, "eps must lie in (0, 1)");
    ProjectionSize out{q_formula(n, d, 0.1), 0, false};
    out.q = std::min(1.0, out.q);
    out.k = std::min(n, ceil_count(4.0 * static_cast<double>(d) / eps));
    return out;
}

SketchParams theory_params(std::size_t n, std::size_t d, double eps, double c_q, double c_k) {
    SketchParams p = practical_params(n, d, eps);
    p.mode = SizingMode::TheoryFormula;
    p.c_q = c_q;
    p.c_k = c_k;
    const auto s = sampling_size_r(n, d, eps);
    p.r = s.r;
    p.theory_clamped = s.clamped;
    if (eps < 0.5) {
        const auto pr = projection_params(n, d, eps, c_q, c_k);
        p.k = pr.k;
        p.q = pr.q;
        p.theory_clamped = p.theory_clamped || pr.clamped;
    }
    return p;
}

SketchParams practical_params(std::size_t n, std::size_t d, double eps) {
    SketchParams p;
    p.mode = SizingMode::UserOverride;
    p.epsilon = eps;
    p.r = practical_sampling_size(n, d);
    const auto pr = practical_projection_params(n, d, eps);
    p.k = std::max(pr.k, d);
    p.q = pr.q;
    return p;
}

SamplingPlan draw_sampling_plan(std::size_t n, std::size_t r, std::uint64_t seed) {
    require(n >= 1 && r >= 1, ErrorKind::InvalidArgument, "sampling plan needs n, r >= 1");
    RandomStream rng(seed, "row-sampling");
    SamplingPlan plan;
    plan.n = n;
    plan.r = r;
    plan.scale = std::sqrt(static_cast<double>(n) / static_cast<double>(r));
    plan.indices.resize(r);
    for (auto& i : plan.indices) i = static_cast<std::size_t>(rng.below(n));
    return plan;
}

SamplingPlan full_sampling_plan(std::size_t n) {
    require(n >= 1, ErrorKind::InvalidArgument, "sampling plan needs n >= 1");
    SamplingPlan plan;
    plan.n = n;
    plan.r = n;
    plan.scale = 1.0;
    plan.indices.resize(n);
    for (std::size_t i = 0; i < n; ++i) plan.indices[i] = i;
    return plan;
}

DenseMatrix apply_sampling(const SamplingPlan& plan, const DenseMatrix& m) {
    if (m.rows() != plan.n) {
        raise(ErrorKind::DimensionMismatch, "apply_sampling: matrix has " +
                                                std::to_string(m.rows()) + " rows, plan expects " +
                                                std::to_string(plan.n));
    }
    DenseMatrix out(plan.r, m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) {
        const auto src = m.col(j);
        auto dst = out.col(j);
        for (std::size_t t = 0; t < plan.r; ++t) dst[t] = plan.scale * src[plan.indices[t]];
    }
    return out;
}

Vector apply_sampling(const SamplingPlan& plan, std::span<const double> x) {
    require(x.size() == plan.n, ErrorKind::DimensionMismatch, "apply_sampling: length mismatch");
    Vector out(plan.r);
    for (std::size_t t = 0; t < plan.r; ++t) out[t] = plan.scale * x[plan.indices[t]];
    return out;
}

SparseProjection::SparseProjection(std::size_t k, std::size_t n, double q,
                                   std::vector<SparseEntry> entries, std::uint64_t seed)
    : k_(k), n_(n), q_(q), entries_(std::move(entries)), seed_(seed) {
    require(k >= 1 && n >= 1, ErrorKind::InvalidArgument, "sparse projection needs k, n >= 1");
    require(q > 0.0 && q <= 1.0, ErrorKind::InvalidSparsity, "q must lie in (0, 1]");
    magnitude_ = 1.0 / std::sqrt(static_cast<double>(k) * q);
    for (std::size_t t = 0; t < entries_.size(); ++t) {
        const auto& e = entries_[t];
        require(e.row < k && e.col < n, ErrorKind::IndexOutOfRange, "sparse entry out of range");
        require(e.sign == 1 || e.sign == -1, ErrorKind::InvalidArgument, "sign must be +-1");
        if (t > 0) {
            const auto& p = entries_[t - 1];
            require(p.row < e.row || (p.row == e.row && p.col < e.col),
                    ErrorKind::InvalidArgument,
                    "sparse entries must be strictly row-major (no duplicate cells)");
        }
    }
}

DenseMatrix SparseProjection::to_dense() const {
    DenseMatrix out(k_, n_);
    for (const auto& e : entries_) out(e.row, e.col) = value(e);
    return out;
}

SparseProjection draw_sparse_projection(std::size_t k, std::size_t n, double q,
                                        std::uint64_t seed) {
    require(q > 0.0 && q <= 1.0, ErrorKind::InvalidSparsity, "q must lie in (0, 1]");
    require(k >= 1 && n >= 1, ErrorKind::InvalidArgument, "sparse projection needs k, n >= 1");
    require(k <= std::numeric_limits<std::uint32_t>::max() &&
                n <= std::numeric_limits<std::uint32_t>::max(),
            ErrorKind::InvalidArgument, "sparse projection dimensions exceed 32 bits");
    RandomStream rng(seed, "sparse-projection");
    const std::uint64_t cells = static_cast<std::uint64_t>(k) * n;
    std::vector<SparseEntry> entries;
    entries.reserve(static_cast<std::size_t>(static_cast<double>(cells) * q * 1.1) + 16);

    auto push = [&](std::uint64_t cell, int sign) {
        entries.push_back({static_cast<std::uint32_t>(cell / n), static_cast<std::uint32_t>(cell % n),
                           static_cast<std::int8_t>(sign)});
    };

    if (q > kDenseDrawThreshold) {
        const double half_q = 0.5 * q;
        for (std::uint64_t cell = 0; cell < cells; ++cell) {
            const double u = rng.uniform();
            if (u < q) push(cell, u < half_q ? 1 : -1);
        }
    } else {
        // Gap to the next nonzero is Geometric(q): floor(ln U / ln(1 - q)).
        const double log_miss = std::log1p(-q);
        std::uint64_t cell = 0;
        while (true) {
            const double gap = std::floor(std::log(rng.uniform_open_low()) / log_miss);
            if (gap >= static_cast<double>(cells - cell)) break;
            cell += static_cast<std::uint64_t>(gap);
            push(cell, rng.sign());
            if (++cell >= cells) break;
        }
    }
    return SparseProjection(k, n, q, std::move(entries), seed);
}

DenseMatrix apply_sparse_projection(const SparseProjection& t, const DenseMatrix& m) {
    if (m.rows() != t.n()) {
        raise(ErrorKind::DimensionMismatch, "apply_sparse_projection: matrix has " +
                                                std::to_string(m.rows()) + " rows, T has " +
                                                std::to_string(t.n()) + " columns");
    }
    DenseMatrix out(t.k(), m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) {
        const auto src = m.col(j);
        auto dst = out.col(j);
        for (const auto& e : t.entries()) {
            if (e.sign > 0)
                dst[e.row] += src[e.col];
            else
                dst[e.row] -= src[e.col];
        }
        for (double& v : dst) v *= t.magnitude();
    }
    return out;
}

Vector apply_sparse_projection(const SparseProjection& t, std::span<const double> x) {
    DenseMatrix m(x.size(), 1, Vector(x.begin(), x.end()));
    auto out = apply_sparse_projection(t, m);
    return Vector(out.data().begin(), out.data().end());
}

}  // namespace lsketch
