#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "lsketch/error.hpp"
#include "lsketch/problems.hpp"
#include "lsketch/random.hpp"
#include "lsketch/sketches.hpp"
#include "oracles.hpp"

using namespace lsketch;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::InvalidArgument;
}

constexpr std::size_t kHugeN = std::size_t{1} << 40;

}  // namespace

TEST(SamplingSize, ClampedAtDeskScale) {
    const auto s = sampling_size_r(std::size_t{1} << 20, 10, 0.1);
    EXPECT_EQ(s.r, std::size_t{1} << 20);
    EXPECT_TRUE(s.clamped);
    const auto t = sampling_size_r(1024, 8, 0.5);
    EXPECT_EQ(t.r, 1024u);
    EXPECT_TRUE(t.clamped);
}

TEST(SamplingSize, FormulaValueWhenNotClamped) {
    const auto s = sampling_size_r(kHugeN, 10, 0.1);
    EXPECT_EQ(s.r, 11676751u);
    EXPECT_FALSE(s.clamped);
    const auto t = sampling_size_r(kHugeN, 10, 0.001);
    EXPECT_EQ(t.r, 13486941u);
}

TEST(SamplingSize, MonotoneInEpsilon) {
    for (double eps : {0.9, 0.5, 0.1, 0.01, 0.001})
        EXPECT_GE(sampling_size_r(kHugeN, 10, eps / 2).r, sampling_size_r(kHugeN, 10, eps).r);
}

TEST(SamplingSize, Errors) {
    EXPECT_EQ(kind_of([] { sampling_size_r(100, 5, 0.0); }), ErrorKind::InvalidEpsilon);
    EXPECT_EQ(kind_of([] { sampling_size_r(100, 5, 1.0); }), ErrorKind::InvalidEpsilon);
    EXPECT_EQ(kind_of([] { sampling_size_r(4, 5, 0.5); }), ErrorKind::InvalidArgument);
}

TEST(ProjectionParams, FormulaValues) {
    const auto p = projection_params(std::size_t{1} << 20, 8, 0.25, 1.0, 1.0);
    EXPECT_NEAR(p.q, 0.025720186858623309, 1e-15);
    EXPECT_EQ(p.k, 120996u);
    EXPECT_FALSE(p.clamped);
}

TEST(ProjectionParams, ClampsAtDeskScale) {
    const auto p = projection_params(1024, 8, 0.25, 1.0, 1.0);
    EXPECT_EQ(p.q, 1.0);
    EXPECT_EQ(p.k, 1024u);
    EXPECT_TRUE(p.clamped);
}

TEST(ProjectionParams, QAboveCoordinateFloor) {
    for (std::size_t n : {std::size_t{1} << 12, std::size_t{1} << 20, kHugeN})
        for (std::size_t d : {1u, 4u, 16u}) {
            const auto p = projection_params(n, d, 0.25, 1.0, 1.0);
            EXPECT_GE(p.q, 2.0 * std::log(40.0 * n * d) / n);
        }
}

TEST(ProjectionParams, KDoublesWhenEpsilonHalves) {
    const auto a = projection_params(kHugeN, 8, 0.25, 1e-3, 1e-3);
    const auto b = projection_params(kHugeN, 8, 0.125, 1e-3, 1e-3);
    EXPECT_EQ(a.k, 1920u);
    EXPECT_EQ(b.k, 3840u);
}

TEST(ProjectionParams, Errors) {
    EXPECT_EQ(kind_of([] { projection_params(1024, 8, 0.5, 1, 1); }), ErrorKind::InvalidEpsilon);
    EXPECT_EQ(kind_of([] { projection_params(1024, 8, 0.25, 0, 1); }),
              ErrorKind::InvalidArgument);
}

TEST(PracticalParams, Defaults) {
    EXPECT_EQ(practical_sampling_size(1024, 8),
              static_cast<std::size_t>(std::ceil(32.0 * std::log(40.0 * 1024 * 8))));
    const auto p = practical_projection_params(1024, 8, 0.5);
    EXPECT_EQ(p.k, 64u);
    EXPECT_EQ(p.q, 1.0);
    const auto s = practical_params(1024, 8, 0.5);
    EXPECT_EQ(s.mode, SizingMode::UserOverride);
    EXPECT_GE(s.r, 8u);
    EXPECT_GE(s.k, 8u);
    const auto t = theory_params(1024, 8, 0.25);
    EXPECT_EQ(t.mode, SizingMode::TheoryFormula);
    EXPECT_TRUE(t.theory_clamped);
    EXPECT_EQ(t.r, 1024u);
}

TEST(SamplingPlan, ScaleLawAndRange) {
    for (std::size_t r : {1u, 7u, 100u, 1024u}) {
        const auto plan = draw_sampling_plan(1024, r, r);
        EXPECT_EQ(plan.indices.size(), r);
        for (auto i : plan.indices) EXPECT_LT(i, 1024u);
        EXPECT_NEAR(plan.scale * plan.scale * static_cast<double>(r), 1024.0, 1e-12 * 1024.0);
    }
}

TEST(SamplingPlan, WithReplacementAndDeterministic) {
    const auto a = draw_sampling_plan(256, 256, 3);
    EXPECT_EQ(a, draw_sampling_plan(256, 256, 3));
    EXPECT_NE(a, draw_sampling_plan(256, 256, 4));
    std::vector<int> seen(256, 0);
    bool duplicate = false;
    for (auto i : a.indices) duplicate = duplicate || (seen[i]++ > 0);
    EXPECT_TRUE(duplicate);
}

TEST(SamplingPlan, FrequencyBand) {
    const auto plan = draw_sampling_plan(16, 16000, 99);
    std::vector<int> counts(16, 0);
    for (auto i : plan.indices) ++counts[i];
    for (int c : counts) {
        EXPECT_GE(c, 800);
        EXPECT_LE(c, 1200);
    }
}

TEST(ApplySampling, FullPlanIsIdentity) {
    const DenseMatrix m = gaussian_matrix(16, 3, 1);
    const auto plan = full_sampling_plan(16);
    EXPECT_EQ(plan.scale, 1.0);
    EXPECT_EQ(apply_sampling(plan, m), m);
}

TEST(ApplySampling, OnesColumnGivesScale) {
    const DenseMatrix ones(64, 1, Vector(64, 1.0));
    const auto plan = draw_sampling_plan(64, 5, 8);
    const DenseMatrix s = apply_sampling(plan, ones);
    for (std::size_t t = 0; t < 5; ++t) EXPECT_EQ(s(t, 0), std::sqrt(64.0 / 5.0));
}

TEST(ApplySampling, DimensionMismatch) {
    const auto plan = draw_sampling_plan(8, 4, 1);
    EXPECT_EQ(kind_of([&] { apply_sampling(plan, DenseMatrix(7, 2)); }),
              ErrorKind::DimensionMismatch);
}

TEST(ApplySampling, UnbiasedSquaredNorm) {
    const DenseMatrix m = gaussian_matrix(16, 3, 21);
    const Vector x{0.5, -1.0, 2.0};
    const Vector mx = matvec(m, x);
    const double truth = dot(mx, mx);
    double mean = 0.0;
    const int trials = 2000;
    for (int s = 0; s < trials; ++s) {
        const Vector y = apply_sampling(draw_sampling_plan(16, 8, 5000 + s), mx);
        mean += dot(y, y);
    }
    mean /= trials;
    EXPECT_NEAR(mean, truth, 0.05 * truth);
}

TEST(SparseProjection, DenseWhenQIsOne) {
    const auto t = draw_sparse_projection(4, 8, 1.0, 1);
    EXPECT_EQ(t.nnz(), 32u);
    EXPECT_EQ(t.magnitude(), 0.5);
    const DenseMatrix d = t.to_dense();
    for (double v : d.data()) EXPECT_EQ(std::abs(v), 0.5);
}

TEST(SparseProjection, DeterministicTriplets) {
    EXPECT_EQ(draw_sparse_projection(16, 64, 0.2, 5), draw_sparse_projection(16, 64, 0.2, 5));
    EXPECT_EQ(draw_sparse_projection(16, 4096, 0.005, 5),
              draw_sparse_projection(16, 4096, 0.005, 5));
    EXPECT_NE(draw_sparse_projection(16, 64, 0.2, 5), draw_sparse_projection(16, 64, 0.2, 6));
}

TEST(SparseProjection, RowMajorOrderAndValues) {
    const auto t = draw_sparse_projection(8, 512, 0.01, 3);
    for (std::size_t i = 1; i < t.nnz(); ++i) {
        const auto& a = t.entries()[i - 1];
        const auto& b = t.entries()[i];
        EXPECT_TRUE(a.row < b.row || (a.row == b.row && a.col < b.col));
    }
    EXPECT_DOUBLE_EQ(t.magnitude(), 1.0 / std::sqrt(8 * 0.01));
}

TEST(SparseProjection, NonzeroCountBand) {
    for (double q : {0.125, 0.01}) {
        const std::size_t k = 32, n = 256;
        const double expected = k * n * q;
        const double sigma_mean = std::sqrt(k * n * q * (1 - q) / 100.0);
        double mean = 0.0;
        for (std::uint64_t s = 0; s < 100; ++s) mean += draw_sparse_projection(k, n, q, s).nnz();
        mean /= 100.0;
        EXPECT_NEAR(mean, expected, 3.0 * sigma_mean) << "q = " << q;
    }
}

TEST(SparseProjection, Errors) {
    EXPECT_EQ(kind_of([] { draw_sparse_projection(4, 4, 0.0, 1); }), ErrorKind::InvalidSparsity);
    EXPECT_EQ(kind_of([] { draw_sparse_projection(4, 4, 1.5, 1); }), ErrorKind::InvalidSparsity);
    EXPECT_EQ(kind_of([] { SparseProjection(2, 2, 0.5, {{1, 0, 1}, {0, 1, 1}}, 0); }),
              ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] { SparseProjection(2, 2, 0.5, {{2, 0, 1}}, 0); }),
              ErrorKind::IndexOutOfRange);
}

TEST(ApplySparseProjection, SingleTriplet) {
    const SparseProjection t(3, 3, 1.0, {{0, 0, -1}}, 0);
    const DenseMatrix out = apply_sparse_projection(t, DenseMatrix::identity(3));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            EXPECT_EQ(out(i, j), (i == 0 && j == 0) ? -t.magnitude() : 0.0);
}

TEST(ApplySparseProjection, MatchesDenseOracle) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto t = draw_sparse_projection(8, 8, 0.4, s);
        const DenseMatrix m = gaussian_matrix(8, 8, 100 + s);
        const DenseMatrix fast = apply_sparse_projection(t, m);
        EXPECT_LE(max_abs_diff(fast, oracle::dense_product(t.to_dense(), m)), 1e-14);
        const Vector v = apply_sparse_projection(t, m.col(0));
        for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(v[i], fast(i, 0));
    }
    const auto t = draw_sparse_projection(4, 8, 0.5, 1);
    EXPECT_EQ(kind_of([&] { apply_sparse_projection(t, DenseMatrix(7, 1)); }),
              ErrorKind::DimensionMismatch);
}

TEST(ApplySparseProjection, SecondMomentIsPreserved) {
    const std::size_t k = 64, n = 256;
    Vector x(n);
    RandomStream rs(1, "fixed-x");
    for (auto& v : x) v = rs.normal();
    const double truth = dot(x, x);
    double mean = 0.0;
    const int trials = 5000;
    for (int s = 0; s < trials; ++s) {
        const Vector y = apply_sparse_projection(draw_sparse_projection(k, n, 0.25, s), x);
        mean += dot(y, y);
    }
    mean /= trials;
    EXPECT_NEAR(mean, truth, 0.03 * truth);
}

TEST(ApplySparseProjection, SparseJlOnSpreadVector) {
    const std::size_t n = 4096, d = 8;
    const auto pr = practical_projection_params(n, d, 0.25);
    Vector x(n);
    RandomStream rs(2, "spread-x");
    for (auto& v : x) v = rs.sign() / std::sqrt(static_cast<double>(n));
    ASSERT_LE(max_abs(x), std::sqrt(2.0 * std::log(40.0 * n * d) / n));
    std::size_t passes = 0;
    const std::size_t trials = 200;
    for (std::uint64_t s = 0; s < trials; ++s) {
        const Vector y = apply_sparse_projection(draw_sparse_projection(pr.k, n, pr.q, s), x);
        if (std::abs(norm2(y) - 1.0) <= 0.25) ++passes;
    }
    EXPECT_GE(passes, 180u);
}

TEST(ApplySparseProjection, InnerProductMomentBoundAndUnbiasedness) {
    const std::size_t k = 16, n = 64;
    const double q = 0.5;
    Vector x(n), y(n);
    RandomStream rs(3, "moment-xy");
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rs.sign() / std::sqrt(static_cast<double>(n));
        y[i] = rs.normal() / std::sqrt(static_cast<double>(n));
    }
    ASSERT_LE(max_abs(x), std::sqrt(q));
    const double xy = dot(x, y);
    double sq4 = 0.0;
    for (std::size_t p = 0; p < n; ++p) sq4 += x[p] * x[p] * y[p] * y[p];
    const double bound = 2.0 / k * dot(x, x) * dot(y, y) + sq4 / (k * q);
    const int trials = 20000;
    double m1 = 0.0, m2 = 0.0;
    for (int s = 0; s < trials; ++s) {
        const auto t = draw_sparse_projection(k, n, q, s);
        const double delta =
            dot(apply_sparse_projection(t, x), apply_sparse_projection(t, y)) - xy;
        m1 += delta;
        m2 += delta * delta;
    }
    m1 /= trials;
    m2 /= trials;
    EXPECT_LE(m2, 1.1 * bound);
    EXPECT_LE(std::abs(m1), 3.0 * std::sqrt(m2 / trials));
}
