#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "lsketch/approx_matmul.hpp"
#include "lsketch/error.hpp"
#include "lsketch/linalg.hpp"
#include "lsketch/problems.hpp"

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

}  // namespace

TEST(ColumnProbabilities, Examples) {
    const DenseMatrix equal = DenseMatrix::from_rows({{1, 0, 0.6}, {0, 1, 0.8}});
    for (double p : column_probabilities(equal)) EXPECT_NEAR(p, 1.0 / 3.0, 1e-15);

    const Vector p = column_probabilities(DenseMatrix::from_rows({{1, 0}, {0, 2}}));
    EXPECT_NEAR(p[0], 0.2, 1e-15);
    EXPECT_NEAR(p[1], 0.8, 1e-15);

    const Vector r = column_probabilities(gaussian_matrix(5, 37, 1));
    double sum = 0.0;
    for (double v : r) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-12);

    EXPECT_EQ(kind_of([] { column_probabilities(DenseMatrix(3, 3)); }), ErrorKind::ZeroMatrix);
}

TEST(ColumnProbabilities, UniformAlternativeAndEffectiveBeta) {
    const DenseMatrix a = DenseMatrix::from_rows({{1, 0}, {0, 2}});
    const Vector u = uniform_probabilities(a);
    EXPECT_EQ(u, (Vector{0.5, 0.5}));
    EXPECT_NEAR(effective_beta(a, u), 0.625, 1e-15);
    EXPECT_NEAR(effective_beta(a, column_probabilities(a)), 1.0, 1e-15);
}

TEST(ColumnSampler, Validation) {
    const DenseMatrix a = DenseMatrix::from_rows({{1, 0}, {0, 2}});
    EXPECT_EQ(kind_of([&] { ColumnSampler(a, {0.5, 0.6}, 4, 1.0); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([&] { ColumnSampler(a, {0.5, 0.5}, 4, 1.0); }), ErrorKind::InvalidArgument);
    EXPECT_NO_THROW(ColumnSampler(a, {0.5, 0.5}, 4, 0.6));
    EXPECT_EQ(kind_of([&] { ColumnSampler(a, {1.0}, 4, 1.0); }), ErrorKind::DimensionMismatch);
    const auto s = norm_squared_sampler(a, 10);
    EXPECT_NEAR(s.max_scaled_norm(), std::sqrt(5.0), 1e-12);
}

TEST(ColumnSampler, InverseCdfDraw) {
    const DenseMatrix a = DenseMatrix::from_rows({{1, 0, 1}, {0, 2, 1}});
    const ColumnSampler s(a, {0.25, 0.5, 0.25}, 1, 0.5);
    EXPECT_EQ(s.draw(0.0), 0u);
    EXPECT_EQ(s.draw(0.2499), 0u);
    EXPECT_EQ(s.draw(0.25), 1u);
    EXPECT_EQ(s.draw(0.7499), 1u);
    EXPECT_EQ(s.draw(0.75), 2u);
    EXPECT_EQ(s.draw(0.9999999), 2u);
}

TEST(ExactlyC, SingleColumnDegenerate) {
    const DenseMatrix a = DenseMatrix::from_rows({{1}, {2}, {-3}});
    const auto sampler = norm_squared_sampler(a, 9);
    const DenseMatrix c = exactly_c(a, sampler, 4);
    ASSERT_EQ(c.cols(), 9u);
    for (std::size_t t = 0; t < 9; ++t)
        for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(c(i, t), a(i, 0) / 3.0, 1e-15);
    EXPECT_LE(max_abs_diff(outer_gram(c), outer_gram(a)), 1e-12);
    EXPECT_LE(matmul_error(a, c), 1e-12);
}

TEST(ExactlyC, StreamingGramMatchesMaterialized) {
    const DenseMatrix a = gaussian_matrix(4, 20, 3);
    const auto sampler = norm_squared_sampler(a, 50);
    const DenseMatrix c = exactly_c(a, sampler, 11);
    EXPECT_LE(max_abs_diff(sampled_gram(a, sampler, 11), outer_gram(c)), 1e-12);
    EXPECT_NEAR(matmul_error_from_gram(a, sampled_gram(a, sampler, 11)), matmul_error(a, c),
                1e-9);
    EXPECT_EQ(draw_column_indices(sampler, 11), draw_column_indices(sampler, 11));
}

TEST(ExactlyC, Unbiased) {
    const DenseMatrix a = gaussian_matrix(4, 6, 5);
    const auto sampler = norm_squared_sampler(a, 3);
    const DenseMatrix target = outer_gram(a);
    const int trials = 5000;
    DenseMatrix mean(4, 4), sq(4, 4);
    for (int s = 0; s < trials; ++s) {
        const DenseMatrix g = sampled_gram(a, sampler, s);
        for (std::size_t i = 0; i < 16; ++i) {
            mean.data()[i] += g.data()[i];
            sq.data()[i] += g.data()[i] * g.data()[i];
        }
    }
    for (std::size_t i = 0; i < 16; ++i) {
        const double m = mean.data()[i] / trials;
        const double var = sq.data()[i] / trials - m * m;
        const double se = std::sqrt(std::max(var, 0.0) / trials);
        EXPECT_NEAR(m, target.data()[i], 3.0 * se + 1e-12);
    }
}

TEST(ExactlyC, DrawFrequencies) {
    const DenseMatrix a = gaussian_matrix(3, 5, 6);
    const auto sampler = norm_squared_sampler(a, 20000);
    const auto idx = draw_column_indices(sampler, 1);
    std::vector<int> counts(5, 0);
    for (auto i : idx) ++counts[i];
    for (std::size_t i = 0; i < 5; ++i) {
        const double p = sampler.probs()[i];
        EXPECT_NEAR(counts[i], 20000 * p, 3.0 * std::sqrt(20000 * p * (1 - p)));
    }
}

TEST(CLowerBound, FormulaValue) {
    EXPECT_EQ(c_lower_bound(4.0, 1.0, 0.5, 0.1),
              static_cast<std::size_t>(std::ceil(1536.0 * std::log(1536.0 / std::sqrt(0.1)))));
    EXPECT_EQ(c_lower_bound(4.0, 1.0, 0.5, 0.1), 13038u);
}

TEST(CLowerBound, SuperlinearInFrobenius) {
    for (double f : {0.05, 1.0, 4.0, 30.0})
        EXPECT_GT(c_lower_bound(2 * f, 1.0, 0.5, 0.1), 2 * c_lower_bound(f, 1.0, 0.5, 0.1) - 1);
}

TEST(CLowerBound, Errors) {
    EXPECT_EQ(kind_of([] { c_lower_bound(1.0 / 48.0, 1.0, 0.5, 0.1); }),
              ErrorKind::FrobeniusTooSmall);
    EXPECT_EQ(kind_of([] { c_lower_bound(1.0, 1.0, 1.0, 0.1); }), ErrorKind::InvalidEpsilon);
    EXPECT_EQ(kind_of([] { c_lower_bound(1.0, 0.0, 0.5, 0.1); }), ErrorKind::InvalidArgument);
}

TEST(MatmulError, Examples) {
    const DenseMatrix a = gaussian_matrix(5, 12, 7);
    EXPECT_LE(matmul_error(a, a), 1e-12);
    const double smax = gram_singular_values(a.transpose()).front();
    EXPECT_NEAR(matmul_error(a, DenseMatrix(5, 1)), smax * smax, 1e-6 * smax * smax);
    EXPECT_EQ(kind_of([&] { matmul_error(a, DenseMatrix(4, 1)); }), ErrorKind::DimensionMismatch);
}

TEST(Hypotheses, RescaleAndValidate) {
    const DenseMatrix a = gaussian_matrix(8, 100, 9);
    EXPECT_EQ(kind_of([&] { require_matmul_hypotheses(a); }), ErrorKind::SpectralNormTooLarge);
    const DenseMatrix r = rescale_to_unit_spectral_norm(a);
    EXPECT_LE(spectral_norm(r), 1.0 + 1e-8);
    EXPECT_GT(spectral_norm(r), 0.999);
    EXPECT_NO_THROW(require_matmul_hypotheses(r));

    DenseMatrix tiny(2, 2);
    tiny(0, 0) = 0.1;
    EXPECT_EQ(kind_of([&] { require_matmul_hypotheses(tiny); }), ErrorKind::FrobeniusTooSmall);
}
