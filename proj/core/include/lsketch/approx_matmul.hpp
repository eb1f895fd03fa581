#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lsketch/matrix.hpp"

namespace lsketch {

/// p_i = ||A^(i)||^2 / ||A||_F^2 over the columns of A. ZeroMatrix if A = 0.
Vector column_probabilities(const DenseMatrix& a);
/// p_i = 1/n.
Vector uniform_probabilities(const DenseMatrix& a);
/// Largest beta with p_i >= beta ||A^(i)||^2 / ||A||_F^2 for every column.
double effective_beta(const DenseMatrix& a, std::span<const double> probs);

// =============================================================================
/// Sampling distribution over the n columns of A for Exactly(c).
///
/// Construction checks that the probabilities are nonnegative, sum to 1
/// within 1e-12, and satisfy the floor p_i >= beta ||A^(i)||^2 / ||A||_F^2.
/// Draws use inverse-CDF lookup on the cumulative array.
class ColumnSampler {
  public:
    ColumnSampler(const DenseMatrix& a, Vector probs, std::size_t c, double beta);

    std::span<const double> probs() const noexcept { return probs_; }
    std::size_t c() const noexcept { return c_; }
    double beta() const noexcept { return beta_; }
    /// M = max_i ||A^(i)|| / sqrt(p_i) over columns with p_i > 0.
    double max_scaled_norm() const noexcept { return max_scaled_norm_; }

    std::size_t draw(double u) const noexcept;

  private:
    Vector probs_;
    Vector cumulative_;
    std::size_t c_;
    double beta_;
    double max_scaled_norm_ = 0.0;
};

/// Norm-squared sampler (beta = 1) with c draws.
ColumnSampler norm_squared_sampler(const DenseMatrix& a, std::size_t c);

/// The c i.i.d. column indices i_1..i_c, deterministic in seed.
std::vector<std::size_t> draw_column_indices(const ColumnSampler& sampler, std::uint64_t seed);

/// Exactly(c): the m x c matrix whose t-th column is A^(i_t) / sqrt(c p_{i_t}).
DenseMatrix exactly_c(const DenseMatrix& a, const ColumnSampler& sampler, std::uint64_t seed);

/// C C^T for the same draws as exactly_c, accumulated as weighted rank-one
/// updates without forming C.
DenseMatrix sampled_gram(const DenseMatrix& a, const ColumnSampler& sampler, std::uint64_t seed);

/// ceil( 96 F / (beta eps^2) * ln(96 F / (beta eps^2 sqrt(delta))) ) for F = ||A||_F^2.
/// FrobeniusTooSmall when F < 1/24.
std::size_t c_lower_bound(double frob_sq, double beta, double eps, double delta);

/// ||A A^T - C C^T||_2.
double matmul_error(const DenseMatrix& a, const DenseMatrix& c);
/// ||A A^T - G||_2 for an already accumulated G = C C^T.
double matmul_error_from_gram(const DenseMatrix& a, const DenseMatrix& gram);

/// ||A||_2 from the eigenvalues of the smaller Gram matrix.
double spectral_norm(const DenseMatrix& a);
/// A / (||A||_2 (1 + 1e-10)), so that ||A||_2 <= 1.
DenseMatrix rescale_to_unit_spectral_norm(const DenseMatrix& a);
/// Hypotheses of the sample-size bound: ||A||_2 <= 1 + 1e-8 (SpectralNormTooLarge)
/// and ||A||_F^2 >= 1/24 (FrobeniusTooSmall).
void require_matmul_hypotheses(const DenseMatrix& a);

}  // namespace lsketch
