#pragma once

#include <cstdint>
#include <span>

#include "lsketch/matrix.hpp"

namespace lsketch {

/// Relative threshold on |R_ii| (and on sigma_min / sigma_max) below which a
/// matrix is treated as rank deficient.
inline constexpr double kRankTolerance = 1e-12;

/// Thin QR factors of an n x d matrix (n >= d). R has a nonnegative diagonal.
struct QrFactors {
    DenseMatrix q_thin;   ///< n x d, orthonormal columns
    DenseMatrix r_upper;  ///< d x d, exact zeros below the diagonal
};

/// Householder QR. Throws RankDeficient when some |R_ii| <= 1e-12 * max_j |R_jj|.
QrFactors qr_factor(const DenseMatrix& a);

/// Minimizer of ||Ax - b||_2 for full-column-rank A, via Householder QR.
Vector solve_exact_ls(const DenseMatrix& a, std::span<const double> b);

/// Orthonormal basis for range(A). Comes from QR, not the SVD: any orthonormal
/// basis of the column space gives the same singular values of X*U up to a
/// rotation, which is all the embedding diagnostics look at.
DenseMatrix orthonormal_basis(const DenseMatrix& a);

/// Eigenvalues of a small symmetric matrix by cyclic Jacobi, descending.
/// Converged when off(G) <= 1e-12 * ||G||_F; at most 30 sweeps, else
/// ConvergenceFailure.
Vector symmetric_eigenvalues(const DenseMatrix& g);

/// Singular values of a tall matrix M (rows >= cols), descending, from the
/// eigenvalues of the Gram matrix M^T M.
Vector gram_singular_values(const DenseMatrix& m);

/// max |lambda| of a symmetric matrix by power iteration from a seeded random
/// start. Stops when the estimate changes by <= 1e-6 relative; 1000 iterations
/// at most, else ConvergenceFailure.
double spectral_norm_sym(const DenseMatrix& m, std::uint64_t seed = 0x5eed);

/// b - U (U^T b). U_perp is never formed.
Vector project_out(const DenseMatrix& u, std::span<const double> b);

/// sigma_max / sigma_min. RankDeficient when sigma_min <= 1e-12 * sigma_max.
double condition_number(const DenseMatrix& a);

}  // namespace lsketch
