#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lsketch/matrix.hpp"

namespace lsketch {

// -----------------------------------------------------------------------------
// Sketch dimensions
// -----------------------------------------------------------------------------

enum class SizingMode { TheoryFormula, UserOverride };

struct SamplingSize {
    std::size_t r;
    bool clamped;  ///< the formula exceeded n and r was clamped to n
};

/// r = max{48^2 d ln(40nd) ln(100^2 d ln(40nd)), 40 d ln(40nd) / eps}, rounded
/// up and clamped to n. eps must lie in (0, 1), else InvalidEpsilon.
SamplingSize sampling_size_r(std::size_t n, std::size_t d, double eps);

struct ProjectionSize {
    double q;
    std::size_t k;
    bool clamped;  ///< q hit 1 or k was clamped to n
};

/// q = min(1, c_q d ln(40nd) (2 ln n + 16d + 16) / n) and
/// k = ceil(max{c_k (118^2 d + 98^2), 60 d / eps}) clamped to n.
/// eps must lie in (0, 1/2).
ProjectionSize projection_params(std::size_t n, std::size_t d, double eps, double c_q, double c_k);

/// Desk-scale default r = min(n, ceil(4 d ln(40nd))).
std::size_t practical_sampling_size(std::size_t n, std::size_t d);
/// Desk-scale defaults k = min(n, ceil(4d / eps)), q = min(1, the q formula with c_q = 0.1).
ProjectionSize practical_projection_params(std::size_t n, std::size_t d, double eps);

/// Everything a sketch-and-solve run needs to size its operator.
struct SketchParams {
    SizingMode mode = SizingMode::UserOverride;
    double epsilon = 0.5;
    std::size_t r = 0;  ///< sampled rows for the sampling sketch
    std::size_t k = 0;  ///< projected rows for the sparse projection
    double q = 1.0;     ///< sparsity of the projection
    double c_q = 1.0;
    double c_k = 1.0;
    bool theory_clamped = false;
};

/// Theory-formula sizes for both algorithms. The projection formulas need
/// eps < 1/2; for eps in [1/2, 1) only r is filled and k, q keep practical values.
SketchParams theory_params(std::size_t n, std::size_t d, double eps, double c_q = 1.0,
                           double c_k = 1.0);
/// Practical defaults for both algorithms.
SketchParams practical_params(std::size_t n, std::size_t d, double eps);

// -----------------------------------------------------------------------------
// Uniform row sampling S
// -----------------------------------------------------------------------------

/// r i.i.d. uniform row indices, with replacement, each row rescaled by
/// sqrt(n / r). Represents S^T in S^T M.
struct SamplingPlan {
    std::size_t n = 0;
    std::size_t r = 0;
    std::vector<std::size_t> indices;
    double scale = 1.0;

    friend bool operator==(const SamplingPlan&, const SamplingPlan&) = default;
};

SamplingPlan draw_sampling_plan(std::size_t n, std::size_t r, std::uint64_t seed);
/// Every row exactly once in order, scale 1. S^T is the identity.
SamplingPlan full_sampling_plan(std::size_t n);

/// Row t of the result is scale * M(indices[t], :).
DenseMatrix apply_sampling(const SamplingPlan& plan, const DenseMatrix& m);
Vector apply_sampling(const SamplingPlan& plan, std::span<const double> x);

// -----------------------------------------------------------------------------
// Sparse projection T
// -----------------------------------------------------------------------------

struct SparseEntry {
    std::uint32_t row;
    std::uint32_t col;
    std::int8_t sign;

    friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

// =============================================================================
/// k x n random matrix with T_ij = +-1/sqrt(kq) w.p. q/2 each and 0 otherwise.
///
/// Entries are kept in row-major order with only their sign; the shared
/// magnitude 1/sqrt(kq) is stored once.
class SparseProjection {
  public:
    /// Adopts explicit entries. Checks ranges, q in (0, 1] and that no cell
    /// repeats.
    SparseProjection(std::size_t k, std::size_t n, double q, std::vector<SparseEntry> entries,
                     std::uint64_t seed);

    std::size_t k() const noexcept { return k_; }
    std::size_t n() const noexcept { return n_; }
    double q() const noexcept { return q_; }
    double magnitude() const noexcept { return magnitude_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::span<const SparseEntry> entries() const noexcept { return entries_; }
    std::size_t nnz() const noexcept { return entries_.size(); }
    double value(const SparseEntry& e) const noexcept { return e.sign * magnitude_; }

    DenseMatrix to_dense() const;

    friend bool operator==(const SparseProjection&, const SparseProjection&) = default;

  private:
    std::size_t k_;
    std::size_t n_;
    double q_;
    double magnitude_;
    std::vector<SparseEntry> entries_;
    std::uint64_t seed_;
};

/// Cells are visited in row-major order. For q > 0.02 each cell consumes one
/// uniform variate; below that the gaps between nonzeros are drawn as
/// geometric skips, so generation is O(nnz). Throws InvalidSparsity for q
/// outside (0, 1].
SparseProjection draw_sparse_projection(std::size_t k, std::size_t n, double q,
                                        std::uint64_t seed);

/// T M in O(nnz(T) * cols).
DenseMatrix apply_sparse_projection(const SparseProjection& t, const DenseMatrix& m);
Vector apply_sparse_projection(const SparseProjection& t, std::span<const double> x);

}  // namespace lsketch
