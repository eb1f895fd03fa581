#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "lsketch/hadamard.hpp"
#include "lsketch/matrix.hpp"
#include "lsketch/sketches.hpp"

namespace lsketch {

/// Overdetermined least-squares problem min_x ||Ax - b||_2.
class LsProblem {
  public:
    /// Requires n >= d >= 1 and b.size() == n. Full column rank is checked
    /// lazily by the solvers.
    LsProblem(DenseMatrix a, Vector b);

    const DenseMatrix& a() const noexcept { return a_; }
    const Vector& b() const noexcept { return b_; }
    std::size_t n() const noexcept { return a_.rows(); }
    std::size_t d() const noexcept { return a_.cols(); }
    std::size_t padded_n() const noexcept { return next_power_of_two(a_.rows()); }
    bool needs_padding() const noexcept { return padded_n() != n(); }

  private:
    DenseMatrix a_;
    Vector b_;
};

/// Wall-clock seconds per pipeline phase.
struct PhaseTimings {
    double transform = 0.0;     ///< randomized Hadamard transform (full or partial)
    double sketch_apply = 0.0;  ///< drawing and applying S or T
    double small_solve = 0.0;   ///< the r x d / k x d solve
    double total = 0.0;
    friend bool operator==(const PhaseTimings&, const PhaseTimings&) = default;
};

/// Structural conditions on a sketch X, evaluated on an orthonormal basis U of
/// range(A) and the residual part b_perp of b:
///   (8)  sigma_min(XU)^2 >= 1/sqrt(2)
///   (9)  ||(XU)^T X b_perp||_2^2 <= eps * Z^2 / 2
struct ConditionReport {
    Vector sigma_xu;
    double cross_term = 0.0;
    bool cond8_ok = false;
    bool cond9_ok = false;
};

struct Diagnostics {
    Vector sigma_xu;
    double cross_term = 0.0;
    double z = 0.0;      ///< ||b_perp||_2
    double gamma = 0.0;  ///< ||U U^T b|| / ||b||
    double kappa = 0.0;
    bool cond8_ok = false;
    bool cond9_ok = false;
};

enum class SmallSolver { Qr, Cgnr };

struct SolveOptions {
    bool diagnostics = false;    ///< build U_A and check the structural conditions (O(nd^2))
    bool compute_exact = false;  ///< also solve the full problem and fill z_exact
    std::size_t best_of = 1;     ///< independent trials; keep the smallest true residual
    SmallSolver small_solver = SmallSolver::Qr;
    double cgnr_tol = 1e-12;
    std::size_t cgnr_max_iter = 1000;
};

struct SketchOutcome {
    Vector x_tilde;
    double residual_tilde = 0.0;  ///< ||A x_tilde - b||_2 on the original problem
    std::optional<double> z_exact;
    PhaseTimings timings;
    std::optional<Diagnostics> diagnostics;
    SketchParams params;
    std::uint64_t seed = 0;
    std::size_t retries = 0;  ///< rank-loss resamples in the winning trial
    std::size_t trial = 0;    ///< index of the winning best-of trial
};

/// Randomized Hadamard transform followed by uniform sampling of params.r rows.
/// Only the sampled rows of HDA and entries of HDb are ever computed. If the
/// sampled system loses rank it is redrawn once from the next seed stream
/// before RankDeficient propagates.
SketchOutcome sketch_solve_sampling(const LsProblem& problem, const SketchParams& params,
                                    std::uint64_t seed, const SolveOptions& options = {});

/// Randomized Hadamard transform followed by a k x n sparse projection.
SketchOutcome sketch_solve_projection(const LsProblem& problem, const SketchParams& params,
                                      std::uint64_t seed, const SolveOptions& options = {});

/// Sampling pipeline with caller-supplied draws (sizes refer to the padded
/// problem). No retry; used for degenerate and fixed-operator checks.
SketchOutcome sketch_solve_sampling_fixed(const LsProblem& problem, const SignDiagonal& signs,
                                          const SamplingPlan& plan, double eps,
                                          const SolveOptions& options = {});
SketchOutcome sketch_solve_projection_fixed(const LsProblem& problem, const SignDiagonal& signs,
                                            const SparseProjection& t, double eps,
                                            const SolveOptions& options = {});

/// Evaluates conditions (8) and (9) for a sketched basis XU and sketched
/// residual X b_perp.
ConditionReport verify_conditions(const DenseMatrix& xu, std::span<const double> xbperp, double z,
                                  double eps);

/// ||U U^T b|| / ||b|| for orthonormal U. ZeroRhs if b = 0.
double gamma_fraction(const DenseMatrix& u, std::span<const double> b);

struct ErrorBounds {
    double residual_bound = 0.0;  ///< (1 + eps) Z
    /// sqrt(eps) kappa sqrt(gamma^-2 - 1) ||x_opt||; empty when gamma = 0.
    std::optional<double> forward_bound_gamma;
    double forward_bound_z = 0.0;  ///< sqrt(eps) Z / sigma_min(A)
};

/// Right-hand sides of the residual and forward-error guarantees.
/// InvalidGamma for gamma outside [0, 1]; gamma = 0 leaves forward_bound_gamma empty.
ErrorBounds predicted_error_bounds(double kappa, double gamma, double eps, double x_norm, double z,
                                   double sigma_min);

/// Conjugate gradients on the normal equations (CGNR / CGLS). Stops when
/// ||M^T (v - Mx)|| <= tol ||M^T v||; ConvergenceFailure after max_iter.
Vector cgnr_solve(const DenseMatrix& m, std::span<const double> v, double tol,
                  std::size_t max_iter);

}  // namespace lsketch
