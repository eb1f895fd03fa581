#include "lsketch/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <utility>

#include "lsketch/error.hpp"
#include "lsketch/linalg.hpp"
#include "lsketch/random.hpp"

namespace lsketch {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// [A | b] as one n x (d+1) matrix so both go through a transform together.
DenseMatrix augment(const DenseMatrix& a, std::span<const double> b) {
    DenseMatrix out(a.rows(), a.cols() + 1);
    for (std::size_t j = 0; j < a.cols(); ++j) std::ranges::copy(a.col(j), out.col(j).begin());
    std::ranges::copy(b, out.col(a.cols()).begin());
    return out;
}

// Splits a sketched [XA | Xb] back into XA and Xb.
std::pair<DenseMatrix, Vector> split_last(const DenseMatrix& m) {
    const std::size_t d = m.cols() - 1;
    DenseMatrix xa(m.rows(), d);
    for (std::size_t j = 0; j < d; ++j) std::ranges::copy(m.col(j), xa.col(j).begin());
    const auto last = m.col(d);
    return {std::move(xa), Vector(last.begin(), last.end())};
}

// Everything the pipelines share about one problem instance.
struct Prepared {
    PaddedProblem padded;
    DenseMatrix augmented;
};

Prepared prepare(const LsProblem& p) {
    PaddedProblem padded = pad_pow2(p.a(), p.b());
    DenseMatrix augmented = augment(padded.a_pad, padded.b_pad);
    return {std::move(padded), std::move(augmented)};
}

Vector small_solve(const DenseMatrix& xa, std::span<const double> xb, const SolveOptions& opt) {
    if (opt.small_solver == SmallSolver::Cgnr) {
        return cgnr_solve(xa, xb, opt.cgnr_tol, opt.cgnr_max_iter);
    }
    return solve_exact_ls(xa, xb);
}

template <typename SketchFn>
Diagnostics build_diagnostics(const LsProblem& problem, const Prepared& prep, double eps,
                              SketchFn&& sketch) {
    const DenseMatrix u = orthonormal_basis(prep.padded.a_pad);
    const Vector bperp = project_out(u, prep.padded.b_pad);
    Diagnostics diag;
    diag.z = norm2(bperp);
    // b = 0 lies in every range; call it fully in range.
    diag.gamma = norm2(problem.b()) > 0.0 ? gamma_fraction(u, prep.padded.b_pad) : 1.0;
    diag.kappa = condition_number(problem.a());
    const auto [xu, xbperp] = split_last(sketch(augment(u, bperp)));
    const ConditionReport report = verify_conditions(xu, xbperp, diag.z, eps);
    diag.sigma_xu = report.sigma_xu;
    diag.cross_term = report.cross_term;
    diag.cond8_ok = report.cond8_ok;
    diag.cond9_ok = report.cond9_ok;
    return diag;
}

void finish(SketchOutcome& out, const LsProblem& problem, const SolveOptions& opt) {
    out.residual_tilde = norm2(subtract(matvec(problem.a(), out.x_tilde), problem.b()));
    if (opt.compute_exact) {
        const Vector x_opt = solve_exact_ls(problem.a(), problem.b());
        out.z_exact = norm2(subtract(matvec(problem.a(), x_opt), problem.b()));
    }
}

SketchOutcome run_sampling(const LsProblem& problem, const Prepared& prep,
                           const SignDiagonal& signs, const SamplingPlan& plan, double eps,
                           const SolveOptions& opt) {
    require(plan.n == prep.padded.padded_n, ErrorKind::DimensionMismatch,
            "sampling plan does not match the padded row count");
    const auto start = Clock::now();
    SketchOutcome out;

    auto t = Clock::now();
    DenseMatrix sketched = partial_rht_rows(prep.augmented, signs, plan.indices);
    out.timings.transform = seconds_since(t);

    t = Clock::now();
    for (double& v : sketched.data()) v *= plan.scale;
    out.timings.sketch_apply = seconds_since(t);

    t = Clock::now();
    const auto [xa, xb] = split_last(sketched);
    out.x_tilde = small_solve(xa, xb, opt);
    out.timings.small_solve = seconds_since(t);
    out.timings.total = seconds_since(start);

    finish(out, problem, opt);
    if (opt.diagnostics) {
        out.diagnostics = build_diagnostics(problem, prep, eps, [&](const DenseMatrix& m) {
            DenseMatrix s = partial_rht_rows(m, signs, plan.indices);
            for (double& v : s.data()) v *= plan.scale;
            return s;
        });
    }
    return out;
}

SketchOutcome run_projection(const LsProblem& problem, const Prepared& prep,
                             const SignDiagonal& signs, const SparseProjection* fixed_t,
                             std::size_t k, double q, std::uint64_t t_seed, double eps,
                             const SolveOptions& opt) {
    const auto start = Clock::now();
    SketchOutcome out;

    auto t = Clock::now();
    const DenseMatrix transformed = apply_rht(prep.augmented, signs);
    out.timings.transform = seconds_since(t);

    t = Clock::now();
    std::optional<SparseProjection> drawn;
    if (fixed_t == nullptr) {
        drawn.emplace(draw_sparse_projection(k, prep.padded.padded_n, q, t_seed));
        fixed_t = &*drawn;
    }
    require(fixed_t->n() == prep.padded.padded_n, ErrorKind::DimensionMismatch,
            "sparse projection does not match the padded row count");
    const DenseMatrix sketched = apply_sparse_projection(*fixed_t, transformed);
    out.timings.sketch_apply = seconds_since(t);

    t = Clock::now();
    const auto [xa, xb] = split_last(sketched);
    out.x_tilde = small_solve(xa, xb, opt);
    out.timings.small_solve = seconds_since(t);
    out.timings.total = seconds_since(start);

    finish(out, problem, opt);
    if (opt.diagnostics) {
        out.diagnostics = build_diagnostics(problem, prep, eps, [&](const DenseMatrix& m) {
            return apply_sparse_projection(*fixed_t, apply_rht(m, signs));
        });
    }
    return out;
}

void require_eps(double eps) {
    require(eps > 0.0 && eps < 1.0, ErrorKind::InvalidEpsilon, "eps must lie in (0, 1)");
}

// Runs `trial(seed_t)` best_of times and keeps the smallest true residual;
// ties go to the lowest trial index.
template <typename TrialFn>
SketchOutcome best_of(std::uint64_t seed, std::size_t trials, TrialFn&& trial) {
    require(trials >= 1, ErrorKind::InvalidArgument, "best_of must be >= 1");
    SketchOutcome best = trial(seed);
    best.trial = 0;
    for (std::size_t i = 1; i < trials; ++i) {
        SketchOutcome next = trial(derive_seed(seed, "trial", i));
        if (next.residual_tilde < best.residual_tilde) {
            best = std::move(next);
            best.trial = i;
        }
    }
    best.seed = seed;
    return best;
}

// One attempt plus a single redraw if the sketched system loses rank.
template <typename AttemptFn>
SketchOutcome with_rank_retry(AttemptFn&& attempt) {
    try {
        return attempt(0);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::RankDeficient) throw;
    }
    SketchOutcome out = attempt(1);
    out.retries = 1;
    return out;
}

}  // namespace

LsProblem::LsProblem(DenseMatrix a, Vector b) : a_(std::move(a)), b_(std::move(b)) {
    require(a_.rows() >= a_.cols(), ErrorKind::InvalidArgument,
            "least-squares problem must be overdetermined (n >= d)");
    if (b_.size() != a_.rows()) {
        raise(ErrorKind::DimensionMismatch, "b has length " + std::to_string(b_.size()) +
                                                ", A has " + std::to_string(a_.rows()) + " rows");
    }
    require(all_finite(b_), ErrorKind::NonFinite, "b has non-finite entries");
}

SketchOutcome sketch_solve_sampling(const LsProblem& problem, const SketchParams& params,
                                    std::uint64_t seed, const SolveOptions& options) {
    require_eps(params.epsilon);
    require(params.r >= problem.d(), ErrorKind::InvalidArgument, "sampling needs r >= d");
    const Prepared prep = prepare(problem);
    const std::size_t n = prep.padded.padded_n;

    SketchOutcome out = best_of(seed, options.best_of, [&](std::uint64_t trial_seed) {
        return with_rank_retry([&](std::uint64_t attempt) {
            const SignDiagonal signs = sample_signs(n, derive_seed(trial_seed, "signs", attempt));
            const SamplingPlan plan =
                draw_sampling_plan(n, params.r, derive_seed(trial_seed, "sampling", attempt));
            return run_sampling(problem, prep, signs, plan, params.epsilon, options);
        });
    });
    out.params = params;
    return out;
}

SketchOutcome sketch_solve_projection(const LsProblem& problem, const SketchParams& params,
                                      std::uint64_t seed, const SolveOptions& options) {
    require_eps(params.epsilon);
    require(params.k >= problem.d(), ErrorKind::InvalidArgument, "projection needs k >= d");
    require(params.q > 0.0 && params.q <= 1.0, ErrorKind::InvalidSparsity, "q must lie in (0, 1]");
    const Prepared prep = prepare(problem);
    const std::size_t n = prep.padded.padded_n;

    SketchOutcome out = best_of(seed, options.best_of, [&](std::uint64_t trial_seed) {
        return with_rank_retry([&](std::uint64_t attempt) {
            const SignDiagonal signs = sample_signs(n, derive_seed(trial_seed, "signs", attempt));
            return run_projection(problem, prep, signs, nullptr, params.k, params.q,
                                  derive_seed(trial_seed, "projection", attempt), params.epsilon,
                                  options);
        });
    });
    out.params = params;
    return out;
}

SketchOutcome sketch_solve_sampling_fixed(const LsProblem& problem, const SignDiagonal& signs,
                                          const SamplingPlan& plan, double eps,
                                          const SolveOptions& options) {
    require_eps(eps);
    const Prepared prep = prepare(problem);
    SketchOutcome out = run_sampling(problem, prep, signs, plan, eps, options);
    out.params.epsilon = eps;
    out.params.r = plan.r;
    out.seed = signs.seed();
    return out;
}

SketchOutcome sketch_solve_projection_fixed(const LsProblem& problem, const SignDiagonal& signs,
                                            const SparseProjection& t, double eps,
                                            const SolveOptions& options) {
    require_eps(eps);
    const Prepared prep = prepare(problem);
    SketchOutcome out = run_projection(problem, prep, signs, &t, t.k(), t.q(), 0, eps, options);
    out.params.epsilon = eps;
    out.params.k = t.k();
    out.params.q = t.q();
    out.seed = signs.seed();
    return out;
}

ConditionReport verify_conditions(const DenseMatrix& xu, std::span<const double> xbperp, double z,
                                  double eps) {
    require(xbperp.size() == xu.rows(), ErrorKind::DimensionMismatch,
            "verify_conditions: X b_perp length != rows of XU");
    require(z >= 0.0, ErrorKind::InvalidArgument, "verify_conditions: z must be >= 0");
    ConditionReport r;
    r.sigma_xu = gram_singular_values(xu);
    const Vector cross = transpose_matvec(xu, xbperp);
    r.cross_term = dot(cross, cross);
    const double smin = r.sigma_xu.back();
    r.cond8_ok = smin * smin >= 1.0 / std::sqrt(2.0);
    r.cond9_ok = r.cross_term <= eps * z * z / 2.0;
    return r;
}

double gamma_fraction(const DenseMatrix& u, std::span<const double> b) {
    require(b.size() == u.rows(), ErrorKind::DimensionMismatch, "gamma_fraction: b length != rows");
    const double bnorm = norm2(b);
    require(bnorm > 0.0, ErrorKind::ZeroRhs, "gamma is undefined for b = 0");
    const Vector in_range = matvec(u, transpose_matvec(u, b));
    return std::min(1.0, norm2(in_range) / bnorm);
}

ErrorBounds predicted_error_bounds(double kappa, double gamma, double eps, double x_norm, double z,
                                   double sigma_min) {
    require(gamma >= 0.0 && gamma <= 1.0, ErrorKind::InvalidGamma, "gamma must lie in [0, 1]");
    require(kappa >= 1.0, ErrorKind::InvalidArgument, "kappa must be >= 1");
    require_eps(eps);
    require(x_norm >= 0.0 && z >= 0.0, ErrorKind::InvalidArgument, "norms must be >= 0");
    require(sigma_min > 0.0, ErrorKind::InvalidArgument, "sigma_min must be positive");
    ErrorBounds out;
    const double root_eps = std::sqrt(eps);
    out.residual_bound = (1.0 + eps) * z;
    if (gamma > 0.0) {
        out.forward_bound_gamma = root_eps * kappa * std::sqrt(1.0 / (gamma * gamma) - 1.0) * x_norm;
    }
    out.forward_bound_z = root_eps * z / sigma_min;
    return out;
}

Vector cgnr_solve(const DenseMatrix& m, std::span<const double> v, double tol,
                  std::size_t max_iter) {
    require(v.size() == m.rows(), ErrorKind::DimensionMismatch, "cgnr_solve: v length != rows");
    require(tol > 0.0, ErrorKind::InvalidArgument, "cgnr_solve: tol must be positive");
    const std::size_t d = m.cols();
    Vector x(d, 0.0);
    Vector r(v.begin(), v.end());
    Vector s = transpose_matvec(m, r);
    const double s0 = norm2(s);
    if (s0 <= 1e-14 * m.frobenius_norm() * norm2(v)) return x;
    Vector p = s;
    double gamma = s0 * s0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        const Vector mp = matvec(m, p);
        const double mp2 = dot(mp, mp);
        if (mp2 == 0.0) break;
        const double alpha = gamma / mp2;
        for (std::size_t i = 0; i < d; ++i) x[i] += alpha * p[i];
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= alpha * mp[i];
        s = transpose_matvec(m, r);
        const double gamma_next = dot(s, s);
        if (std::sqrt(gamma_next) <= tol * s0) return x;
        const double beta = gamma_next / gamma;
        for (std::size_t i = 0; i < d; ++i) p[i] = s[i] + beta * p[i];
        gamma = gamma_next;
    }
    raise(ErrorKind::ConvergenceFailure,
          "CGNR did not reach the tolerance in " + std::to_string(max_iter) + " iterations");
}

}  // namespace lsketch
