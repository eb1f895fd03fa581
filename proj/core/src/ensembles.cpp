#include "lsketch/ensembles.hpp"

#include <algorithm>
#include <cmath>

#include "lsketch/approx_matmul.hpp"
#include "lsketch/hadamard.hpp"
#include "lsketch/linalg.hpp"
#include "lsketch/problems.hpp"
#include "lsketch/random.hpp"
#include "lsketch/sketches.hpp"
#include "lsketch/solver.hpp"

namespace lsketch {

namespace {

double log40nd(std::size_t n, std::size_t d) {
    return std::log(40.0 * static_cast<double>(n) * static_cast<double>(d));
}

double min_sigma_sq(const DenseMatrix& xu) {
    const double s = gram_singular_values(xu).back();
    return s * s;
}

}  // namespace

EnsembleResult energy_spreading_ensemble(std::size_t n, std::size_t d, std::size_t seeds,
                                         std::uint64_t base_seed) {
    EnsembleResult res{"row-norm spreading of HDU", 0, seeds, 0.95, 0};
    const DenseMatrix u = random_orthonormal(n, d, derive_seed(base_seed, "basis"));
    const double bound = 2.0 * static_cast<double>(d) * log40nd(n, d) / static_cast<double>(n);
    for (std::size_t s = 0; s < seeds; ++s) {
        const DenseMatrix hdu = apply_rht(u, sample_signs(n, base_seed + s));
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < d; ++j) row += hdu(i, j) * hdu(i, j);
            worst = std::max(worst, row);
        }
        if (worst <= bound) ++res.passes;
    }
    return res;
}

EnsembleResult coordinate_bound_ensemble(std::size_t n, std::size_t d, std::size_t seeds,
                                         std::uint64_t base_seed) {
    EnsembleResult res{"entrywise bound on HDU", 0, seeds, 0.95, 0};
    const DenseMatrix u = random_orthonormal(n, d, derive_seed(base_seed, "basis"));
    const double bound = std::sqrt(2.0 * log40nd(n, d) / static_cast<double>(n));
    for (std::size_t s = 0; s < seeds; ++s) {
        const DenseMatrix hdu = apply_rht(u, sample_signs(n, base_seed + s));
        if (max_abs(hdu.data()) <= bound) ++res.passes;
    }
    return res;
}

EnsembleResult sampling_embedding_ensemble(std::size_t n, std::size_t d, std::size_t r,
                                           std::size_t seeds, std::uint64_t base_seed) {
    EnsembleResult res{"sigma_min^2(S^T HDU) >= 1/sqrt(2)", 0, seeds, 0.90, 0};
    const DenseMatrix u = random_orthonormal(n, d, derive_seed(base_seed, "basis"));
    const double floor = 1.0 / std::sqrt(2.0);
    for (std::size_t s = 0; s < seeds; ++s) {
        const std::uint64_t seed = base_seed + s;
        const SignDiagonal signs = sample_signs(n, derive_seed(seed, "signs"));
        const SamplingPlan plan = draw_sampling_plan(n, r, derive_seed(seed, "sampling"));
        DenseMatrix xu = partial_rht_rows(u, signs, plan.indices);
        for (double& v : xu.data()) v *= plan.scale;
        if (min_sigma_sq(xu) >= floor) ++res.passes;
    }
    return res;
}

EnsembleResult projection_embedding_ensemble(std::size_t n, std::size_t d, std::size_t k, double q,
                                             std::size_t seeds, std::uint64_t base_seed) {
    EnsembleResult res{"sigma_min^2(THDU) >= 1/sqrt(2)", 0, seeds, 0.90, 0};
    const DenseMatrix u = random_orthonormal(n, d, derive_seed(base_seed, "basis"));
    const double floor = 1.0 / std::sqrt(2.0);
    for (std::size_t s = 0; s < seeds; ++s) {
        const std::uint64_t seed = base_seed + s;
        const SignDiagonal signs = sample_signs(n, derive_seed(seed, "signs"));
        const SparseProjection t = draw_sparse_projection(k, n, q, derive_seed(seed, "projection"));
        if (min_sigma_sq(apply_sparse_projection(t, apply_rht(u, signs))) >= floor) ++res.passes;
    }
    return res;
}

EnsembleResult residual_guarantee_ensemble(SketchAlgorithm algorithm, std::size_t n, std::size_t d,
                                           std::size_t sketch_rows, double eps, std::size_t seeds,
                                           std::uint64_t base_seed) {
    EnsembleResult res{algorithm == SketchAlgorithm::Sampling
                           ? "sampling: residual <= (1+eps) Z"
                           : "projection: residual <= (1+eps) Z",
                       0, seeds, 0.80, 0};
    SketchParams params = practical_params(next_power_of_two(n), d, eps);
    params.r = sketch_rows;
    params.k = sketch_rows;
    SolveOptions opt;
    opt.diagnostics = true;
    for (std::size_t s = 0; s < seeds; ++s) {
        const std::uint64_t seed = base_seed + s;
        const LsProblem p = gen_problem(
            {ProblemKind::GaussianIncoherent, n, d, 10.0, 0.9, derive_seed(seed, "problem")});
        const Vector x_opt = solve_exact_ls(p.a(), p.b());
        const double z = norm2(subtract(matvec(p.a(), x_opt), p.b()));
        const SketchOutcome out = algorithm == SketchAlgorithm::Sampling
                                      ? sketch_solve_sampling(p, params, seed, opt)
                                      : sketch_solve_projection(p, params, seed, opt);
        const bool residual_ok = out.residual_tilde <= (1.0 + eps) * z;
        if (residual_ok) ++res.passes;
        const Diagnostics& diag = *out.diagnostics;
        if (diag.cond8_ok && diag.cond9_ok) {
            const double sigma_min = gram_singular_values(p.a()).back();
            const double fwd = norm2(subtract(x_opt, out.x_tilde));
            if (!residual_ok || fwd > std::sqrt(eps) * z / sigma_min) ++res.exceptions;
        }
    }
    return res;
}

EnsembleResult matmul_ensemble(std::size_t m, std::size_t n, double eps, double delta,
                               std::size_t seeds, std::uint64_t base_seed) {
    EnsembleResult res{"||AA^T - CC^T||_2 <= eps", 0, seeds, 1.0 - delta, 0};
    const DenseMatrix a =
        rescale_to_unit_spectral_norm(gaussian_matrix(m, n, derive_seed(base_seed, "matrix")));
    require_matmul_hypotheses(a);
    const double f = a.frobenius_norm();
    const std::size_t c = c_lower_bound(f * f, 1.0, eps, delta);
    const ColumnSampler sampler = norm_squared_sampler(a, c);
    for (std::size_t s = 0; s < seeds; ++s) {
        if (matmul_error_from_gram(a, sampled_gram(a, sampler, base_seed + s)) <= eps) ++res.passes;
    }
    return res;
}

std::vector<EnsembleResult> run_verification_ensembles(std::size_t seeds, std::uint64_t base_seed) {
    constexpr std::size_t n = 1024;
    constexpr std::size_t d = 8;
    const double q = practical_projection_params(n, d, 0.25).q;
    return {
        energy_spreading_ensemble(n, d, seeds, base_seed),
        coordinate_bound_ensemble(n, d, seeds, base_seed),
        sampling_embedding_ensemble(n, d, 256, seeds, base_seed),
        projection_embedding_ensemble(n, d, 256, q, seeds, base_seed),
        residual_guarantee_ensemble(SketchAlgorithm::Sampling, n, d, 256, 0.5, seeds, base_seed),
        residual_guarantee_ensemble(SketchAlgorithm::Projection, n, d, 128, 0.5, seeds, base_seed),
        matmul_ensemble(8, 100, 0.5, 0.1, seeds, base_seed),
    };
}

}  // namespace lsketch
