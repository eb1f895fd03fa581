#include "lsketch/problems.hpp"

#include <cmath>
#include <string>

#include "lsketch/error.hpp"
#include "lsketch/linalg.hpp"
#include "lsketch/random.hpp"

namespace lsketch {

std::string_view to_string(ProblemKind kind) noexcept {
    switch (kind) {
        case ProblemKind::GaussianIncoherent: return "gaussian";
        case ProblemKind::CoherentSpiked: return "coherent";
        case ProblemKind::IllConditioned: return "ill-conditioned";
    }
    return "unknown";
}

ProblemKind parse_problem_kind(std::string_view name) {
    if (name == "gaussian" || name == "GaussianIncoherent") return ProblemKind::GaussianIncoherent;
    if (name == "coherent" || name == "CoherentSpiked") return ProblemKind::CoherentSpiked;
    if (name == "ill-conditioned" || name == "IllConditioned") return ProblemKind::IllConditioned;
    raise(ErrorKind::InvalidSpec, "unknown problem kind '" + std::string(name) + "'");
}

DenseMatrix gaussian_matrix(std::size_t n, std::size_t d, std::uint64_t seed) {
    RandomStream rng(seed, "gaussian-matrix");
    DenseMatrix g(n, d);
    for (double& v : g.data()) v = rng.normal();
    return g;
}

DenseMatrix random_orthonormal(std::size_t n, std::size_t d, std::uint64_t seed) {
    return orthonormal_basis(gaussian_matrix(n, d, seed));
}

namespace {

DenseMatrix left_factor(const ProblemSpec& spec) {
    const std::uint64_t seed = derive_seed(spec.seed, "left-factor");
    if (spec.kind != ProblemKind::CoherentSpiked) return random_orthonormal(spec.n, spec.d, seed);
    // A large multiple of I_d on top of a Gaussian block: after
    // orthonormalization nearly all of each column's mass sits in one of the
    // first d rows.
    DenseMatrix g = gaussian_matrix(spec.n, spec.d, seed);
    const double spike = 100.0 * std::sqrt(static_cast<double>(spec.n));
    for (std::size_t j = 0; j < spec.d; ++j) g(j, j) += spike;
    return orthonormal_basis(g);
}

Vector spectrum(const ProblemSpec& spec) {
    Vector sigma(spec.d, 1.0);
    if (spec.d == 1) return sigma;
    if (spec.kind == ProblemKind::IllConditioned) {
        sigma.back() = 1.0 / spec.kappa_target;
        return sigma;
    }
    // Geometric from kappa down to 1.
    const double steps = static_cast<double>(spec.d - 1);
    for (std::size_t i = 0; i < spec.d; ++i) {
        sigma[i] = std::pow(spec.kappa_target, static_cast<double>(spec.d - 1 - i) / steps);
    }
    return sigma;
}

}  // namespace

LsProblem gen_problem(const ProblemSpec& spec) {
    require(spec.d >= 1 && spec.n >= spec.d, ErrorKind::InvalidSpec, "need n >= d >= 1");
    require(spec.kappa_target >= 1.0 && std::isfinite(spec.kappa_target), ErrorKind::InvalidSpec,
            "kappa_target must be >= 1");
    require(spec.gamma_target > 0.0 && spec.gamma_target <= 1.0, ErrorKind::InvalidSpec,
            "gamma_target must lie in (0, 1]");
    require(spec.gamma_target == 1.0 || spec.n > spec.d, ErrorKind::InvalidSpec,
            "gamma_target < 1 needs n > d (no room for a residual)");

    const DenseMatrix u = left_factor(spec);
    const DenseMatrix v = random_orthonormal(spec.d, spec.d, derive_seed(spec.seed, "right-factor"));
    const Vector sigma = spectrum(spec);

    DenseMatrix us = u;
    for (std::size_t j = 0; j < spec.d; ++j)
        for (double& x : us.col(j)) x *= sigma[j];
    DenseMatrix a = matmul(us, v.transpose());

    RandomStream rng(spec.seed, "rhs");
    Vector coeff(spec.d);
    for (double& c : coeff) c = rng.normal();
    Vector in_range = matvec(u, coeff);
    const double in_norm = norm2(in_range);
    for (double& x : in_range) x /= in_norm;

    const double g = spec.gamma_target;
    Vector b = in_range;
    for (double& x : b) x *= g;
    if (g < 1.0) {
        Vector w(spec.n);
        for (double& x : w) x = rng.normal();
        // Two projection passes leave w orthogonal to range(U) to rounding level.
        w = project_out(u, project_out(u, w));
        const double w_norm = norm2(w);
        const double weight = std::sqrt(1.0 - g * g) / w_norm;
        for (std::size_t i = 0; i < spec.n; ++i) b[i] += weight * w[i];
    }
    return LsProblem(std::move(a), std::move(b));
}

}  // namespace lsketch
