#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "lsketch/matrix.hpp"
#include "lsketch/solver.hpp"

namespace lsketch {

enum class ProblemKind {
    GaussianIncoherent,  ///< random orthonormal factors, geometric spectrum
    CoherentSpiked,      ///< U_A row norms concentrated on the first d rows
    IllConditioned,      ///< unit spectrum except one singular value at 1/kappa
};

std::string_view to_string(ProblemKind kind) noexcept;
/// Accepts "gaussian", "coherent", "ill-conditioned" and the enum spellings.
ProblemKind parse_problem_kind(std::string_view name);

struct ProblemSpec {
    ProblemKind kind = ProblemKind::GaussianIncoherent;
    std::size_t n = 0;
    std::size_t d = 0;
    double kappa_target = 1.0;
    double gamma_target = 1.0;
    std::uint64_t seed = 0;

    friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

/// n x d matrix of independent standard normals.
DenseMatrix gaussian_matrix(std::size_t n, std::size_t d, std::uint64_t seed);
/// Orthonormal basis of a Gaussian n x d matrix.
DenseMatrix random_orthonormal(std::size_t n, std::size_t d, std::uint64_t seed);

/// Builds A = U diag(sigma) V^T with kappa(A) = kappa_target and
/// b = gamma u + sqrt(1 - gamma^2) w, where u is a unit vector in range(A)
/// and w a unit vector orthogonal to it. InvalidSpec on bad fields.
LsProblem gen_problem(const ProblemSpec& spec);

}  // namespace lsketch
