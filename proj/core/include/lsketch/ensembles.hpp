#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace lsketch {

/// Pass count of one seeded property ensemble against its required rate.
struct EnsembleResult {
    std::string name;
    std::size_t passes = 0;
    std::size_t trials = 0;
    double required_rate = 0.0;
    /// For deterministic implications: trials where the premise held and the
    /// conclusion failed. Must be zero.
    std::size_t exceptions = 0;

    double rate() const noexcept {
        return trials == 0 ? 0.0 : static_cast<double>(passes) / static_cast<double>(trials);
    }
    bool ok() const noexcept { return rate() >= required_rate && exceptions == 0; }
};

/// max_i ||(HDU)_(i)||^2 <= 2d ln(40nd)/n for a fixed orthonormal n x d U.
EnsembleResult energy_spreading_ensemble(std::size_t n, std::size_t d, std::size_t seeds,
                                         std::uint64_t base_seed);
/// |(HDU)_ij| <= sqrt(2 ln(40nd)/n) for every entry.
EnsembleResult coordinate_bound_ensemble(std::size_t n, std::size_t d, std::size_t seeds,
                                         std::uint64_t base_seed);
/// sigma_min^2(S^T HDU) >= 1/sqrt(2) with r sampled rows.
EnsembleResult sampling_embedding_ensemble(std::size_t n, std::size_t d, std::size_t r,
                                           std::size_t seeds, std::uint64_t base_seed);
/// sigma_min^2(THDU) >= 1/sqrt(2) with a k x n projection of sparsity q.
EnsembleResult projection_embedding_ensemble(std::size_t n, std::size_t d, std::size_t k, double q,
                                             std::size_t seeds, std::uint64_t base_seed);

enum class SketchAlgorithm { Sampling, Projection };

/// ||A x_tilde - b|| <= (1 + eps) Z on Gaussian problems (gamma 0.9, kappa 10).
/// Exceptions count seeds where both structural conditions held but the
/// residual or forward-error guarantee failed.
EnsembleResult residual_guarantee_ensemble(SketchAlgorithm algorithm, std::size_t n, std::size_t d,
                                           std::size_t sketch_rows, double eps, std::size_t seeds,
                                           std::uint64_t base_seed);
/// ||A A^T - C C^T||_2 <= eps for Exactly(c) on a rescaled m x n Gaussian matrix
/// with c from the sample-size bound.
EnsembleResult matmul_ensemble(std::size_t m, std::size_t n, double eps, double delta,
                               std::size_t seeds, std::uint64_t base_seed);

/// The default battery run by `lsketch verify`.
std::vector<EnsembleResult> run_verification_ensembles(std::size_t seeds, std::uint64_t base_seed);

}  // namespace lsketch
