#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "lsketch/problems.hpp"
#include "lsketch/report.hpp"
#include "lsketch/sketches.hpp"

namespace lsketch {

/// A sweep over problems x methods x seeds.
///
/// JSON layout (every key except "problems" is optional):
///
///     {
///       "problems": [{"kind": "gaussian", "n": 1024, "d": 8,
///                     "kappa": 10, "gamma": 0.9, "seed": 1}],
///       "methods": ["exact", "sampling", "projection", "cgnr"],
///       "eps": 0.5, "seeds": 10, "seed": 0,
///       "r": 256, "k": 128, "q": 1.0,
///       "theory": false, "c_q": 1.0, "c_k": 1.0,
///       "best_of": 1, "full_sketch": false
///     }
///
/// Cell seeds are seed, seed + 1, ..., seed + seeds - 1. "full_sketch" makes
/// the sampling methods keep every row once (S = I), a sanity check whose
/// answer must match the exact solve.
struct ExperimentConfig {
    std::vector<ProblemSpec> problems;
    std::vector<Method> methods = {Method::Exact, Method::Sampling, Method::Projection};
    double epsilon = 0.5;
    std::size_t seeds = 1;
    std::uint64_t base_seed = 0;
    std::optional<std::size_t> r;
    std::optional<std::size_t> k;
    std::optional<double> q;
    bool theory = false;
    double c_q = 1.0;
    double c_k = 1.0;
    std::size_t best_of = 1;
    bool full_sketch = false;
};

/// ConfigError with the offending field path (e.g. "problems[1].n") or the
/// JSON parse position.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Sketch sizes for one problem under a config: theory formulas or practical
/// defaults, then any explicit r/k/q overrides. Sizes refer to the padded n.
SketchParams resolve_params(std::size_t padded_n, std::size_t d, const ExperimentConfig& config);

/// Runs every cell; rows come out ordered by (problem, method, seed). The exact
/// solution is computed once per problem and reused by every cell.
ExperimentReport run_experiment(const ExperimentConfig& config);

}  // namespace lsketch
