#include "lsketch/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

#include "lsketch/error.hpp"
#include "lsketch/hadamard.hpp"
#include "lsketch/linalg.hpp"
#include "lsketch/random.hpp"

namespace lsketch {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
    raise(ErrorKind::ConfigError, where + ": " + what);
}

template <typename T>
T field(const json& obj, const char* key, const std::string& path, T fallback) {
    const auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        config_error(path + "." + key, "has the wrong type");
    }
}

template <typename T>
T required_field(const json& obj, const char* key, const std::string& path) {
    if (!obj.contains(key)) config_error(path + "." + key, "is required");
    return field<T>(obj, key, path, T{});
}

template <typename T>
std::optional<T> optional_field(const json& obj, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        config_error(key, "has the wrong type");
    }
}

ProblemSpec parse_problem(const json& j, const std::string& path) {
    if (!j.is_object()) config_error(path, "must be an object");
    ProblemSpec spec;
    try {
        spec.kind = parse_problem_kind(field<std::string>(j, "kind", path, "gaussian"));
    } catch (const Error& e) {
        config_error(path + ".kind", e.what());
    }
    spec.n = required_field<std::size_t>(j, "n", path);
    spec.d = required_field<std::size_t>(j, "d", path);
    spec.kappa_target = field<double>(j, "kappa", path, 1.0);
    spec.gamma_target = field<double>(j, "gamma", path, 1.0);
    spec.seed = field<std::uint64_t>(j, "seed", path, 0);
    if (spec.d < 1 || spec.n < spec.d) config_error(path, "needs n >= d >= 1");
    if (!(spec.kappa_target >= 1.0)) config_error(path + ".kappa", "must be >= 1");
    if (!(spec.gamma_target > 0.0 && spec.gamma_target <= 1.0))
        config_error(path + ".gamma", "must lie in (0, 1]");
    return spec;
}

// Per-problem quantities shared by every cell.
struct Reference {
    Vector x_opt;
    double z = 0.0;
    double x_norm = 0.0;
    ErrorBounds bounds;
    PhaseTimings timings;
};

Reference reference_solution(const LsProblem& p, double eps) {
    Reference ref;
    const auto start = std::chrono::steady_clock::now();
    ref.x_opt = solve_exact_ls(p.a(), p.b());
    ref.timings.small_solve =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ref.timings.total = ref.timings.small_solve;
    ref.z = norm2(subtract(matvec(p.a(), ref.x_opt), p.b()));
    ref.x_norm = norm2(ref.x_opt);
    const Vector sv = gram_singular_values(p.a());
    const DenseMatrix u = orthonormal_basis(p.a());
    const double gamma = gamma_fraction(u, p.b());
    ref.bounds = predicted_error_bounds(sv.front() / sv.back(), gamma, eps, ref.x_norm, ref.z,
                                        sv.back());
    return ref;
}

ReportRow make_row(const ProblemSpec& spec, Method method, const SketchParams& params,
                   std::uint64_t seed, const Reference& ref, const Vector& x, double residual,
                   std::size_t retries, const PhaseTimings& timings) {
    ReportRow row;
    row.spec = spec;
    row.method = method;
    row.epsilon = params.epsilon;
    row.r = params.r;
    row.k = params.k;
    row.q = params.q;
    row.seed = seed;
    row.residual = residual;
    row.z_exact = ref.z;
    if (ref.z > 0.0) {
        row.rel_error = residual / ref.z;
    } else {
        row.rel_error = residual == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    }
    row.forward_error = norm2(subtract(x, ref.x_opt));
    row.residual_bound_ok = residual <= ref.bounds.residual_bound;
    const double slack = 1e-10 * ref.x_norm;
    row.forward_bound_ok = ref.bounds.forward_bound_gamma.has_value() &&
                           row.forward_error <= *ref.bounds.forward_bound_gamma + slack;
    row.retries = retries;
    row.timings = timings;
    return row;
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        raise(ErrorKind::ConfigError, std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) config_error("config", "top level must be an object");

    ExperimentConfig cfg;
    if (!doc.contains("problems") || !doc["problems"].is_array() || doc["problems"].empty())
        config_error("problems", "must be a non-empty array");
    for (std::size_t i = 0; i < doc["problems"].size(); ++i) {
        cfg.problems.push_back(
            parse_problem(doc["problems"][i], "problems[" + std::to_string(i) + "]"));
    }
    if (doc.contains("methods")) {
        if (!doc["methods"].is_array() || doc["methods"].empty())
            config_error("methods", "must be a non-empty array");
        cfg.methods.clear();
        for (std::size_t i = 0; i < doc["methods"].size(); ++i) {
            const std::string where = "methods[" + std::to_string(i) + "]";
            if (!doc["methods"][i].is_string()) config_error(where, "must be a string");
            try {
                cfg.methods.push_back(parse_method(doc["methods"][i].get<std::string>()));
            } catch (const Error& e) {
                config_error(where, e.what());
            }
        }
    }
    cfg.epsilon = field<double>(doc, "eps", "config", cfg.epsilon);
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) config_error("eps", "must lie in (0, 1)");
    cfg.seeds = field<std::size_t>(doc, "seeds", "config", cfg.seeds);
    if (cfg.seeds < 1) config_error("seeds", "must be >= 1");
    cfg.base_seed = field<std::uint64_t>(doc, "seed", "config", cfg.base_seed);
    cfg.r = optional_field<std::size_t>(doc, "r");
    cfg.k = optional_field<std::size_t>(doc, "k");
    cfg.q = optional_field<double>(doc, "q");
    if (cfg.q && !(*cfg.q > 0.0 && *cfg.q <= 1.0)) config_error("q", "must lie in (0, 1]");
    cfg.theory = field<bool>(doc, "theory", "config", cfg.theory);
    cfg.c_q = field<double>(doc, "c_q", "config", cfg.c_q);
    cfg.c_k = field<double>(doc, "c_k", "config", cfg.c_k);
    cfg.best_of = field<std::size_t>(doc, "best_of", "config", cfg.best_of);
    if (cfg.best_of < 1) config_error("best_of", "must be >= 1");
    cfg.full_sketch = field<bool>(doc, "full_sketch", "config", cfg.full_sketch);
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorKind::IoError, "cannot open config '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

SketchParams resolve_params(std::size_t padded_n, std::size_t d, const ExperimentConfig& config) {
    SketchParams p = config.theory
                         ? theory_params(padded_n, d, config.epsilon, config.c_q, config.c_k)
                         : practical_params(padded_n, d, config.epsilon);
    if (config.r) {
        p.r = *config.r;
        p.mode = SizingMode::UserOverride;
    }
    if (config.k) {
        p.k = *config.k;
        p.mode = SizingMode::UserOverride;
    }
    if (config.q) {
        p.q = *config.q;
        p.mode = SizingMode::UserOverride;
    }
    return p;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    ExperimentReport report;
    for (const auto& spec : config.problems) {
        const LsProblem problem = gen_problem(spec);
        const Reference ref = reference_solution(problem, config.epsilon);
        const std::size_t padded_n = problem.padded_n();
        SketchParams params = resolve_params(padded_n, problem.d(), config);
        if (config.full_sketch) params.r = padded_n;

        for (Method method : config.methods) {
            for (std::size_t s = 0; s < config.seeds; ++s) {
                const std::uint64_t seed = config.base_seed + s;
                if (method == Method::Exact) {
                    report.rows.push_back(make_row(spec, method, params, seed, ref, ref.x_opt,
                                                   ref.z, 0, ref.timings));
                    continue;
                }
                SolveOptions opt;
                opt.best_of = config.best_of;
                if (method == Method::Cgnr) opt.small_solver = SmallSolver::Cgnr;

                SketchOutcome out;
                if (method == Method::Projection) {
                    out = sketch_solve_projection(problem, params, seed, opt);
                } else if (config.full_sketch) {
                    out = sketch_solve_sampling_fixed(
                        problem, sample_signs(padded_n, derive_seed(seed, "signs")),
                        full_sampling_plan(padded_n), config.epsilon, opt);
                } else {
                    out = sketch_solve_sampling(problem, params, seed, opt);
                }
                report.rows.push_back(make_row(spec, method, params, seed, ref, out.x_tilde,
                                               out.residual_tilde, out.retries, out.timings));
            }
        }
    }
    return report;
}

}  // namespace lsketch
