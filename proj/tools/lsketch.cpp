#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "lsketch/ensembles.hpp"
#include "lsketch/error.hpp"
#include "lsketch/experiment.hpp"
#include "lsketch/linalg.hpp"
#include "lsketch/matrix_io.hpp"
#include "lsketch/problems.hpp"
#include "lsketch/report.hpp"
#include "lsketch/solver.hpp"

namespace {

using namespace lsketch;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct ProblemArgs {
    std::string kind = "gaussian";
    std::size_t n = 1024;
    std::size_t d = 8;
    double kappa = 10.0;
    double gamma = 0.9;
    std::uint64_t seed = 0;
};

struct SolveArgs {
    ProblemArgs problem;
    std::string method = "sampling";
    double eps = 0.5;
    std::optional<std::size_t> r;
    std::optional<std::size_t> k;
    std::optional<double> q;
    bool theory = false;
    double c_q = 1.0;
    double c_k = 1.0;
    std::uint64_t seed = 0;
    std::size_t best_of = 1;
    std::string a_path;
    std::string b_path;
    bool header = false;
    bool diagnostics = false;
    std::string out;
    std::string format = "csv";
};

struct GenArgs {
    ProblemArgs problem;
    std::string a_path;
    std::string b_path;
};

struct BenchArgs {
    std::string config;
    std::string out;
    std::string format = "csv";
    std::optional<std::size_t> seeds;
    std::optional<std::uint64_t> seed;
    bool no_timings = false;
};

struct VerifyArgs {
    std::size_t seeds = 100;
    std::uint64_t seed = 1;
};

void add_problem_options(CLI::App* cmd, ProblemArgs& p) {
    cmd->add_option("--kind", p.kind, "Synthetic problem kind")
        ->check(CLI::IsMember({"gaussian", "coherent", "ill-conditioned"}));
    cmd->add_option("--n", p.n, "Rows of A")->check(CLI::PositiveNumber);
    cmd->add_option("--d", p.d, "Columns of A")->check(CLI::PositiveNumber);
    cmd->add_option("--kappa", p.kappa, "Target condition number");
    cmd->add_option("--gamma", p.gamma, "Target fraction of ||b|| inside range(A)");
    cmd->add_option("--problem-seed", p.seed, "Seed for the synthetic problem");
}

LsProblem make_problem(const ProblemArgs& p) {
    return gen_problem({parse_problem_kind(p.kind), p.n, p.d, p.kappa, p.gamma, p.seed});
}

LsProblem load_problem(const SolveArgs& args) {
    if (args.a_path.empty()) return make_problem(args.problem);
    if (args.b_path.empty()) raise(ErrorKind::InvalidArgument, "--A requires --b");
    return LsProblem(load_matrix_csv(args.a_path, args.header),
                     load_vector_csv(args.b_path, args.header));
}

SketchParams solve_params(const LsProblem& p, const SolveArgs& args) {
    ExperimentConfig cfg;
    cfg.epsilon = args.eps;
    cfg.r = args.r;
    cfg.k = args.k;
    cfg.q = args.q;
    cfg.theory = args.theory;
    cfg.c_q = args.c_q;
    cfg.c_k = args.c_k;
    return resolve_params(p.padded_n(), p.d(), cfg);
}

void print_summary(std::ostream& os, const std::string& format, const std::string& method,
                   const LsProblem& p, const SketchParams& params, std::uint64_t seed,
                   double residual, double z, std::size_t retries, const PhaseTimings& t,
                   const std::optional<Diagnostics>& diag) {
    const double rel = z > 0.0 ? residual / z : (residual == 0.0 ? 1.0 : INFINITY);
    if (format == "json") {
        os << "{\"method\":\"" << method << "\",\"n\":" << p.n() << ",\"d\":" << p.d()
           << ",\"eps\":" << format_real(params.epsilon) << ",\"r\":" << params.r
           << ",\"k\":" << params.k << ",\"q\":" << format_real(params.q) << ",\"seed\":" << seed
           << ",\"residual\":" << format_real(residual) << ",\"z_exact\":" << format_real(z)
           << ",\"rel_error\":" << (std::isfinite(rel) ? format_real(rel) : "null")
           << ",\"retries\":" << retries << ",\"theory_clamped\":"
           << (params.theory_clamped ? "true" : "false") << ",\"time_transform\":"
           << format_real(t.transform) << ",\"time_sketch_apply\":" << format_real(t.sketch_apply)
           << ",\"time_small_solve\":" << format_real(t.small_solve)
           << ",\"time_total\":" << format_real(t.total);
        if (diag) {
            os << ",\"sigma_min_xu\":" << format_real(diag->sigma_xu.back())
               << ",\"cross_term\":" << format_real(diag->cross_term)
               << ",\"gamma\":" << format_real(diag->gamma)
               << ",\"kappa\":" << format_real(diag->kappa)
               << ",\"cond8_ok\":" << (diag->cond8_ok ? "true" : "false")
               << ",\"cond9_ok\":" << (diag->cond9_ok ? "true" : "false");
        }
        os << "}\n";
        return;
    }
    os << "method,n,d,eps,r,k,q,seed,residual,z_exact,rel_error,retries,theory_clamped,"
          "time_transform,time_sketch_apply,time_small_solve,time_total";
    if (diag) os << ",sigma_min_xu,cross_term,gamma,kappa,cond8_ok,cond9_ok";
    os << '\n'
       << method << ',' << p.n() << ',' << p.d() << ',' << format_real(params.epsilon) << ','
       << params.r << ',' << params.k << ',' << format_real(params.q) << ',' << seed << ','
       << format_real(residual) << ',' << format_real(z) << ',' << format_real(rel) << ','
       << retries << ',' << (params.theory_clamped ? "true" : "false") << ','
       << format_real(t.transform) << ',' << format_real(t.sketch_apply) << ','
       << format_real(t.small_solve) << ',' << format_real(t.total);
    if (diag) {
        os << ',' << format_real(diag->sigma_xu.back()) << ',' << format_real(diag->cross_term)
           << ',' << format_real(diag->gamma) << ',' << format_real(diag->kappa) << ','
           << (diag->cond8_ok ? "true" : "false") << ',' << (diag->cond9_ok ? "true" : "false");
    }
    os << '\n';
}

int run_solve(const SolveArgs& args) {
    const LsProblem p = load_problem(args);
    const Method method = parse_method(args.method);
    SketchParams params = solve_params(p, args);
    const Vector x_opt = solve_exact_ls(p.a(), p.b());
    const double z = norm2(subtract(matvec(p.a(), x_opt), p.b()));

    Vector x;
    double residual = z;
    std::size_t retries = 0;
    PhaseTimings timings;
    std::optional<Diagnostics> diag;
    if (method == Method::Exact) {
        x = x_opt;
    } else {
        SolveOptions opt;
        opt.best_of = args.best_of;
        opt.diagnostics = args.diagnostics;
        if (method == Method::Cgnr) opt.small_solver = SmallSolver::Cgnr;
        const SketchOutcome out = method == Method::Projection
                                      ? sketch_solve_projection(p, params, args.seed, opt)
                                      : sketch_solve_sampling(p, params, args.seed, opt);
        x = out.x_tilde;
        residual = out.residual_tilde;
        retries = out.retries;
        timings = out.timings;
        diag = out.diagnostics;
    }
    print_summary(std::cout, args.format, args.method, p, params, args.seed, residual, z, retries,
                  timings, diag);
    if (!args.out.empty()) save_vector_csv(x, args.out);
    return kExitOk;
}

int run_gen(const GenArgs& args) {
    const LsProblem p = make_problem(args.problem);
    save_matrix_csv(p.a(), args.a_path);
    save_vector_csv(p.b(), args.b_path);
    return kExitOk;
}

int run_bench(const BenchArgs& args) {
    ExperimentConfig cfg = load_config(args.config);
    if (args.seeds) cfg.seeds = *args.seeds;
    if (args.seed) cfg.base_seed = *args.seed;
    const ExperimentReport report = run_experiment(cfg);
    const ReportFormat format = parse_report_format(args.format);
    if (args.out.empty()) {
        emit_report(report, format, std::cout, !args.no_timings);
    } else {
        emit_report(report, format, std::filesystem::path(args.out), !args.no_timings);
    }
    return kExitOk;
}

int run_verify(const VerifyArgs& args) {
    const auto results = run_verification_ensembles(args.seeds, args.seed);
    for (const auto& r : results) {
        std::printf("%-44s %4zu/%-4zu rate %.3f (floor %.2f, exceptions %zu)  %s\n",
                    r.name.c_str(), r.passes, r.trials, r.rate(), r.required_rate, r.exceptions,
                    r.ok() ? "PASS" : "FAIL");
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Randomized least-squares sketching: solve, benchmark and verify"};
    app.require_subcommand(1);

    SolveArgs solve;
    auto* solve_cmd = app.add_subcommand("solve", "Solve one problem with one method");
    add_problem_options(solve_cmd, solve.problem);
    solve_cmd->add_option("--method", solve.method, "Solver")
        ->check(CLI::IsMember({"exact", "sampling", "projection", "cgnr"}));
    solve_cmd->add_option("--eps", solve.eps, "Target accuracy epsilon");
    solve_cmd->add_option("--r", solve.r, "Sampled rows (overrides the default)");
    solve_cmd->add_option("--k", solve.k, "Projected rows (overrides the default)");
    solve_cmd->add_option("--q", solve.q, "Projection sparsity (overrides the default)");
    solve_cmd->add_flag("--theory", solve.theory, "Use the worst-case sizing formulas");
    solve_cmd->add_option("--c-q", solve.c_q, "Constant in the sparsity formula");
    solve_cmd->add_option("--c-k", solve.c_k, "Constant in the projection-size formula");
    solve_cmd->add_option("--seed", solve.seed, "Seed for the sketch");
    solve_cmd->add_option("--best-of", solve.best_of, "Independent trials, keep the best")
        ->check(CLI::PositiveNumber);
    solve_cmd->add_option("--A", solve.a_path, "CSV file holding A");
    solve_cmd->add_option("--b", solve.b_path, "CSV file holding b");
    solve_cmd->add_flag("--header", solve.header, "Skip one header line in CSV inputs");
    solve_cmd->add_flag("--diagnostics", solve.diagnostics, "Report the embedding diagnostics");
    solve_cmd->add_option("--out", solve.out, "Write the solution vector to this CSV file");
    solve_cmd->add_option("--format", solve.format, "Summary format")
        ->check(CLI::IsMember({"csv", "json"}));

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "Write a synthetic problem as CSV files");
    add_problem_options(gen_cmd, gen.problem);
    gen_cmd->add_option("--A", gen.a_path, "Output CSV for A")->required();
    gen_cmd->add_option("--b", gen.b_path, "Output CSV for b")->required();

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Run a JSON-configured experiment sweep");
    bench_cmd->add_option("--config", bench.config, "Experiment config (JSON)")->required();
    bench_cmd->add_option("--out", bench.out, "Report path (stdout when omitted)");
    bench_cmd->add_option("--format", bench.format, "Report format")
        ->check(CLI::IsMember({"csv", "json"}));
    bench_cmd->add_option("--seeds", bench.seeds, "Override the number of seeds per cell");
    bench_cmd->add_option("--seed", bench.seed, "Override the base seed");
    bench_cmd->add_flag("--no-timings", bench.no_timings, "Zero the wall-clock columns");

    VerifyArgs verify;
    auto* verify_cmd = app.add_subcommand("verify", "Run the property ensembles");
    verify_cmd->add_option("--seeds", verify.seeds, "Seeds per ensemble")
        ->check(CLI::PositiveNumber);
    verify_cmd->add_option("--seed", verify.seed, "Base seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*solve_cmd) return run_solve(solve);
        if (*gen_cmd) return run_gen(gen);
        if (*bench_cmd) return run_bench(bench);
        if (*verify_cmd) return run_verify(verify);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        const bool numerical =
            e.kind() == ErrorKind::RankDeficient || e.kind() == ErrorKind::ConvergenceFailure;
        return numerical ? kExitNumerical : kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
