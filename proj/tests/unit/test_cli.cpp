#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "lsketch/matrix_io.hpp"

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(LSKETCH_CLI_PATH) + " " + args + " 2>/dev/null";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) return r;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::filesystem::path temp(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("lsketch_cli_" + name);
}

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) n += (c == '\n');
    return n;
}

}  // namespace

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run("--help").code, 0); }

TEST(Cli, UsageErrorsExitOne) {
    EXPECT_EQ(run("").code, 1);
    EXPECT_EQ(run("solve --method teleport").code, 1);
    EXPECT_EQ(run("bench --config /nonexistent.json").code, 1);
    EXPECT_EQ(run("solve --n 4 --d 8").code, 1);
}

TEST(Cli, SolveSamplingPrintsSummary) {
    const auto r = run("solve --method sampling --n 512 --d 4 --r 64 --seed 3");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(count_lines(r.out), 2u);
    EXPECT_EQ(r.out.rfind("method,n,d", 0), 0u);
    EXPECT_NE(r.out.find("\nsampling,512,4,"), std::string::npos);
}

TEST(Cli, SolveIsDeterministic) {
    const std::string cmd = "solve --method projection --n 300 --d 3 --k 32 --q 0.5 --seed 9 "
                            "--format json --diagnostics";
    const auto a = run(cmd);
    const auto b = run(cmd);
    ASSERT_EQ(a.code, 0);
    auto strip_times = [](std::string s) { return s.substr(0, s.find("\"time_")); };
    EXPECT_EQ(strip_times(a.out), strip_times(b.out));
    EXPECT_NE(a.out.find("\"cond8_ok\""), std::string::npos);
}

TEST(Cli, GenThenSolveFromFiles) {
    const auto a = temp("A.csv"), b = temp("b.csv"), x = temp("x.csv");
    ASSERT_EQ(run("gen --n 100 --d 3 --gamma 1 --A " + a.string() + " --b " + b.string()).code,
              0);
    const auto r = run("solve --method exact --A " + a.string() + " --b " + b.string() +
                       " --out " + x.string());
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(lsketch::load_vector_csv(x).size(), 3u);
    for (const auto& p : {a, b, x}) std::filesystem::remove(p);
}

TEST(Cli, RankDeficientInputExitsTwo) {
    const auto a = temp("rank.csv"), b = temp("rank_b.csv");
    {
        std::ofstream fa(a), fb(b);
        fa << "1,2\n2,4\n3,6\n";
        fb << "1\n2\n3\n";
    }
    EXPECT_EQ(run("solve --method exact --A " + a.string() + " --b " + b.string()).code, 2);
    for (const auto& p : {a, b}) std::filesystem::remove(p);
}

TEST(Cli, BenchWritesReport) {
    const auto cfg = temp("cfg.json"), out = temp("report.csv");
    {
        std::ofstream f(cfg);
        f << R"({"problems":[{"n":256,"d":4,"kappa":10,"gamma":0.9}],)"
          << R"("methods":["exact","sampling"],"seeds":2})";
    }
    EXPECT_EQ(run("bench --config " + cfg.string() + " --out " + out.string()).code, 0);
    std::ifstream in(out);
    std::string all((std::istreambuf_iterator<char>(in)), {});
    EXPECT_EQ(count_lines(all), 5u);
    for (const auto& p : {cfg, out}) std::filesystem::remove(p);
}

TEST(Cli, VerifyPrintsOneLinePerEnsemble) {
    const auto r = run("verify --seeds 5");
    EXPECT_EQ(r.code, 0);
    EXPECT_GE(count_lines(r.out), 6u);
}
