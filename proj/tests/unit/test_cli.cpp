#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "helmsplit/cli.hpp"

using namespace helmsplit;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), {}};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string line;
    while (std::getline(ss, line)) {
        out.push_back(line);
    }
    return out;
}

std::string tmp(const std::string& name) { return (std::filesystem::temp_directory_path() / name).string(); }

}  // namespace

TEST(Cli, Eval3dFigureData) {
    const auto r = run({"eval3d", "--n", "4", "--k", "1", "--r-range", "0.1:60", "--what", "q_n,imag"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 2u + 240u);
    EXPECT_EQ(ls[0].rfind("# command=eval3d k=1 n=4 r_range=0.1:60", 0), 0u);
    EXPECT_EQ(ls[1], "r,q_n,imag");
    std::stringstream row(ls[2]);
    std::string cell;
    std::getline(row, cell, ',');
    EXPECT_EQ(std::stod(cell), 0.1);
    std::getline(row, cell, ',');
    EXPECT_NEAR(std::stod(cell), spatial3d::q_n_3d(0.1, make_params(1.0, 4, 3)), 1e-17);
}

TEST(Cli, SeventeenDigits) {
    const auto r = run({"eval2d", "--n", "2", "--k", "3", "--r-range", "0.5:1", "--samples", "2", "--what", "h_n"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    const auto value = ls[2].substr(ls[2].find(',') + 1);
    EXPECT_EQ(std::stod(value), spatial2d::h_n_2d(0.5, make_params(3.0, 2, 2)));
    EXPECT_EQ(value, cli::fmt(spatial2d::h_n_2d(0.5, make_params(3.0, 2, 2))));
}

TEST(Cli, TaylorExact) {
    const auto r = run({"taylor", "--n", "5", "--d", "3", "--order", "10"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("\n8,83/2903040,"), std::string::npos);
    const auto r2 = run({"taylor", "--n", "1", "--d", "2", "--order", "2"});
    ASSERT_EQ(r2.code, 0) << r2.err;
    EXPECT_NE(r2.out.find("\n2,-1/4,1/4,-1/4,1/4\n"), std::string::npos);
}

TEST(Cli, GaussErrorsDefaultCurves) {
    const auto r = run({"gauss-errors", "--n", "4", "--k", "100", "--delta", "0.25", "--m-lo", "20", "--m-hi", "200"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    EXPECT_EQ(ls[2], "curve,r,log10_error");
    std::size_t e0 = 0, e1 = 0;
    for (const auto& l : ls) {
        e0 += l.rfind("e0,", 0) == 0;
        e1 += l.rfind("e1,", 0) == 0;
    }
    EXPECT_EQ(e0, 281u);
    EXPECT_GT(e1, 50u);
}

TEST(Cli, SupportSweep) {
    const auto r = run({"support-sweep", "--n", "8", "--eps", "1e-16,1e-9,1e-2", "--k-range", "1:1e5"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    // parameter line, three fit notes, header, 3 x 6 rows
    ASSERT_EQ(ls.size(), 1u + 3u + 1u + 18u);
    EXPECT_EQ(ls[4], "k,eps,r_eps");
    const double r16 = std::stod(ls[5].substr(ls[5].rfind(',') + 1));
    EXPECT_DOUBLE_EQ(r16, spatial3d::support_radius(make_params(1.0, 8, 3), 1e-16));
}

TEST(Cli, MultiplierAndGaussBuild) {
    const auto r = run({"multiplier", "--n", "2", "--k", "1", "--p-range", "0:2", "--samples", "5"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 2u + 1u + 5u);
    EXPECT_EQ(ls[5].substr(0, 2), "1,");  // pole row, blank oscillatory cell
    EXPECT_NE(ls[5].find(",,"), std::string::npos);
    const auto g = run({"gauss-build", "--n", "4", "--k", "100"});
    ASSERT_EQ(g.code, 0) << g.err;
    EXPECT_EQ(lines(g.out).size(), 3u + 181u);
}

TEST(Cli, JsonMirrorsCsv) {
    const auto r = run({"eval3d", "--n", "2", "--r-range", "1:2", "--samples", "2", "--what", "g_n", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("\"columns\": [\"r\", \"g_n\"]"), std::string::npos);
    EXPECT_NE(r.out.find("[1, " + cli::fmt(spatial3d::g_n_3d(1.0, make_params(1.0, 2, 3))) + "]"), std::string::npos);
}

TEST(Cli, DeterministicAtomicFiles) {
    const auto a = tmp("helmsplit_cli_a.csv"), b = tmp("helmsplit_cli_b.csv");
    setenv("HELMSPLIT_THREADS", "1", 1);
    ASSERT_EQ(run({"support-sweep", "--out", a}).code, 0);
    setenv("HELMSPLIT_THREADS", "4", 1);
    ASSERT_EQ(run({"support-sweep", "--out", b}).code, 0);
    unsetenv("HELMSPLIT_THREADS");
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_FALSE(std::filesystem::exists(a + ".tmp"));
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}

TEST(Cli, ApplyAndOracleFields) {
    const auto in = tmp("helmsplit_cli_src.bin"), out = tmp("helmsplit_cli_u.bin");
    grid::write_field(in, grid::smooth_bump(2, 24, 1.0, 0.6));
    const auto r = run({"apply", "--d", "2", "--k", "5", "--n", "3", "--input", in, "--output", out});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto u = grid::read_field(out);
    EXPECT_EQ(u.shape, (std::vector<std::size_t>{24, 24}));
    EXPECT_NE(r.out.find("helmholtz_residual,"), std::string::npos);
    const auto o = run({"oracle", "--d", "2", "--k", "5", "--input", in});
    EXPECT_EQ(o.code, 0) << o.err;
    const auto bad = run({"apply", "--d", "3", "--k", "5", "--input", in});
    EXPECT_EQ(bad.code, cli::kExitInvalid);
    for (const auto& p : {in, out}) {
        std::filesystem::remove(p);
        std::filesystem::remove(grid::header_path(p));
    }
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"bogus"}).code, 2);
    const auto unknown = run({"eval3d", "--nope", "1"});
    EXPECT_EQ(unknown.code, 2);
    EXPECT_NE(unknown.err.find("Usage"), std::string::npos);
    EXPECT_EQ(run({"eval3d", "--n", "0"}).code, 2);
    EXPECT_EQ(run({"eval3d", "--k", "-1"}).code, 2);
    EXPECT_EQ(run({"eval3d", "--r-range", "5:1"}).code, 2);
    EXPECT_EQ(run({"eval3d", "--what", "h_n"}).code, 2);
    EXPECT_EQ(run({"support-sweep", "--eps", "2"}).code, 2);
    EXPECT_EQ(run({"apply", "--k", "50", "--grid", "8"}).code, 2);  // resolution
    EXPECT_EQ(run({"oracle", "--grid", "65"}).code, 2);                // oracle budget
    EXPECT_EQ(run({"gauss-build", "--n", "2", "--k", "1", "--m-lo", "2990", "--m-hi", "3000"}).code, 3);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, BinaryExitCode) {
    const std::string cmd = std::string(HELMSPLIT_CLI_PATH) + " eval3d --unknown-flag >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    ASSERT_TRUE(WIFEXITED(status));
    EXPECT_EQ(WEXITSTATUS(status), 2);
}
