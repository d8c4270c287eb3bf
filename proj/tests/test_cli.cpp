#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "gfl/io.hpp"
#include "gfl/solver.hpp"
#include "gfl/synth.hpp"
#include "gfl/trails.hpp"

namespace {

namespace fs = std::filesystem;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run gfl_run(std::vector<std::string> args) {
    args.insert(args.begin(), "gfl");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = gfl::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("gfl_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path(name)) << text;
        return path(name);
    }

    fs::path dir_;
};

std::size_t trail_lines(const std::string& text) {
    std::istringstream in(text);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line[0] != '#') ++n;
    }
    return n;
}

TEST(Cli, HelpMatchesSnapshot) {
    std::ifstream f(GFL_TEST_DATA_DIR "/cli_help.txt");
    ASSERT_TRUE(f);
    std::stringstream expected;
    expected << f.rdbuf();
    const auto r = gfl_run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, expected.str());
}

TEST(Cli, MissingSubcommandIsUsageError) {
    EXPECT_EQ(gfl_run({}).code, 1);
    EXPECT_EQ(gfl_run({"frobnicate"}).code, 1);
}

TEST(Cli, UnknownStrategyIsUsageError) {
    const auto r = gfl_run({"decompose", "--grid", "5", "--strategy", "zigzag", "--seed", "1"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("zigzag"), std::string::npos);
}

TEST(Cli, GraphAndGridAreExclusive) {
    EXPECT_EQ(gfl_run({"decompose", "--grid", "5", "--graph", "g.mtx"}).code, 1);
}

TEST(Cli, PseudoTourOnGridGivesOneTrailPerOddPair) {
    // a 10x10 grid has 32 boundary vertices of degree 3
    const auto r = gfl_run({"decompose", "--grid", "10", "--strategy", "pseudotour", "--seed", "7"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(trail_lines(r.out), 16u);
}

TEST(Cli, OmittedSeedIsLogged) {
    const auto r = gfl_run({"decompose", "--grid", "6"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("seed: "), std::string::npos);
}

TEST_F(CliTest, DecomposeThenValidate) {
    const auto trails = path("t.txt");
    ASSERT_EQ(gfl_run({"decompose", "--grid", "8", "--strategy", "medians", "--seed", "3", "--out", trails}).code, 0);
    const auto ok = gfl_run({"validate", "--grid", "8", "--trails", trails});
    EXPECT_EQ(ok.code, 0);
    EXPECT_EQ(ok.out, "OK\n");

    std::ifstream in(trails);
    std::string text, line;
    for (int i = 0; std::getline(in, line); ++i) {
        if (i != 5) text += line + '\n';
    }
    const auto broken = gfl_run({"validate", "--grid", "8", "--trails", write("broken.txt", text)});
    EXPECT_EQ(broken.code, 2);
    EXPECT_NE(broken.out.find("unused_edges="), std::string::npos);
}

TEST_F(CliTest, SolveRejectsWrongLengthY) {
    const auto y = write("y.txt", "1\n2\n3\n");
    const auto r = gfl_run({"solve", "--grid", "4", "--y", y, "--seed", "1"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("16"), std::string::npos);
}

TEST_F(CliTest, SolveAdmmAndSpgAgree) {
    std::string ys;
    for (int i = 0; i < 36; ++i) ys += std::to_string((i % 6) < 3 ? 0.1 * (i % 5) : 4.0 - 0.1 * (i % 3)) + '\n';
    const auto y = write("y.txt", ys);
    const auto diag = path("diag.csv");
    const auto a = gfl_run({"solve", "--grid", "6", "--y", y, "--lambda", "0.3", "--seed", "2", "--tol", "1e-8",
                            "--out-diag", diag});
    ASSERT_EQ(a.code, 0) << a.err;
    const auto s = gfl_run({"solve", "--grid", "6", "--y", y, "--lambda", "0.3", "--method", "spg", "--epsilon", "1e-8"});
    ASSERT_EQ(s.code, 0) << s.err;

    std::istringstream ia(a.out), is(s.out);
    const auto ba = gfl::io::read_vector_csv(ia);
    const auto bs = gfl::io::read_vector_csv(is);
    ASSERT_EQ(ba.size(), 36u);
    ASSERT_EQ(bs.size(), 36u);
    std::istringstream iy(ys);
    const auto yv = gfl::io::read_vector_csv(iy);
    const auto g = gfl::synth::grid_graph(6, 6);
    const double fa = gfl::gfl_objective(g, yv, ba, 0.3);
    const double fs = gfl::gfl_objective(g, yv, bs, 0.3);
    EXPECT_LE(fa, fs + 1e-9);
    EXPECT_NEAR(fa, fs, 0.05 * fa);

    std::ifstream d(diag);
    std::string header;
    std::getline(d, header);
    EXPECT_EQ(header, "iter,r_norm,s_norm,alpha,objective");
}

TEST_F(CliTest, SolveWithTrailFile) {
    const auto trails = path("t.txt");
    ASSERT_EQ(gfl_run({"decompose", "--grid", "5", "--strategy", "rowscols", "--out", trails}).code, 0);
    std::string ys;
    for (int i = 0; i < 25; ++i) ys += std::to_string(i % 7) + '\n';
    const auto r = gfl_run({"solve", "--grid", "5", "--y", write("y.txt", ys), "--trails", trails});
    EXPECT_EQ(r.code, 0) << r.err;
}

TEST_F(CliTest, NonConvergenceExitsTwo) {
    std::string ys;
    for (int i = 0; i < 100; ++i) ys += std::to_string(i % 3 == 0 ? 5.0 : -1.0) + '\n';
    const auto r = gfl_run({"solve", "--grid", "10", "--y", write("y.txt", ys), "--seed", "1", "--max-steps", "2",
                            "--tol", "1e-12"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("NOT converged"), std::string::npos);
}

TEST_F(CliTest, RowsColsNeedsGrid) {
    const auto g = write("g.txt", "0 1\n1 2\n");
    EXPECT_EQ(gfl_run({"decompose", "--graph", g, "--strategy", "rowscols"}).code, 1);
}

TEST_F(CliTest, ConvertRoundTrip) {
    const auto mtx = path("g.mtx");
    const auto txt = path("g.txt");
    gfl::io::write_matrix_market_adjacency(fs::path(mtx), gfl::synth::grid_graph(3, 4));
    ASSERT_EQ(gfl_run({"convert", "--in", mtx, "--out", txt}).code, 0);
    EXPECT_EQ(gfl::io::read_graph(txt).edges(), gfl::synth::grid_graph(3, 4).edges());
}

TEST_F(CliTest, MissingFileIsDataError) {
    EXPECT_EQ(gfl_run({"convert", "--in", path("absent.mtx"), "--out", path("x.txt")}).code, 2);
}

TEST_F(CliTest, BenchGridWritesCsvs) {
    const auto results = path("r.csv");
    const auto summary = path("s.csv");
    const auto hist = path("h.csv");
    const auto r = gfl_run({"bench", "grid", "--n", "8", "--trials", "2", "--seed", "5", "--strategies",
                            "rowscols,edges", "--out", results, "--summary", summary, "--emit-histogram", hist});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream s(summary);
    std::string line;
    std::getline(s, line);
    EXPECT_EQ(line, "strategy,trials,mean_steps,stderr_steps");
    std::size_t rows = 0;
    while (std::getline(s, line)) ++rows;
    EXPECT_EQ(rows, 2u);
    std::ifstream h(hist);
    std::getline(h, line);
    EXPECT_EQ(line, "strategy,length,count");
}

TEST_F(CliTest, BenchHalving) {
    const auto r = gfl_run({"bench", "halving", "--n", "8", "--levels", "2", "--trials", "2", "--seed", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 4);
}

} // namespace
