#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "gfl/error.hpp"
#include "gfl/io.hpp"
#include "gfl/synth.hpp"
#include "gfl/trails.hpp"
#include "support/oracles.hpp"

namespace {

using namespace gfl;

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no gfl::Error thrown";
    return ErrorCode::InvalidArgument;
}

Graph mm(const std::string& text) {
    std::istringstream in(text);
    return io::read_matrix_market_adjacency(in);
}

TEST(MatrixMarket, SymmetricPath) {
    const Graph g = mm("%%MatrixMarket matrix coordinate pattern symmetric\n"
                       "% a comment\n"
                       "3 3 2\n2 1\n3 2\n");
    EXPECT_EQ(g.n_vertices(), 3u);
    EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}, {1, 2}}));
}

TEST(MatrixMarket, SkipsDiagonal) {
    const Graph g = mm("%%MatrixMarket matrix coordinate real symmetric\n"
                       "3 3 3\n1 1 4.0\n2 1 -1.0\n3 3 2.5\n");
    EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}}));
}

TEST(MatrixMarket, GeneralDeduplicates) {
    const Graph g = mm("%%MatrixMarket matrix coordinate integer general\n"
                       "2 2 2\n1 2 1\n2 1 1\n");
    EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}}));
}

TEST(MatrixMarket, ExplicitZerosAreNotEdges) {
    const Graph g = mm("%%MatrixMarket matrix coordinate real general\n"
                       "3 3 2\n1 2 0.0\n2 3 1e-3\n");
    EXPECT_EQ(g.edges(), (std::vector<Edge>{{1, 2}}));
}

TEST(MatrixMarket, Errors) {
    EXPECT_EQ(code_of([] { mm("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n"); }),
              ErrorCode::NotCoordinateFormat);
    EXPECT_EQ(code_of([] { mm("not a banner\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { mm("%%MatrixMarket matrix coordinate pattern general\n2 3 1\n1 2\n"); }),
              ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { mm("%%MatrixMarket matrix coordinate pattern general\n2 2 2\n1 2\n"); }),
              ErrorCode::ParseError);
    try {
        mm("%%MatrixMarket matrix coordinate pattern general\n3 3 2\n1 2\n1 x\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
    }
    EXPECT_EQ(code_of([] { mm("%%MatrixMarket matrix coordinate pattern general\n3 3 1\n1 9\n"); }),
              ErrorCode::ParseError);
}

TEST(MatrixMarket, GridRoundTrip) {
    const Graph g = synth::grid_graph(7, 9);
    std::ostringstream out;
    io::write_matrix_market_adjacency(out, g);
    const Graph back = mm(out.str());
    EXPECT_EQ(back.n_vertices(), g.n_vertices());
    EXPECT_EQ(back.edges(), g.edges());
}

TEST(EdgeList, RoundTripKeepsOrderAndIsolatedVertices) {
    std::mt19937_64 rng(1);
    const Graph g = oracle::random_connected_graph(30, 20, rng);
    const Graph padded(g.n_vertices() + 3, g.edges());
    std::stringstream buf;
    io::write_edge_list(buf, padded);
    const Graph back = io::read_edge_list(buf);
    EXPECT_EQ(back.n_vertices(), padded.n_vertices());
    EXPECT_EQ(back.edges(), padded.edges());
}

TEST(EdgeList, InfersVertexCount) {
    std::istringstream in("# comment\n0 1\n\n3 1\n");
    const Graph g = io::read_edge_list(in);
    EXPECT_EQ(g.n_vertices(), 4u);
    EXPECT_EQ(g.n_edges(), 2u);
}

TEST(EdgeList, RejectsMalformed) {
    std::istringstream in("0 1\n1 2 3\n");
    EXPECT_EQ(code_of([&] { io::read_edge_list(in); }), ErrorCode::ParseError);
    std::istringstream neg("0 -1\n");
    EXPECT_EQ(code_of([&] { io::read_edge_list(neg); }), ErrorCode::ParseError);
}

TEST(VectorCsv, RoundTripIsExact) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g(0.0, 1e3);
    std::vector<double> v(500);
    for (auto& x : v) x = g(rng);
    v.push_back(5e-324);
    v.push_back(-0.0);
    v.push_back(1.7976931348623157e308);
    std::stringstream buf;
    io::write_vector_csv(buf, v);
    const auto back = io::read_vector_csv(buf);
    ASSERT_EQ(back.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(back[i], v[i]) << i;
}

TEST(VectorCsv, EmptyAndMalformed) {
    std::istringstream empty("");
    EXPECT_TRUE(io::read_vector_csv(empty).empty());
    std::istringstream bad("1.0\n2.0\nthree\n");
    try {
        io::read_vector_csv(bad);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ParseError);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}

TEST(Trails, RoundTripOfPseudoTour) {
    std::mt19937_64 rng(3);
    const Graph g = oracle::random_connected_graph(40, 35, rng);
    const TrailSet ts = decompose_pseudo_tour(g, 3);
    std::stringstream buf;
    io::write_trails(buf, ts);
    const TrailSet back = io::read_trails(buf, g.n_vertices());
    ASSERT_EQ(back.size(), ts.size());
    for (std::size_t t = 0; t < ts.size(); ++t) EXPECT_EQ(back.trails[t].vertices, ts.trails[t].vertices);
    EXPECT_EQ(bind_edge_ids(g, back), ts);
}

TEST(Trails, CommentsIgnoredAndRangeChecked) {
    std::istringstream in("# trails 2\n0 1 2\n# stray comment\n2 3\n");
    const TrailSet ts = io::read_trails(in, 4);
    ASSERT_EQ(ts.size(), 2u);
    EXPECT_EQ(ts.n_edges, 3u);
    std::istringstream out_of_range("0 1 4\n");
    EXPECT_EQ(code_of([&] { io::read_trails(out_of_range, 4); }), ErrorCode::VertexOutOfRange);
    std::istringstream junk("0 one\n");
    EXPECT_EQ(code_of([&] { io::read_trails(junk, 4); }), ErrorCode::ParseError);
}

TEST(Files, ReadGraphPicksFormatByExtension) {
    const auto dir = std::filesystem::temp_directory_path() / "gfl_io_test";
    std::filesystem::create_directories(dir);
    const Graph g = synth::grid_graph(3, 4);
    io::write_matrix_market_adjacency(dir / "g.mtx", g);
    io::write_edge_list(dir / "g.txt", g);
    EXPECT_EQ(io::read_graph(dir / "g.mtx").edges(), g.edges());
    EXPECT_EQ(io::read_graph(dir / "g.txt").edges(), g.edges());
    EXPECT_EQ(code_of([&] { io::read_graph(dir / "missing.txt"); }), ErrorCode::IoError);
    std::filesystem::remove_all(dir);
}

} // namespace
