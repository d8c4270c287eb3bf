#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gfl/graph.hpp"

namespace gfl::io {

struct MatrixMarketHeader {
    std::string object;
    std::string format;
    std::string field;
    std::string symmetry;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t nnz = 0;
};

/* Adjacency pattern of a square coordinate-format matrix: off-diagonal
 * nonzeros become undirected edges, (i, j) and (j, i) collapse to one edge,
 * diagonal entries and explicit zeros are skipped. Edges come out
 * canonicalized (min, max) and sorted. Throws ParseError (with line number)
 * or NotCoordinateFormat. */
Graph read_matrix_market_adjacency(std::istream& in, MatrixMarketHeader* header = nullptr);
Graph read_matrix_market_adjacency(const std::filesystem::path& path,
                                   MatrixMarketHeader* header = nullptr);

/* Symmetric pattern file, lower triangle, 1-based. */
void write_matrix_market_adjacency(std::ostream& out, const Graph& g);
void write_matrix_market_adjacency(const std::filesystem::path& path, const Graph& g);

/* `u v` per line, 0-based, '#' comments. A `# vertices N` comment fixes the
 * vertex count; otherwise it is one past the largest id. Edge order is kept. */
Graph read_edge_list(std::istream& in);
Graph read_edge_list(const std::filesystem::path& path);
void write_edge_list(std::ostream& out, const Graph& g);
void write_edge_list(const std::filesystem::path& path, const Graph& g);

/* Picks the reader from the extension: .mtx is Matrix Market, anything else
 * an edge list. */
Graph read_graph(const std::filesystem::path& path);

/* One value per line, written with 17 significant digits. */
std::vector<double> read_vector_csv(std::istream& in);
std::vector<double> read_vector_csv(const std::filesystem::path& path);
void write_vector_csv(std::ostream& out, const std::vector<double>& v);
void write_vector_csv(const std::filesystem::path& path, const std::vector<double>& v);

/* One trail per line as space-separated vertex ids; '#' lines are comments.
 * Trails read back carry no edge ids (see bind_edge_ids). Throws ParseError or
 * VertexOutOfRange. */
void write_trails(std::ostream& out, const TrailSet& ts);
void write_trails(const std::filesystem::path& path, const TrailSet& ts);
TrailSet read_trails(std::istream& in, std::size_t n_vertices);
TrailSet read_trails(const std::filesystem::path& path, std::size_t n_vertices);

} // namespace gfl::io
