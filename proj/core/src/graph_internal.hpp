#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gfl/graph.hpp"

namespace gfl::detail {

/* Edge numbering of synth::grid_graph: vertices in row-major order, each
 * adding its right edge and then its down edge. */
struct GridEdgeIds {
    std::size_t rows;
    std::size_t cols;

    EdgeId first_of(std::size_t r, std::size_t c) const noexcept {
        const std::size_t before = r * (2 * cols - 1);
        return static_cast<EdgeId>(before + (r + 1 < rows ? 2 * c : c));
    }
    EdgeId right(std::size_t r, std::size_t c) const noexcept { return first_of(r, c); }
    EdgeId down(std::size_t r, std::size_t c) const noexcept {
        return first_of(r, c) + (c + 1 < cols ? 1 : 0);
    }
};

/* 1 marks an edge still present in a residual subgraph. */
using EdgeMask = std::vector<std::uint8_t>;

struct Subgraph {
    Graph graph;
    std::vector<VertexId> to_global_vertex;
    std::vector<EdgeId> to_global_edge;
};

std::size_t active_degree(const Graph& g, const EdgeMask& active, VertexId v);

/* Subgraph over `vertices` keeping only active edges, relabelled densely in
 * the order the vertices are given. Edge order follows global edge id. */
Subgraph extract_subgraph(const Graph& g, const EdgeMask& active,
                          std::span<const VertexId> vertices);

/* Components (over active edges) of the vertices listed, dropping vertices
 * with no active edge. Each component is sorted. */
std::vector<std::vector<VertexId>> active_components(const Graph& g, const EdgeMask& active,
                                                     std::span<const VertexId> vertices);

Trail lift(const Subgraph& sub, const Trail& local);

} // namespace gfl::detail
