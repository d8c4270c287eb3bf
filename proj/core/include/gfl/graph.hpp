#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace gfl {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

struct Edge {
    VertexId u;
    VertexId v;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Incidence {
    VertexId neighbor;
    EdgeId edge;
};

/* Undirected multigraph in compressed adjacency form. Edge ids are the
 * positions in the edge list given at construction. Each vertex keeps two
 * views of its incidences: ordered by edge id (Euler tours pick the smallest
 * unused edge) and ordered by neighbor id (breadth-first searches expand the
 * lowest neighbor first). Immutable once built. */
class Graph {
public:
    Graph() = default;

    /* Throws InvalidArgument on self-loops, VertexOutOfRange on endpoints
     * >= n_vertices. Parallel edges are kept. */
    Graph(std::size_t n_vertices, std::vector<Edge> edges);

    std::size_t n_vertices() const noexcept { return n_vertices_; }
    std::size_t n_edges() const noexcept { return edges_.size(); }

    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const Edge& edge(EdgeId e) const { return edges_[e]; }

    std::size_t degree(VertexId v) const noexcept {
        return offsets_[v + 1] - offsets_[v];
    }

    std::span<const Incidence> incident(VertexId v) const noexcept {
        return {by_edge_.data() + offsets_[v], degree(v)};
    }

    std::span<const Incidence> neighbors(VertexId v) const noexcept {
        return {by_neighbor_.data() + offsets_[v], degree(v)};
    }

    bool adjacent(VertexId a, VertexId b) const noexcept;

private:
    std::size_t n_vertices_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Incidence> by_edge_;
    std::vector<Incidence> by_neighbor_;
};

/* A walk with distinct edges. `edge_ids` may be empty for trails read from a
 * vertex-only file; see bind_edge_ids. */
struct Trail {
    std::vector<VertexId> vertices;
    std::vector<EdgeId> edge_ids;

    std::size_t length() const noexcept {
        return vertices.empty() ? 0 : vertices.size() - 1;
    }

    friend bool operator==(const Trail&, const Trail&) = default;
};

struct TrailSet {
    std::vector<Trail> trails;
    std::size_t n_vertices = 0;
    std::size_t n_edges = 0;

    std::size_t size() const noexcept { return trails.size(); }
    std::size_t total_length() const noexcept;

    friend bool operator==(const TrailSet&, const TrailSet&) = default;
};

std::vector<std::vector<VertexId>> connected_components(const Graph& g);

std::vector<VertexId> odd_degree_vertices(const Graph& g);

/* Hierholzer's algorithm. At each step the unused incident edge with the
 * smallest id is taken. Throws OddDegreePresent or Disconnected. */
Trail eulerian_circuit(const Graph& g, VertexId start);

/* Eulerian trail between the only two odd-degree vertices. Throws
 * WrongOddCount when the odd set is not exactly {u, v}. */
Trail eulerian_trail(const Graph& g, VertexId u, VertexId v);

/* Fewest-edge path by breadth-first search, lowest neighbor id first.
 * Throws Unreachable. */
Trail shortest_path(const Graph& g, VertexId u, VertexId v);

struct TrailPosition {
    std::size_t trail;
    std::size_t step;
};

struct ValidationReport {
    std::vector<EdgeId> unused_edges;
    std::vector<EdgeId> reused_edges;
    std::vector<TrailPosition> non_adjacent;
    std::vector<TrailPosition> inconsistent_edges;
    std::vector<TrailPosition> vertex_out_of_range;
    std::vector<std::size_t> malformed_trails;

    bool ok() const noexcept {
        return unused_edges.empty() && reused_edges.empty() && non_adjacent.empty() &&
               inconsistent_edges.empty() && vertex_out_of_range.empty() &&
               malformed_trails.empty();
    }

    std::string summary() const;
};

ValidationReport validate_trail_partition(const Graph& g, const TrailSet& ts);

/* Fills in missing edge ids: each consecutive vertex pair takes the smallest
 * edge id joining them that no earlier step has claimed. Steps with no such
 * edge get kNoEdge and will be flagged by validate_trail_partition. */
TrailSet bind_edge_ids(const Graph& g, TrailSet ts);

} // namespace gfl
