#include "gfl/graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "gfl/error.hpp"
#include "graph_internal.hpp"

namespace gfl {

Graph::Graph(std::size_t n_vertices, std::vector<Edge> edges)
    : n_vertices_(n_vertices), edges_(std::move(edges)) {
    if (edges_.size() >= kNoEdge) {
        throw Error(ErrorCode::InvalidArgument, "too many edges");
    }
    std::vector<std::size_t> degree(n_vertices_, 0);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const auto [u, v] = edges_[e];
        if (u >= n_vertices_ || v >= n_vertices_) {
            throw Error(ErrorCode::VertexOutOfRange,
                        "edge " + std::to_string(e) + " (" + std::to_string(u) + ", " +
                            std::to_string(v) + ") references a vertex >= " +
                            std::to_string(n_vertices_));
        }
        if (u == v) {
            throw Error(ErrorCode::InvalidArgument,
                        "self-loop at vertex " + std::to_string(u) + " (edge " +
                            std::to_string(e) + ")");
        }
        ++degree[u];
        ++degree[v];
    }

    offsets_.assign(n_vertices_ + 1, 0);
    for (std::size_t v = 0; v < n_vertices_; ++v) offsets_[v + 1] = offsets_[v] + degree[v];

    by_edge_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const auto [u, v] = edges_[e];
        by_edge_[fill[u]++] = {v, static_cast<EdgeId>(e)};
        by_edge_[fill[v]++] = {u, static_cast<EdgeId>(e)};
    }

    by_neighbor_ = by_edge_;
    for (std::size_t v = 0; v < n_vertices_; ++v) {
        std::sort(by_neighbor_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                  by_neighbor_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]),
                  [](const Incidence& a, const Incidence& b) {
                      return a.neighbor != b.neighbor ? a.neighbor < b.neighbor : a.edge < b.edge;
                  });
    }
}

bool Graph::adjacent(VertexId a, VertexId b) const noexcept {
    const auto list = neighbors(a);
    auto it = std::lower_bound(list.begin(), list.end(), b,
                               [](const Incidence& inc, VertexId x) { return inc.neighbor < x; });
    return it != list.end() && it->neighbor == b;
}

std::size_t TrailSet::total_length() const noexcept {
    std::size_t total = 0;
    for (const auto& t : trails) total += t.length();
    return total;
}

std::vector<std::vector<VertexId>> connected_components(const Graph& g) {
    const std::size_t n = g.n_vertices();
    std::vector<std::uint8_t> seen(n, 0);
    std::vector<std::vector<VertexId>> components;
    std::vector<VertexId> queue;
    for (VertexId root = 0; root < n; ++root) {
        if (seen[root]) continue;
        queue.clear();
        queue.push_back(root);
        seen[root] = 1;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            for (const auto& inc : g.neighbors(queue[head])) {
                if (!seen[inc.neighbor]) {
                    seen[inc.neighbor] = 1;
                    queue.push_back(inc.neighbor);
                }
            }
        }
        std::sort(queue.begin(), queue.end());
        components.push_back(queue);
    }
    return components;
}

std::vector<VertexId> odd_degree_vertices(const Graph& g) {
    std::vector<VertexId> odd;
    for (VertexId v = 0; v < g.n_vertices(); ++v) {
        if (g.degree(v) % 2 == 1) odd.push_back(v);
    }
    return odd;
}

Trail eulerian_circuit(const Graph& g, VertexId start) {
    if (start >= g.n_vertices()) {
        throw Error(ErrorCode::VertexOutOfRange, "start vertex " + std::to_string(start));
    }
    if (const auto odd = odd_degree_vertices(g); !odd.empty()) {
        throw Error(ErrorCode::OddDegreePresent,
                    std::to_string(odd.size()) + " odd-degree vertices, first is " +
                        std::to_string(odd.front()));
    }
    if (g.n_edges() == 0) return Trail{{start}, {}};
    if (g.degree(start) == 0) {
        throw Error(ErrorCode::Disconnected,
                    "start vertex " + std::to_string(start) + " has no incident edge");
    }

    std::vector<std::size_t> next(g.n_vertices(), 0);
    std::vector<std::uint8_t> used(g.n_edges(), 0);

    struct Frame {
        VertexId vertex;
        EdgeId via;
    };
    std::vector<Frame> stack{{start, kNoEdge}};
    Trail out;
    out.vertices.reserve(g.n_edges() + 1);
    out.edge_ids.reserve(g.n_edges());

    while (!stack.empty()) {
        const VertexId v = stack.back().vertex;
        const auto inc = g.incident(v);
        auto& k = next[v];
        while (k < inc.size() && used[inc[k].edge]) ++k;
        if (k < inc.size()) {
            used[inc[k].edge] = 1;
            stack.push_back({inc[k].neighbor, inc[k].edge});
        } else {
            out.vertices.push_back(v);
            if (stack.back().via != kNoEdge) out.edge_ids.push_back(stack.back().via);
            stack.pop_back();
        }
    }
    if (out.edge_ids.size() != g.n_edges()) {
        throw Error(ErrorCode::Disconnected,
                    "circuit from " + std::to_string(start) + " reaches " +
                        std::to_string(out.edge_ids.size()) + " of " +
                        std::to_string(g.n_edges()) + " edges");
    }
    std::reverse(out.vertices.begin(), out.vertices.end());
    std::reverse(out.edge_ids.begin(), out.edge_ids.end());
    return out;
}

Trail eulerian_trail(const Graph& g, VertexId u, VertexId v) {
    const auto odd = odd_degree_vertices(g);
    if (u == v || odd.size() != 2 || odd[0] != std::min(u, v) || odd[1] != std::max(u, v)) {
        throw Error(ErrorCode::WrongOddCount,
                    "eulerian trail " + std::to_string(u) + " -> " + std::to_string(v) +
                        " requires exactly those two odd vertices, graph has " +
                        std::to_string(odd.size()));
    }
    const auto pseudo = static_cast<EdgeId>(g.n_edges());
    auto edges = g.edges();
    edges.push_back({u, v});
    const Trail circuit = eulerian_circuit(Graph(g.n_vertices(), std::move(edges)), u);

    const auto cut = static_cast<std::size_t>(
        std::find(circuit.edge_ids.begin(), circuit.edge_ids.end(), pseudo) -
        circuit.edge_ids.begin());
    const std::size_t m = circuit.edge_ids.size();

    Trail trail;
    trail.vertices.reserve(m);
    trail.edge_ids.reserve(m - 1);
    for (std::size_t i = 1; i <= m; ++i) {
        const std::size_t pos = (cut + i) % m;
        trail.vertices.push_back(circuit.vertices[pos]);
        if (i < m) trail.edge_ids.push_back(circuit.edge_ids[pos]);
    }
    if (trail.vertices.front() != u) {
        std::reverse(trail.vertices.begin(), trail.vertices.end());
        std::reverse(trail.edge_ids.begin(), trail.edge_ids.end());
    }
    return trail;
}

Trail shortest_path(const Graph& g, VertexId u, VertexId v) {
    if (u >= g.n_vertices() || v >= g.n_vertices()) {
        throw Error(ErrorCode::VertexOutOfRange,
                    "shortest path endpoints " + std::to_string(u) + ", " + std::to_string(v));
    }
    if (u == v) return Trail{{u}, {}};

    std::vector<Incidence> parent(g.n_vertices(), Incidence{0, kNoEdge});
    std::vector<std::uint8_t> seen(g.n_vertices(), 0);
    std::vector<VertexId> queue{u};
    seen[u] = 1;
    for (std::size_t head = 0; head < queue.size() && !seen[v]; ++head) {
        const VertexId x = queue[head];
        for (const auto& inc : g.neighbors(x)) {
            if (seen[inc.neighbor]) continue;
            seen[inc.neighbor] = 1;
            parent[inc.neighbor] = {x, inc.edge};
            queue.push_back(inc.neighbor);
        }
    }
    if (!seen[v]) {
        throw Error(ErrorCode::Unreachable,
                    "no path from " + std::to_string(u) + " to " + std::to_string(v));
    }
    Trail path;
    for (VertexId x = v; x != u; x = parent[x].neighbor) {
        path.vertices.push_back(x);
        path.edge_ids.push_back(parent[x].edge);
    }
    path.vertices.push_back(u);
    std::reverse(path.vertices.begin(), path.vertices.end());
    std::reverse(path.edge_ids.begin(), path.edge_ids.end());
    return path;
}

TrailSet bind_edge_ids(const Graph& g, TrailSet ts) {
    std::vector<std::uint8_t> claimed(g.n_edges(), 0);
    for (auto& trail : ts.trails) {
        if (!trail.edge_ids.empty() || trail.vertices.size() < 2) continue;
        trail.edge_ids.assign(trail.vertices.size() - 1, kNoEdge);
        for (std::size_t s = 0; s + 1 < trail.vertices.size(); ++s) {
            const VertexId a = trail.vertices[s];
            const VertexId b = trail.vertices[s + 1];
            if (a >= g.n_vertices() || b >= g.n_vertices()) continue;
            for (const auto& inc : g.neighbors(a)) {
                if (inc.neighbor == b && !claimed[inc.edge]) {
                    claimed[inc.edge] = 1;
                    trail.edge_ids[s] = inc.edge;
                    break;
                }
            }
        }
    }
    return ts;
}

ValidationReport validate_trail_partition(const Graph& g, const TrailSet& input) {
    const TrailSet ts = bind_edge_ids(g, input);
    ValidationReport report;
    std::vector<std::uint32_t> uses(g.n_edges(), 0);

    for (std::size_t t = 0; t < ts.trails.size(); ++t) {
        const auto& trail = ts.trails[t];
        if (trail.vertices.empty() ||
            trail.edge_ids.size() != trail.vertices.size() - 1) {
            report.malformed_trails.push_back(t);
            continue;
        }
        bool in_range = true;
        for (std::size_t s = 0; s < trail.vertices.size(); ++s) {
            if (trail.vertices[s] >= g.n_vertices()) {
                report.vertex_out_of_range.push_back({t, s});
                in_range = false;
            }
        }
        if (!in_range) continue;
        for (std::size_t s = 0; s < trail.edge_ids.size(); ++s) {
            const VertexId a = trail.vertices[s];
            const VertexId b = trail.vertices[s + 1];
            const EdgeId e = trail.edge_ids[s];
            if (e == kNoEdge) {
                report.non_adjacent.push_back({t, s});
                continue;
            }
            if (e >= g.n_edges()) {
                report.inconsistent_edges.push_back({t, s});
                continue;
            }
            const Edge& ed = g.edge(e);
            if (!((ed.u == a && ed.v == b) || (ed.u == b && ed.v == a))) {
                if (g.adjacent(a, b)) {
                    report.inconsistent_edges.push_back({t, s});
                } else {
                    report.non_adjacent.push_back({t, s});
                }
                continue;
            }
            ++uses[e];
        }
    }
    for (EdgeId e = 0; e < g.n_edges(); ++e) {
        if (uses[e] == 0) report.unused_edges.push_back(e);
        if (uses[e] > 1) report.reused_edges.push_back(e);
    }
    return report;
}

std::string ValidationReport::summary() const {
    if (ok()) return "OK";
    std::ostringstream os;
    os << "unused_edges=" << unused_edges.size() << " reused_edges=" << reused_edges.size()
       << " non_adjacent=" << non_adjacent.size()
       << " inconsistent_edges=" << inconsistent_edges.size()
       << " vertex_out_of_range=" << vertex_out_of_range.size()
       << " malformed_trails=" << malformed_trails.size();
    return os.str();
}

namespace detail {

std::size_t active_degree(const Graph& g, const EdgeMask& active, VertexId v) {
    std::size_t d = 0;
    for (const auto& inc : g.incident(v)) d += active[inc.edge];
    return d;
}

Subgraph extract_subgraph(const Graph& g, const EdgeMask& active,
                          std::span<const VertexId> vertices) {
    Subgraph sub;
    sub.to_global_vertex.assign(vertices.begin(), vertices.end());
    std::vector<VertexId> local(g.n_vertices(), static_cast<VertexId>(-1));
    for (std::size_t i = 0; i < vertices.size(); ++i) local[vertices[i]] = static_cast<VertexId>(i);

    for (const VertexId v : vertices) {
        for (const auto& inc : g.incident(v)) {
            // each edge once, from its lower endpoint
            if (active[inc.edge] && v < inc.neighbor) sub.to_global_edge.push_back(inc.edge);
        }
    }
    std::sort(sub.to_global_edge.begin(), sub.to_global_edge.end());
    std::vector<Edge> edges;
    edges.reserve(sub.to_global_edge.size());
    for (const EdgeId e : sub.to_global_edge) {
        edges.push_back({local[g.edge(e).u], local[g.edge(e).v]});
    }
    sub.graph = Graph(vertices.size(), std::move(edges));
    return sub;
}

std::vector<std::vector<VertexId>> active_components(const Graph& g, const EdgeMask& active,
                                                     std::span<const VertexId> vertices) {
    std::vector<std::vector<VertexId>> out;
    std::vector<std::uint8_t> seen(g.n_vertices(), 0);
    std::vector<VertexId> queue;
    for (const VertexId root : vertices) {
        if (seen[root] || active_degree(g, active, root) == 0) continue;
        queue.clear();
        queue.push_back(root);
        seen[root] = 1;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            for (const auto& inc : g.neighbors(queue[head])) {
                if (!active[inc.edge] || seen[inc.neighbor]) continue;
                seen[inc.neighbor] = 1;
                queue.push_back(inc.neighbor);
            }
        }
        std::sort(queue.begin(), queue.end());
        out.push_back(queue);
    }
    return out;
}

Trail lift(const Subgraph& sub, const Trail& local) {
    Trail t;
    t.vertices.reserve(local.vertices.size());
    t.edge_ids.reserve(local.edge_ids.size());
    for (const VertexId v : local.vertices) t.vertices.push_back(sub.to_global_vertex[v]);
    for (const EdgeId e : local.edge_ids) t.edge_ids.push_back(sub.to_global_edge[e]);
    return t;
}

} // namespace detail
} // namespace gfl
