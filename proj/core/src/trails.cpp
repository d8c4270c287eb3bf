#include "gfl/trails.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>
#include <unordered_set>

#include "gfl/error.hpp"
#include "graph_internal.hpp"

namespace gfl {

std::string_view to_string(StrategyKind kind) noexcept {
    switch (kind) {
    case StrategyKind::PseudoTour: return "pseudotour";
    case StrategyKind::MedianTrails: return "medians";
    case StrategyKind::RandomTrails: return "random";
    case StrategyKind::EdgeWise: return "edges";
    case StrategyKind::GridRowsCols: return "rowscols";
    }
    return "unknown";
}

std::optional<StrategyKind> parse_strategy(std::string_view name) noexcept {
    for (auto kind : {StrategyKind::PseudoTour, StrategyKind::MedianTrails,
                      StrategyKind::RandomTrails, StrategyKind::EdgeWise,
                      StrategyKind::GridRowsCols}) {
        if (name == to_string(kind)) return kind;
    }
    return std::nullopt;
}

namespace {

void require_connected(const Graph& g) {
    detail::EdgeMask all(g.n_edges(), 1);
    std::vector<VertexId> vertices(g.n_vertices());
    std::iota(vertices.begin(), vertices.end(), VertexId{0});
    const auto comps = detail::active_components(g, all, vertices);
    if (comps.size() > 1) {
        throw Error(ErrorCode::Disconnected,
                    "graph has " + std::to_string(comps.size()) +
                        " components with edges; decompose each separately");
    }
}

TrailSet empty_set(const Graph& g) {
    TrailSet ts;
    ts.n_vertices = g.n_vertices();
    ts.n_edges = g.n_edges();
    return ts;
}

VertexId first_non_isolated(const Graph& g) {
    for (VertexId v = 0; v < g.n_vertices(); ++v) {
        if (g.degree(v) > 0) return v;
    }
    return 0;
}

/* Fewest-edge path over active edges; expansion order matches shortest_path. */
Trail masked_path(const Graph& g, const detail::EdgeMask& active, VertexId u, VertexId v,
                  std::vector<Incidence>& parent, std::vector<std::uint32_t>& stamp,
                  std::uint32_t epoch) {
    std::vector<VertexId> queue{u};
    stamp[u] = epoch;
    for (std::size_t head = 0; head < queue.size() && stamp[v] != epoch; ++head) {
        const VertexId x = queue[head];
        for (const auto& inc : g.neighbors(x)) {
            if (!active[inc.edge] || stamp[inc.neighbor] == epoch) continue;
            stamp[inc.neighbor] = epoch;
            parent[inc.neighbor] = {x, inc.edge};
            queue.push_back(inc.neighbor);
        }
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

struct Candidate {
    std::size_t length;
    VertexId source;
    VertexId target;
};

/* Unordered pairs (i < j) of `p` items: all of them when C(p, 2) <= cap,
 * otherwise `cap` of them sampled uniformly without replacement. */
std::vector<std::pair<std::size_t, std::size_t>> candidate_pairs(std::size_t p, std::size_t cap,
                                                                 std::mt19937_64& rng) {
    const std::uint64_t total = static_cast<std::uint64_t>(p) * (p - 1) / 2;
    std::vector<std::uint64_t> picks;
    if (total <= cap) {
        picks.resize(total);
        std::iota(picks.begin(), picks.end(), std::uint64_t{0});
    } else {
        // Floyd's sampling
        std::unordered_set<std::uint64_t> chosen;
        chosen.reserve(cap * 2);
        for (std::uint64_t j = total - cap; j < total; ++j) {
            std::uniform_int_distribution<std::uint64_t> dist(0, j);
            const std::uint64_t t = dist(rng);
            if (!chosen.insert(t).second) chosen.insert(j);
        }
        picks.assign(chosen.begin(), chosen.end());
        std::sort(picks.begin(), picks.end());
    }

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(picks.size());
    std::size_t row = 0;
    std::uint64_t row_start = 0;
    for (const std::uint64_t k : picks) {
        while (k >= row_start + (p - 1 - row)) {
            row_start += p - 1 - row;
            ++row;
        }
        pairs.emplace_back(row, row + 1 + static_cast<std::size_t>(k - row_start));
    }
    return pairs;
}

TrailSet remove_paths(const Graph& g, std::uint64_t seed, std::size_t cap, bool take_median) {
    if (cap == 0) throw Error(ErrorCode::InvalidArgument, "pair_sample_cap must be >= 1");
    require_connected(g);

    TrailSet ts = empty_set(g);
    std::mt19937_64 rng(seed);
    detail::EdgeMask active(g.n_edges(), 1);

    std::vector<VertexId> all(g.n_vertices());
    std::iota(all.begin(), all.end(), VertexId{0});
    std::deque<std::vector<VertexId>> pending;
    for (auto& c : detail::active_components(g, active, all)) pending.push_back(std::move(c));

    std::vector<Incidence> parent(g.n_vertices());
    std::vector<std::uint32_t> stamp(g.n_vertices(), 0);
    std::vector<std::size_t> dist(g.n_vertices(), 0);
    std::uint32_t epoch = 0;

    auto retire = [&](const Trail& t) {
        for (const EdgeId e : t.edge_ids) active[e] = 0;
        ts.trails.push_back(t);
    };

    while (!pending.empty()) {
        const std::vector<VertexId> comp = std::move(pending.front());
        pending.pop_front();

        std::vector<VertexId> odd;
        for (const VertexId v : comp) {
            if (detail::active_degree(g, active, v) % 2 == 1) odd.push_back(v);
        }

        if (odd.size() <= 2) {
            const auto sub = detail::extract_subgraph(g, active, comp);
            Trail local;
            if (odd.empty()) {
                local = eulerian_circuit(sub.graph, 0);
            } else {
                const auto pos = [&](VertexId v) {
                    return static_cast<VertexId>(
                        std::lower_bound(comp.begin(), comp.end(), v) - comp.begin());
                };
                local = eulerian_trail(sub.graph, pos(odd[0]), pos(odd[1]));
            }
            retire(detail::lift(sub, local));
            continue;
        }

        const auto pairs = candidate_pairs(odd.size(), cap, rng);
        std::vector<Candidate> candidates;
        candidates.reserve(pairs.size());
        for (std::size_t a = 0; a < pairs.size();) {
            const std::size_t src = pairs[a].first;
            std::size_t b = a;
            std::size_t remaining = 0;
            for (; b < pairs.size() && pairs[b].first == src; ++b) ++remaining;

            // one BFS per source, stopping once every requested target is reached
            ++epoch;
            std::unordered_set<VertexId> targets;
            for (std::size_t q = a; q < b; ++q) targets.insert(odd[pairs[q].second]);
            std::vector<VertexId> queue{odd[src]};
            stamp[odd[src]] = epoch;
            dist[odd[src]] = 0;
            for (std::size_t head = 0; head < queue.size() && remaining > 0; ++head) {
                const VertexId x = queue[head];
                for (const auto& inc : g.neighbors(x)) {
                    if (!active[inc.edge] || stamp[inc.neighbor] == epoch) continue;
                    stamp[inc.neighbor] = epoch;
                    dist[inc.neighbor] = dist[x] + 1;
                    queue.push_back(inc.neighbor);
                    if (targets.count(inc.neighbor)) --remaining;
                }
            }
            for (std::size_t q = a; q < b; ++q) {
                candidates.push_back({dist[odd[pairs[q].second]], odd[src], odd[pairs[q].second]});
            }
            a = b;
        }

        std::size_t pick = 0;
        if (take_median) {
            std::sort(candidates.begin(), candidates.end(),
                      [](const Candidate& x, const Candidate& y) {
                          if (x.length != y.length) return x.length < y.length;
                          if (x.source != y.source) return x.source < y.source;
                          return x.target < y.target;
                      });
            pick = (candidates.size() - 1) / 2;
        } else {
            std::uniform_int_distribution<std::size_t> dist_pick(0, candidates.size() - 1);
            pick = dist_pick(rng);
        }
        ++epoch;
        retire(masked_path(g, active, candidates[pick].source, candidates[pick].target, parent,
                           stamp, epoch));

        for (auto& c : detail::active_components(g, active, comp)) pending.push_back(std::move(c));
    }
    return ts;
}

} // namespace

TrailSet decompose_pseudo_tour(const Graph& g, std::uint64_t seed) {
    require_connected(g);
    TrailSet ts = empty_set(g);
    if (g.n_edges() == 0) return ts;

    std::mt19937_64 rng(seed);
    std::vector<VertexId> pending = odd_degree_vertices(g);
    std::shuffle(pending.begin(), pending.end(), rng);

    const auto pseudo_base = static_cast<EdgeId>(g.n_edges());
    auto edges = g.edges();
    while (!pending.empty()) {
        const VertexId a = pending.back();
        pending.pop_back();
        // prefer a partner that is not already adjacent; fall back to a parallel edge
        std::size_t partner = pending.size() - 1;
        for (std::size_t i = pending.size(); i-- > 0;) {
            if (!g.adjacent(a, pending[i])) {
                partner = i;
                break;
            }
        }
        edges.push_back({a, pending[partner]});
        std::swap(pending[partner], pending.back());
        pending.pop_back();
    }
    const bool has_pseudo = edges.size() > g.n_edges();

    // walk the circuit over a seeded relabelling of the edges, so the tour's
    // shape does not follow whatever order the input listed its edges in
    std::vector<EdgeId> label(edges.size());
    std::iota(label.begin(), label.end(), EdgeId{0});
    std::shuffle(label.begin(), label.end(), rng);
    std::vector<Edge> relabelled(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) relabelled[i] = edges[label[i]];
    Trail circuit =
        eulerian_circuit(Graph(g.n_vertices(), std::move(relabelled)), first_non_isolated(g));
    for (auto& e : circuit.edge_ids) e = label[e];

    if (!has_pseudo) {
        ts.trails.push_back(std::move(circuit));
        return ts;
    }

    const std::size_t m = circuit.edge_ids.size();
    std::size_t first_cut = 0;
    while (circuit.edge_ids[first_cut] < pseudo_base) ++first_cut;

    Trail current{{circuit.vertices[(first_cut + 1) % m]}, {}};
    for (std::size_t j = 1; j <= m; ++j) {
        const std::size_t q = (first_cut + j) % m;
        const EdgeId e = circuit.edge_ids[q];
        const VertexId next = circuit.vertices[(q + 1) % m];
        if (e >= pseudo_base) {
            ts.trails.push_back(std::move(current));
            current = Trail{{next}, {}};
        } else {
            current.edge_ids.push_back(e);
            current.vertices.push_back(next);
        }
    }
    return ts;
}

TrailSet decompose_median_trails(const Graph& g, std::uint64_t seed, std::size_t pair_sample_cap) {
    return remove_paths(g, seed, pair_sample_cap, true);
}

TrailSet decompose_random_trails(const Graph& g, std::uint64_t seed, std::size_t pair_sample_cap) {
    return remove_paths(g, seed, pair_sample_cap, false);
}

TrailSet decompose_edge_wise(const Graph& g) {
    TrailSet ts = empty_set(g);
    ts.trails.reserve(g.n_edges());
    for (EdgeId e = 0; e < g.n_edges(); ++e) {
        ts.trails.push_back(Trail{{g.edge(e).u, g.edge(e).v}, {e}});
    }
    return ts;
}

TrailSet decompose_grid_rows_cols(std::size_t rows, std::size_t cols) {
    if (rows < 2 || cols < 2) {
        throw Error(ErrorCode::InvalidArgument, "rows+cols trails need at least a 2x2 grid");
    }
    TrailSet ts;
    ts.n_vertices = rows * cols;
    ts.n_edges = rows * (cols - 1) + cols * (rows - 1);
    const detail::GridEdgeIds ids{rows, cols};
    for (std::size_t r = 0; r < rows; ++r) {
        Trail t;
        for (std::size_t c = 0; c < cols; ++c) {
            t.vertices.push_back(static_cast<VertexId>(r * cols + c));
            if (c + 1 < cols) t.edge_ids.push_back(ids.right(r, c));
        }
        ts.trails.push_back(std::move(t));
    }
    for (std::size_t c = 0; c < cols; ++c) {
        Trail t;
        for (std::size_t r = 0; r < rows; ++r) {
            t.vertices.push_back(static_cast<VertexId>(r * cols + c));
            if (r + 1 < rows) t.edge_ids.push_back(ids.down(r, c));
        }
        ts.trails.push_back(std::move(t));
    }
    return ts;
}

TrailSet decompose(const Graph& g, const DecompositionStrategy& strategy,
                   std::optional<std::pair<std::size_t, std::size_t>> grid_dims) {
    switch (strategy.kind) {
    case StrategyKind::PseudoTour: return decompose_pseudo_tour(g, strategy.seed);
    case StrategyKind::MedianTrails:
        return decompose_median_trails(g, strategy.seed, strategy.pair_sample_cap);
    case StrategyKind::RandomTrails:
        return decompose_random_trails(g, strategy.seed, strategy.pair_sample_cap);
    case StrategyKind::EdgeWise: return decompose_edge_wise(g);
    case StrategyKind::GridRowsCols:
        if (!grid_dims || grid_dims->first * grid_dims->second != g.n_vertices()) {
            throw Error(ErrorCode::InvalidArgument,
                        "rowscols strategy needs a grid graph with known dimensions");
        }
        return decompose_grid_rows_cols(grid_dims->first, grid_dims->second);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown strategy");
}

TrailSet halve_trails(const TrailSet& ts) {
    TrailSet out;
    out.n_vertices = ts.n_vertices;
    out.n_edges = ts.n_edges;
    out.trails.reserve(ts.trails.size() * 2);
    for (const auto& t : ts.trails) {
        const std::size_t m = t.length();
        if (m < 2) {
            out.trails.push_back(t);
            continue;
        }
        const std::size_t h = m / 2;
        const auto split = [&](std::size_t from, std::size_t to) {
            Trail part;
            part.vertices.assign(t.vertices.begin() + static_cast<std::ptrdiff_t>(from),
                                 t.vertices.begin() + static_cast<std::ptrdiff_t>(to + 1));
            if (!t.edge_ids.empty()) {
                part.edge_ids.assign(t.edge_ids.begin() + static_cast<std::ptrdiff_t>(from),
                                     t.edge_ids.begin() + static_cast<std::ptrdiff_t>(to));
            }
            return part;
        };
        out.trails.push_back(split(0, h));
        out.trails.push_back(split(h, m));
    }
    return out;
}

TrailStats trail_stats(const TrailSet& ts) {
    TrailStats stats;
    stats.count = ts.trails.size();
    if (stats.count == 0) return stats;

    std::vector<std::size_t> lengths;
    lengths.reserve(stats.count);
    for (const auto& t : ts.trails) lengths.push_back(t.length());
    std::sort(lengths.begin(), lengths.end());

    stats.min_length = lengths.front();
    stats.max_length = lengths.back();
    const std::size_t mid = stats.count / 2;
    stats.median_length = stats.count % 2 == 1
                              ? static_cast<double>(lengths[mid])
                              : 0.5 * static_cast<double>(lengths[mid - 1] + lengths[mid]);
    double sum = 0.0;
    for (const auto m : lengths) sum += static_cast<double>(m);
    stats.mean_length = sum / static_cast<double>(stats.count);
    double ss = 0.0;
    for (const auto m : lengths) {
        const double d = static_cast<double>(m) - stats.mean_length;
        ss += d * d;
    }
    stats.variance = ss / static_cast<double>(stats.count);
    stats.histogram.assign(stats.max_length + 1, 0);
    for (const auto m : lengths) ++stats.histogram[m];
    return stats;
}

} // namespace gfl
