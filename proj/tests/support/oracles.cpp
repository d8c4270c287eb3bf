#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include "gfl/tv1d.hpp"

namespace gfl::oracle {

std::vector<int> bfs_distances_dense(const Graph& g, VertexId source) {
    const std::size_t n = g.n_vertices();
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (const auto& e : g.edges()) adj[e.u][e.v] = adj[e.v][e.u] = 1;
    std::vector<int> dist(n, -1);
    std::queue<VertexId> q;
    dist[source] = 0;
    q.push(source);
    while (!q.empty()) {
        const VertexId x = q.front();
        q.pop();
        for (VertexId y = 0; y < n; ++y) {
            if (adj[x][y] && dist[y] < 0) {
                dist[y] = dist[x] + 1;
                q.push(y);
            }
        }
    }
    return dist;
}

std::pair<double, double> tv1d_two_point(double y1, double y2, double w) {
    // stationarity: 2w(z1 - y1) = s, 2w(z2 - y2) = -s, s in sign(z2 - z1)
    const double gap = y2 - y1;
    if (std::abs(gap) <= 1.0 / w) {
        const double mean = 0.5 * (y1 + y2);
        return {mean, mean};
    }
    const double shift = gap > 0 ? 0.5 / w : -0.5 / w;
    return {y1 + shift, y2 - shift};
}

Graph random_connected_graph(std::size_t n, std::size_t extra, std::mt19937_64& rng) {
    std::vector<Edge> edges;
    std::set<std::pair<VertexId, VertexId>> seen;
    for (VertexId v = 1; v < n; ++v) {
        std::uniform_int_distribution<VertexId> parent(0, v - 1);
        const VertexId p = parent(rng);
        edges.push_back({p, v});
        seen.insert({p, v});
    }
    const std::size_t max_edges = n * (n - 1) / 2;
    std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
    while (extra > 0 && edges.size() < max_edges) {
        VertexId a = pick(rng);
        VertexId b = pick(rng);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (!seen.insert({a, b}).second) continue;
        edges.push_back({a, b});
        --extra;
    }
    // relabel so that tree structure is not aligned with ids
    std::vector<VertexId> perm(n);
    for (VertexId v = 0; v < n; ++v) perm[v] = v;
    std::shuffle(perm.begin(), perm.end(), rng);
    for (auto& e : edges) e = {perm[e.u], perm[e.v]};
    std::shuffle(edges.begin(), edges.end(), rng);
    return Graph(n, std::move(edges));
}

Graph random_even_graph(std::size_t n, std::size_t n_cycles, std::mt19937_64& rng) {
    std::vector<Edge> edges;
    std::vector<VertexId> order(n);
    for (VertexId v = 0; v < n; ++v) order[v] = v;
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i = 0; i < n; ++i) edges.push_back({order[i], order[(i + 1) % n]});
    std::uniform_int_distribution<std::size_t> len(3, std::max<std::size_t>(3, n / 2));
    for (std::size_t c = 0; c < n_cycles; ++c) {
        std::shuffle(order.begin(), order.end(), rng);
        const std::size_t m = std::min(n, len(rng));
        for (std::size_t i = 0; i < m; ++i) edges.push_back({order[i], order[(i + 1) % m]});
    }
    return Graph(n, std::move(edges));
}

double naive_objective(const Graph& g, const std::vector<double>& y,
                       const std::vector<double>& beta, double lambda) {
    double loss = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) loss += 0.5 * (y[i] - beta[i]) * (y[i] - beta[i]);
    double tv = 0.0;
    for (VertexId a = 0; a < g.n_vertices(); ++a) {
        for (VertexId b = 0; b < g.n_vertices(); ++b) {
            for (const auto& e : g.edges()) {
                if (e.u == a && e.v == b) tv += std::abs(beta[a] - beta[b]);
            }
        }
    }
    return loss + lambda * tv;
}

double subgradient_oracle_objective(const Graph& g, const std::vector<double>& y, double lambda,
                                    std::size_t iterations) {
    const std::size_t n = y.size();
    std::vector<double> b = y;
    std::vector<double> avg = y;
    std::vector<double> grad(n);
    const auto objective = [&](const std::vector<double>& x) {
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) v += 0.5 * (y[i] - x[i]) * (y[i] - x[i]);
        for (const auto& e : g.edges()) v += lambda * std::abs(x[e.u] - x[e.v]);
        return v;
    };
    double best = objective(b);
    double weight_sum = 0.0;
    for (std::size_t k = 0; k < iterations; ++k) {
        for (std::size_t i = 0; i < n; ++i) grad[i] = b[i] - y[i];
        for (const auto& e : g.edges()) {
            const double d = b[e.u] - b[e.v];
            const double s = d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0);
            grad[e.u] += lambda * s;
            grad[e.v] -= lambda * s;
        }
        const double step = 1.0 / static_cast<double>(k + 1);
        for (std::size_t i = 0; i < n; ++i) b[i] -= step * grad[i];
        // averaging with weights proportional to k
        const double w = static_cast<double>(k + 1);
        weight_sum += w;
        for (std::size_t i = 0; i < n; ++i) avg[i] += (w / weight_sum) * (b[i] - avg[i]);
        if ((k + 1) % 1000 == 0 || k + 1 == iterations) {
            best = std::min({best, objective(b), objective(avg)});
        }
    }
    return best;
}

std::vector<std::vector<double>> reference_uniform_admm(const TrailSet& ts,
                                                        const std::vector<double>& y,
                                                        double lambda, double alpha,
                                                        std::size_t iterations) {
    const std::size_t n = y.size();
    std::vector<VertexId> owner;
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    for (const auto& t : ts.trails) {
        const std::size_t begin = owner.size();
        owner.insert(owner.end(), t.vertices.begin(), t.vertices.end());
        spans.emplace_back(begin, owner.size());
    }
    const std::size_t d = owner.size();
    std::vector<std::vector<std::size_t>> copies(n);
    for (std::size_t j = 0; j < d; ++j) copies[owner[j]].push_back(j);

    std::vector<double> beta = y;
    std::vector<double> z(d);
    std::vector<double> u(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) z[j] = beta[owner[j]];

    std::vector<std::vector<double>> trace;
    for (std::size_t it = 0; it < iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            if (copies[i].empty()) continue;
            // accumulate in slack order, as (y_i + alpha sum(z - u)) / (1 + alpha |J|)
            double num = y[i];
            double den = 1.0;
            for (const std::size_t j : copies[i]) {
                num += alpha * (z[j] - u[j]);
                den += alpha;
            }
            beta[i] = num / den;
        }
        for (const auto& [begin, end] : spans) {
            std::vector<double> target;
            for (std::size_t j = begin; j < end; ++j) target.push_back(beta[owner[j]] + u[j]);
            const auto sol = solve_tv1d(target, alpha / (2.0 * lambda));
            std::copy(sol.begin(), sol.end(), z.begin() + static_cast<std::ptrdiff_t>(begin));
        }
        for (std::size_t j = 0; j < d; ++j) u[j] = u[j] + (beta[owner[j]] - z[j]);
        trace.push_back(beta);
    }
    return trace;
}

std::vector<std::vector<double>> dense_slack_matrix(const TrailSet& ts, std::size_t n) {
    std::vector<std::vector<double>> a;
    for (const auto& t : ts.trails) {
        for (const VertexId v : t.vertices) {
            std::vector<double> row(n, 0.0);
            row[v] = 1.0;
            a.push_back(std::move(row));
        }
    }
    return a;
}

} // namespace gfl::oracle
