#include "gfl/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "gfl/error.hpp"
#include "gfl/tv1d.hpp"
#include "graph_internal.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gfl {

SeparableLoss poisson_loss() {
    SeparableLoss loss;
    loss.name = "poisson";
    loss.value = [](double y, double b) { return b - y * std::log(b); };
    loss.gradient = [](double y, double b) { return 1.0 - y / b; };
    loss.hessian = [](double y, double b) { return y / (b * b); };
    loss.in_domain = [](double b) { return b > 0.0; };
    loss.start = [](double y) { return std::max(y, 1e-3); };
    return loss;
}

SeparableLoss squared_loss_generic() {
    SeparableLoss loss;
    loss.name = "squared";
    loss.value = [](double y, double b) { return 0.5 * (y - b) * (y - b); };
    loss.gradient = [](double y, double b) { return b - y; };
    loss.hessian = [](double, double) { return 1.0; };
    return loss;
}

SeparableLoss zero_loss() {
    SeparableLoss loss;
    loss.name = "zero";
    loss.value = [](double, double) { return 0.0; };
    loss.gradient = [](double, double) { return 0.0; };
    loss.hessian = [](double, double) { return 0.0; };
    return loss;
}

namespace {

std::size_t worker_count(std::size_t requested) {
#ifdef _OPENMP
    return requested == 0 ? static_cast<std::size_t>(omp_get_max_threads()) : requested;
#else
    (void)requested;
    return 1;
#endif
}

/* Minimizes l_i(b) + 1/2 (sum_rho b^2) - weighted_target b. */
double newton_coordinate(const SeparableLoss& loss, double y, double b, double sum_rho,
                         double weighted_target, std::size_t iters, double tol) {
    if (!loss.in_domain(b)) b = loss.start(y);
    for (std::size_t it = 0; it < iters; ++it) {
        const double g = loss.gradient(y, b) + sum_rho * b - weighted_target;
        const double h = loss.hessian(y, b) + sum_rho;
        if (!std::isfinite(g) || !std::isfinite(h) || !(h > 0.0)) {
            throw Error(ErrorCode::NonFiniteDerivative,
                        loss.name + " loss: non-finite or non-positive curvature at beta=" +
                            std::to_string(b));
        }
        double step = g / h;
        double next = b - step;
        // halve the step until it stays inside the loss domain
        for (int k = 0; k < 60 && !loss.in_domain(next); ++k) {
            step *= 0.5;
            next = b - step;
        }
        if (!loss.in_domain(next)) break;
        const bool done = std::abs(next - b) <= tol * (1.0 + std::abs(b));
        b = next;
        if (done) break;
    }
    return b;
}

double loss_minimizer(const Loss& loss, double y, const SolverConfig& config) {
    if (std::holds_alternative<SquaredLoss>(loss)) return y;
    const auto& generic = std::get<SeparableLoss>(loss);
    return newton_coordinate(generic, y, generic.start(y), 0.0, 0.0, config.newton_iters,
                             config.newton_tol);
}

double loss_value(const Loss& loss, std::span<const double> y, std::span<const double> beta) {
    double total = 0.0;
    if (std::holds_alternative<SquaredLoss>(loss)) {
        for (std::size_t i = 0; i < y.size(); ++i) total += 0.5 * (y[i] - beta[i]) * (y[i] - beta[i]);
    } else {
        const auto& generic = std::get<SeparableLoss>(loss);
        for (std::size_t i = 0; i < y.size(); ++i) total += generic.value(y[i], beta[i]);
    }
    return total;
}

double trail_objective(const TrailSet& ts, std::span<const double> y,
                       std::span<const double> beta, double lambda, const Loss& loss) {
    double tv = 0.0;
    for (const auto& t : ts.trails) {
        for (std::size_t s = 0; s + 1 < t.vertices.size(); ++s) {
            tv += std::abs(beta[t.vertices[s]] - beta[t.vertices[s + 1]]);
        }
    }
    return loss_value(loss, y, beta) + lambda * tv;
}

} // namespace

SlackMapping build_slack_mapping(const TrailSet& ts, std::size_t n_vertices) {
    SlackMapping m;
    m.n_vertices = n_vertices;
    std::size_t d = 0;
    for (const auto& t : ts.trails) d += t.vertices.size();
    m.slack_to_vertex.reserve(d);
    m.trail_of_slack.reserve(d);
    m.trail_spans.reserve(ts.trails.size());

    std::vector<std::size_t> count(n_vertices, 0);
    for (std::size_t t = 0; t < ts.trails.size(); ++t) {
        const std::size_t begin = m.slack_to_vertex.size();
        for (const VertexId v : ts.trails[t].vertices) {
            if (v >= n_vertices) {
                throw Error(ErrorCode::VertexOutOfRange,
                            "trail " + std::to_string(t) + " references vertex " +
                                std::to_string(v) + " >= " + std::to_string(n_vertices));
            }
            m.slack_to_vertex.push_back(v);
            m.trail_of_slack.push_back(t);
            ++count[v];
        }
        m.trail_spans.emplace_back(begin, m.slack_to_vertex.size());
    }

    m.vertex_offsets.assign(n_vertices + 1, 0);
    for (std::size_t v = 0; v < n_vertices; ++v) m.vertex_offsets[v + 1] = m.vertex_offsets[v] + count[v];
    m.vertex_slacks.resize(d);
    std::vector<std::size_t> fill(m.vertex_offsets.begin(), m.vertex_offsets.end() - 1);
    for (std::size_t j = 0; j < d; ++j) m.vertex_slacks[fill[m.slack_to_vertex[j]]++] = j;
    return m;
}

void beta_update_squared(std::span<const double> y, std::span<const double> z,
                         std::span<const double> u, std::span<const double> rho,
                         const SlackMapping& mapping, std::span<double> beta) {
    const auto n = static_cast<std::ptrdiff_t>(mapping.n_vertices);
#pragma omp parallel for schedule(static) if (n > 20000)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto slacks = mapping.slacks_of(static_cast<VertexId>(i));
        double num = y[i];
        double den = 1.0;
        for (const std::size_t j : slacks) {
            num += rho[j] * (z[j] - u[j]);
            den += rho[j];
        }
        beta[i] = num / den;
    }
}

void beta_update_generic(const SeparableLoss& loss, std::span<const double> y,
                         std::span<const double> z, std::span<const double> u,
                         std::span<const double> rho, const SlackMapping& mapping,
                         std::size_t newton_iters, double newton_tol, std::span<double> beta) {
    for (std::size_t i = 0; i < mapping.n_vertices; ++i) {
        double sum_rho = 0.0;
        double target = 0.0;
        for (const std::size_t j : mapping.slacks_of(static_cast<VertexId>(i))) {
            sum_rho += rho[j];
            target += rho[j] * (z[j] - u[j]);
        }
        beta[i] = newton_coordinate(loss, y[i], beta[i], sum_rho, target, newton_iters, newton_tol);
    }
}

void z_update(std::span<const double> beta, std::span<const double> u,
              std::span<const double> rho, const SlackMapping& mapping, double lambda,
              std::span<double> z, std::size_t threads) {
    if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "z-update needs lambda > 0");
    const auto k = static_cast<std::ptrdiff_t>(mapping.n_trails());
    const std::size_t workers = worker_count(threads);
    (void)workers;
#pragma omp parallel for schedule(dynamic, 16) num_threads(workers) if (workers > 1)
    for (std::ptrdiff_t t = 0; t < k; ++t) {
        thread_local Tv1dSolver solver;
        thread_local std::vector<double> target;
        const auto [begin, end] = mapping.trail_spans[static_cast<std::size_t>(t)];
        target.resize(end - begin);
        for (std::size_t j = begin; j < end; ++j) {
            target[j - begin] = beta[mapping.slack_to_vertex[j]] + u[j];
        }
        const double w = rho[begin] / (2.0 * lambda);
        solver.solve(target, w, z.subspan(begin, end - begin));
    }
}

void u_update(std::span<double> u, std::span<const double> beta, std::span<const double> z,
              const SlackMapping& mapping) {
    for (std::size_t j = 0; j < u.size(); ++j) u[j] += beta[mapping.slack_to_vertex[j]] - z[j];
}

std::vector<double> adaptive_penalties(const SlackMapping& mapping, double alpha, double c) {
    if (c < 0.0 || c > 1.0) throw Error(ErrorCode::InvalidArgument, "accel c must lie in [0, 1]");
    if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be positive");
    const auto k = static_cast<double>(mapping.n_trails());
    const auto d = static_cast<double>(mapping.n_slacks());
    std::vector<double> rho(mapping.n_slacks(), alpha);
    for (const auto& [begin, end] : mapping.trail_spans) {
        // trail length relative to the mean, both counted in slacks; written
        // as 1 + c (ratio - 1) so equal-length trails give exactly alpha
        const double ratio = k * static_cast<double>(end - begin) / d;
        const double value = (1.0 + c * (ratio - 1.0)) * alpha;
        std::fill(rho.begin() + static_cast<std::ptrdiff_t>(begin),
                  rho.begin() + static_cast<std::ptrdiff_t>(end), value);
    }
    return rho;
}

Residuals residuals(std::span<const double> beta, std::span<const double> z,
                    std::span<const double> z_prev, std::span<const double> u,
                    std::span<const double> rho, const SlackMapping& mapping, double tol) {
    double r2 = 0.0;
    double ab2 = 0.0;
    double z2 = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
        const double ab = beta[mapping.slack_to_vertex[j]];
        r2 += (ab - z[j]) * (ab - z[j]);
        ab2 += ab * ab;
        z2 += z[j] * z[j];
    }
    double s2 = 0.0;
    double dual2 = 0.0;
    for (std::size_t i = 0; i < mapping.n_vertices; ++i) {
        double s_i = 0.0;
        double y_i = 0.0;
        for (const std::size_t j : mapping.slacks_of(static_cast<VertexId>(i))) {
            s_i += rho[j] * (z_prev[j] - z[j]);
            y_i += rho[j] * u[j];
        }
        s2 += s_i * s_i;
        dual2 += y_i * y_i;
    }
    Residuals res;
    res.r_norm = std::sqrt(r2);
    res.s_norm = std::sqrt(s2);
    res.eps_pri = std::sqrt(static_cast<double>(z.size())) * tol +
                  tol * std::max(std::sqrt(ab2), std::sqrt(z2));
    res.eps_dual = std::sqrt(static_cast<double>(mapping.n_vertices)) * tol + tol * std::sqrt(dual2);
    return res;
}

bool vary_penalty(AdmmState& state, const SlackMapping& mapping, double accel_c) {
    constexpr double kBalance = 10.0;
    double scale = 1.0;
    if (state.r_norm > kBalance * state.s_norm) {
        scale = 2.0;
    } else if (state.s_norm > kBalance * state.r_norm) {
        scale = 0.5;
    } else {
        return false;
    }
    state.alpha *= scale;
    for (auto& uj : state.u) uj /= scale;
    state.rho = adaptive_penalties(mapping, state.alpha, accel_c);
    return true;
}

double gfl_objective(const Graph& g, std::span<const double> y, std::span<const double> beta,
                     double lambda, const Loss& loss) {
    if (y.size() != g.n_vertices() || beta.size() != g.n_vertices()) {
        throw Error(ErrorCode::DimensionMismatch, "objective: y/beta length vs graph size");
    }
    double tv = 0.0;
    for (const auto& e : g.edges()) tv += std::abs(beta[e.u] - beta[e.v]);
    return loss_value(loss, y, beta) + lambda * tv;
}

SolveResult solve_gfl(const TrailSet& ts, const ProblemInstance& problem,
                      const SolverConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = problem.y.size();
    if (ts.n_vertices != 0 && ts.n_vertices != n) {
        throw Error(ErrorCode::DimensionMismatch,
                    "y has " + std::to_string(n) + " entries but the graph has " +
                        std::to_string(ts.n_vertices) + " vertices");
    }
    if (problem.lambda < 0.0) throw Error(ErrorCode::InvalidArgument, "lambda must be >= 0");
    if (!(config.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
    if (!(config.alpha0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha0 must be > 0");

    SolveResult result;
    auto& diag = result.diagnostics;
    const auto finish = [&] {
        diag.objective = trail_objective(ts, problem.y, result.beta, problem.lambda, problem.loss);
        diag.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    if (problem.lambda == 0.0 || ts.trails.empty()) {
        result.beta.resize(n);
        for (std::size_t i = 0; i < n; ++i) result.beta[i] = loss_minimizer(problem.loss, problem.y[i], config);
        diag.converged = true;
        finish();
        return result;
    }

    const SlackMapping mapping = build_slack_mapping(ts, n);
    const std::size_t d = mapping.n_slacks();
    const auto* generic = std::get_if<SeparableLoss>(&problem.loss);

    AdmmState state;
    state.beta = problem.y;
    if (generic) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!generic->in_domain(state.beta[i])) state.beta[i] = generic->start(problem.y[i]);
        }
    }
    state.z.resize(d);
    for (std::size_t j = 0; j < d; ++j) state.z[j] = state.beta[mapping.slack_to_vertex[j]];
    state.u.assign(d, 0.0);
    state.alpha = config.alpha0;
    state.rho = adaptive_penalties(mapping, state.alpha, config.accel_c);
    std::vector<double> z_prev(d);

    for (state.iteration = 1; state.iteration <= config.max_iters; ++state.iteration) {
        if (generic) {
            beta_update_generic(*generic, problem.y, state.z, state.u, state.rho, mapping,
                                config.newton_iters, config.newton_tol, state.beta);
        } else {
            beta_update_squared(problem.y, state.z, state.u, state.rho, mapping, state.beta);
        }
        std::swap(z_prev, state.z);
        z_update(state.beta, state.u, state.rho, mapping, problem.lambda, state.z, config.threads);
        u_update(state.u, state.beta, state.z, mapping);
        if (config.observer) config.observer(state);

        const Residuals res =
            residuals(state.beta, state.z, z_prev, state.u, state.rho, mapping, config.tol);
        state.r_norm = res.r_norm;
        state.s_norm = res.s_norm;
        if (config.record_history) {
            diag.history.push_back({state.iteration, res.r_norm, res.s_norm, state.alpha,
                                    trail_objective(ts, problem.y, state.beta, problem.lambda,
                                                    problem.loss)});
        }
        diag.steps = state.iteration;
        if (res.converged()) {
            diag.converged = true;
            break;
        }
        if (config.vary_penalty) vary_penalty(state, mapping, config.accel_c);
    }

    // vertices no trail touches only see their loss term
    for (std::size_t i = 0; i < n; ++i) {
        if (mapping.slacks_of(static_cast<VertexId>(i)).empty()) {
            state.beta[i] = loss_minimizer(problem.loss, problem.y[i], config);
        }
    }
    result.beta = std::move(state.beta);
    finish();
    return result;
}

SolveResult solve_gfl(const Graph& g, const ProblemInstance& problem,
                      const DecompositionStrategy& strategy, const SolverConfig& config,
                      std::optional<std::pair<std::size_t, std::size_t>> grid_dims) {
    if (problem.y.size() != g.n_vertices()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "y has " + std::to_string(problem.y.size()) + " entries but the graph has " +
                        std::to_string(g.n_vertices()) + " vertices");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const auto components = connected_components(g);
    if (components.size() <= 1) {
        return solve_gfl(decompose(g, strategy, grid_dims), problem, config);
    }

    SolveResult result;
    result.beta.assign(g.n_vertices(), 0.0);
    auto& diag = result.diagnostics;
    diag.converged = true;
    const detail::EdgeMask all(g.n_edges(), 1);
    for (const auto& comp : components) {
        if (comp.size() == 1) {
            result.beta[comp[0]] = loss_minimizer(problem.loss, problem.y[comp[0]], config);
            continue;
        }
        const auto sub = detail::extract_subgraph(g, all, comp);
        ProblemInstance local{{}, problem.lambda, problem.loss};
        local.y.reserve(comp.size());
        for (const VertexId v : comp) local.y.push_back(problem.y[v]);
        const auto part = solve_gfl(decompose(sub.graph, strategy), local, config);
        for (std::size_t i = 0; i < comp.size(); ++i) result.beta[comp[i]] = part.beta[i];
        diag.converged = diag.converged && part.diagnostics.converged;
        if (part.diagnostics.steps >= diag.steps) {
            diag.steps = part.diagnostics.steps;
            diag.history = part.diagnostics.history;
        }
    }
    diag.objective = gfl_objective(g, problem.y, result.beta, problem.lambda, problem.loss);
    diag.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

} // namespace gfl
