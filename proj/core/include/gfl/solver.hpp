#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gfl/graph.hpp"
#include "gfl/trails.hpp"

namespace gfl {

/* l(y, beta) = 1/2 sum_i (y_i - beta_i)^2, handled in closed form. */
struct SquaredLoss {};

/* Coordinate-separable smooth convex loss given by per-coordinate value and
 * first/second derivatives in beta. `in_domain` restricts beta (e.g. beta > 0
 * for Poisson); `start` maps an observation to a feasible starting point. */
struct SeparableLoss {
    std::string name;
    std::function<double(double y, double beta)> value;
    std::function<double(double y, double beta)> gradient;
    std::function<double(double y, double beta)> hessian;
    std::function<bool(double beta)> in_domain = [](double) { return true; };
    std::function<double(double y)> start = [](double y) { return y; };
};

using Loss = std::variant<SquaredLoss, SeparableLoss>;

/* beta - y log(beta), beta > 0 */
SeparableLoss poisson_loss();
/* 1/2 (y - beta)^2 through the generic Newton path */
SeparableLoss squared_loss_generic();
SeparableLoss zero_loss();

struct ProblemInstance {
    std::vector<double> y;
    double lambda = 1.0;
    Loss loss = SquaredLoss{};
};

/* The sparse 0/1 matrix A tying slack copies z to the primal beta: slack j
 * copies vertex slack_to_vertex[j]. Each trail with m edges owns a
 * contiguous run of m + 1 slacks. */
struct SlackMapping {
    std::size_t n_vertices = 0;
    std::vector<VertexId> slack_to_vertex;
    std::vector<std::size_t> trail_of_slack;
    std::vector<std::pair<std::size_t, std::size_t>> trail_spans;  // [begin, end)
    std::vector<std::size_t> vertex_offsets;                        // CSR into vertex_slacks
    std::vector<std::size_t> vertex_slacks;

    std::size_t n_slacks() const noexcept { return slack_to_vertex.size(); }
    std::size_t n_trails() const noexcept { return trail_spans.size(); }

    std::span<const std::size_t> slacks_of(VertexId v) const noexcept {
        return {vertex_slacks.data() + vertex_offsets[v], vertex_offsets[v + 1] - vertex_offsets[v]};
    }
};

struct AdmmState {
    std::vector<double> beta;
    std::vector<double> z;
    std::vector<double> u;
    std::vector<double> rho;
    double alpha = 1.0;
    std::size_t iteration = 0;
    double r_norm = 0.0;
    double s_norm = 0.0;
};

struct SolverConfig {
    double tol = 1e-4;
    std::size_t max_iters = 100000;
    double alpha0 = 1.0;
    bool vary_penalty = true;
    double accel_c = 0.0;
    std::size_t newton_iters = 20;
    double newton_tol = 1e-10;
    /* 0 = use every available core */
    std::size_t threads = 0;
    bool record_history = true;
    /* Called after every u-update, before the convergence check. */
    std::function<void(const AdmmState&)> observer;
};

struct Residuals {
    double r_norm = 0.0;
    double s_norm = 0.0;
    double eps_pri = 0.0;
    double eps_dual = 0.0;

    bool converged() const noexcept { return r_norm <= eps_pri && s_norm <= eps_dual; }
};

struct IterationRecord {
    std::size_t iter;
    double r_norm;
    double s_norm;
    double alpha;
    double objective;
};

struct SolveDiagnostics {
    std::size_t steps = 0;
    bool converged = false;
    double seconds = 0.0;
    double objective = 0.0;
    std::vector<IterationRecord> history;
};

struct SolveResult {
    std::vector<double> beta;
    SolveDiagnostics diagnostics;
};

/* Throws VertexOutOfRange. */
SlackMapping build_slack_mapping(const TrailSet& ts, std::size_t n_vertices);

/* beta_i = (y_i + sum_{j in J(i)} rho_j (z_j - u_j)) / (1 + sum_{j in J(i)} rho_j).
 * Vertices with no slack get y_i. */
void beta_update_squared(std::span<const double> y, std::span<const double> z,
                         std::span<const double> u, std::span<const double> rho,
                         const SlackMapping& mapping, std::span<double> beta);

/* Per-coordinate Newton on l_i(b) + 1/2 sum_j rho_j (b - z_j + u_j)^2, warm
 * started from the incoming beta. Throws NonFiniteDerivative. */
void beta_update_generic(const SeparableLoss& loss, std::span<const double> y,
                         std::span<const double> z, std::span<const double> u,
                         std::span<const double> rho, const SlackMapping& mapping,
                         std::size_t newton_iters, double newton_tol, std::span<double> beta);

/* Each trail solves a 1D fused lasso on targets beta[vertex(j)] + u_j with
 * weight rho_t / (2 lambda). Requires lambda > 0. */
void z_update(std::span<const double> beta, std::span<const double> u,
              std::span<const double> rho, const SlackMapping& mapping, double lambda,
              std::span<double> z, std::size_t threads = 1);

void u_update(std::span<double> u, std::span<const double> beta, std::span<const double> z,
              const SlackMapping& mapping);

/* rho_j = (c k T(j) / d + (1 - c)) alpha with k trails, d slacks and T(j) the
 * number of slacks (vertex visits) on the trail holding slack j, so d / k is
 * the mean trail length and equal-length trails get rho = alpha. */
std::vector<double> adaptive_penalties(const SlackMapping& mapping, double alpha, double c);

Residuals residuals(std::span<const double> beta, std::span<const double> z,
                    std::span<const double> z_prev, std::span<const double> u,
                    std::span<const double> rho, const SlackMapping& mapping, double tol);

/* Residual balancing: double alpha (halve u) when r > 10 s, halve alpha
 * (double u) when s > 10 r, then recompute rho. Returns true if alpha moved. */
bool vary_penalty(AdmmState& state, const SlackMapping& mapping, double accel_c);

double gfl_objective(const Graph& g, std::span<const double> y, std::span<const double> beta,
                     double lambda, const Loss& loss = SquaredLoss{});

/* Runs ADMM on a fixed trail set. Vertices covered by no trail are solved on
 * the loss alone. Throws DimensionMismatch. */
SolveResult solve_gfl(const TrailSet& ts, const ProblemInstance& problem,
                      const SolverConfig& config = {});

/* Decomposes each connected component with `strategy` and solves it
 * independently; rowscols needs `grid_dims` and a connected grid. */
SolveResult solve_gfl(const Graph& g, const ProblemInstance& problem,
                      const DecompositionStrategy& strategy, const SolverConfig& config = {},
                      std::optional<std::pair<std::size_t, std::size_t>> grid_dims = std::nullopt);

} // namespace gfl
