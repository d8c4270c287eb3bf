#pragma once

#include <span>
#include <vector>

#include "gfl/graph.hpp"
#include "gfl/solver.hpp"

namespace gfl {

/* Signed edge-vertex incidence: row e = (r, s) with r < s carries +scale at r
 * and -scale at s, so (D beta)_e = scale * (beta_r - beta_s). */
class EdgeDiffMatrix {
public:
    explicit EdgeDiffMatrix(const Graph& g, double scale = 1.0);

    std::size_t rows() const noexcept { return plus_.size(); }
    std::size_t cols() const noexcept { return n_cols_; }
    double scale() const noexcept { return scale_; }

    void apply(std::span<const double> beta, std::span<double> out) const;
    void apply_transpose(std::span<const double> dual, std::span<double> out) const;

private:
    std::size_t n_cols_ = 0;
    double scale_ = 1.0;
    std::vector<VertexId> plus_;
    std::vector<VertexId> minus_;
};

/* Elementwise clamp to [-1, 1]. */
std::vector<double> truncate(std::span<const double> v);

struct SpgConfig {
    std::size_t max_iters = 20000;
    double eta0 = 1.0;
    double armijo = 1e-4;
    double shrink = 0.5;
    std::size_t max_halvings = 50;
    bool record_history = false;
};

/* Smoothed objective 1/2 |y - beta|^2 + sum_e h_mu((lambda D beta)_e) with the
 * Huber function h_mu(x) = x^2 / (2 mu) for |x| <= mu, |x| - mu / 2 otherwise. */
double spg_smoothed_objective(const EdgeDiffMatrix& d, std::span<const double> y,
                              std::span<const double> beta, double mu);

/* Gradient descent on the smoothed surrogate with mu = epsilon / |E|,
 * backtracking line search, stopping when the iterate moves less than epsilon
 * in the max norm. `diagnostics.objective` is the true (unsmoothed) value. */
SolveResult spg_solve(const Graph& g, std::span<const double> y, double lambda, double epsilon,
                      const SpgConfig& config = {});

} // namespace gfl
