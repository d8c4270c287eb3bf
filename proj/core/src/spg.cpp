#include "gfl/spg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "gfl/error.hpp"

namespace gfl {

EdgeDiffMatrix::EdgeDiffMatrix(const Graph& g, double scale)
    : n_cols_(g.n_vertices()), scale_(scale) {
    plus_.reserve(g.n_edges());
    minus_.reserve(g.n_edges());
    for (const auto& e : g.edges()) {
        plus_.push_back(std::min(e.u, e.v));
        minus_.push_back(std::max(e.u, e.v));
    }
}

void EdgeDiffMatrix::apply(std::span<const double> beta, std::span<double> out) const {
    for (std::size_t e = 0; e < plus_.size(); ++e) {
        out[e] = scale_ * (beta[plus_[e]] - beta[minus_[e]]);
    }
}

void EdgeDiffMatrix::apply_transpose(std::span<const double> dual, std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t e = 0; e < plus_.size(); ++e) {
        out[plus_[e]] += scale_ * dual[e];
        out[minus_[e]] -= scale_ * dual[e];
    }
}

std::vector<double> truncate(std::span<const double> v) {
    std::vector<double> out(v.size());
    std::transform(v.begin(), v.end(), out.begin(),
                   [](double x) { return std::clamp(x, -1.0, 1.0); });
    return out;
}

namespace {

double huber(double x, double mu) {
    const double ax = std::abs(x);
    return ax <= mu ? x * x / (2.0 * mu) : ax - 0.5 * mu;
}

} // namespace

double spg_smoothed_objective(const EdgeDiffMatrix& d, std::span<const double> y,
                              std::span<const double> beta, double mu) {
    std::vector<double> diff(d.rows());
    d.apply(beta, diff);
    double value = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) value += 0.5 * (y[i] - beta[i]) * (y[i] - beta[i]);
    for (const double x : diff) value += huber(x, mu);
    return value;
}

SolveResult spg_solve(const Graph& g, std::span<const double> y, double lambda, double epsilon,
                      const SpgConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    if (y.size() != g.n_vertices()) {
        throw Error(ErrorCode::DimensionMismatch, "spg: y length vs graph size");
    }
    if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "spg: epsilon must be > 0");
    if (lambda < 0.0) throw Error(ErrorCode::InvalidArgument, "spg: lambda must be >= 0");

    const std::size_t n = y.size();
    SolveResult result;
    result.beta.assign(y.begin(), y.end());
    auto& diag = result.diagnostics;

    if (g.n_edges() == 0 || lambda == 0.0) {
        diag.converged = true;
        diag.objective = gfl_objective(g, y, result.beta, lambda);
        return result;
    }

    const EdgeDiffMatrix d(g, lambda);
    const double mu = epsilon / static_cast<double>(g.n_edges());
    std::vector<double> diff(d.rows());
    std::vector<double> grad(n);
    std::vector<double> trial(n);
    auto& beta = result.beta;
    double f = spg_smoothed_objective(d, y, beta, mu);

    for (std::size_t it = 1; it <= config.max_iters; ++it) {
        d.apply(beta, diff);
        for (auto& x : diff) x = std::clamp(x / mu, -1.0, 1.0);
        d.apply_transpose(diff, grad);
        double grad2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            grad[i] += beta[i] - y[i];
            grad2 += grad[i] * grad[i];
        }

        double eta = config.eta0;
        double f_trial = f;
        for (std::size_t h = 0;; ++h) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = beta[i] - eta * grad[i];
            f_trial = spg_smoothed_objective(d, y, trial, mu);
            if (f_trial <= f - config.armijo * eta * grad2 || h >= config.max_halvings) break;
            eta *= config.shrink;
        }

        double moved = 0.0;
        if (f_trial <= f) {
            for (std::size_t i = 0; i < n; ++i) moved = std::max(moved, std::abs(trial[i] - beta[i]));
            beta.swap(trial);
            f = f_trial;
        }
        diag.steps = it;
        if (config.record_history) {
            diag.history.push_back({it, moved, std::sqrt(grad2), eta, gfl_objective(g, y, beta, lambda)});
        }
        if (moved < epsilon) {
            diag.converged = true;
            break;
        }
    }
    diag.objective = gfl_objective(g, y, beta, lambda);
    diag.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

} // namespace gfl
