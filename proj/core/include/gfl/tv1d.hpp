#pragma once

#include <span>
#include <vector>

namespace gfl {

/* Exact solver for the weighted 1D fused lasso
 *
 *     minimize_z   sum_r w_r (y_r - z_r)^2  +  sum_r |z_{r+1} - z_r|
 *
 * by forward message passing over the piecewise-linear derivative of the
 * running cost (knots kept in a double-ended buffer) followed by backward
 * clipping. O(m) amortized. The edge penalty is fixed at 1; callers fold any
 * fusion weight into w.
 */
class Tv1dSolver {
public:
    /* Uniform weight w > 0. `z` may alias `y`. */
    void solve(std::span<const double> y, double w, std::span<double> z);

    /* Per-position weights, all > 0. */
    void solve(std::span<const double> y, std::span<const double> w, std::span<double> z);

private:
    template <typename Weight>
    void run(std::span<const double> y, Weight weight, std::span<double> z);

    // scratch reused across calls
    std::vector<double> knot_x_, knot_a_, knot_b_, lower_, upper_;
};

std::vector<double> solve_tv1d(std::span<const double> y, double w);
std::vector<double> solve_tv1d(std::span<const double> y, std::span<const double> w);

/* Certifies optimality: builds edge subgradients by forward substitution,
 * s_r = s_{r-1} + 2 w_r (z_r - y_r), and checks |s_r| <= 1 + tol, s_r equal to
 * sign(z_{r+1} - z_r) within tol wherever the difference is nonzero, and the
 * closing condition s_m = 0 within tol. Throws LengthMismatch. */
bool verify_tv1d_kkt(std::span<const double> y, double w, std::span<const double> z, double tol);
bool verify_tv1d_kkt(std::span<const double> y, std::span<const double> w,
                     std::span<const double> z, double tol);

double tv1d_objective(std::span<const double> y, double w, std::span<const double> z);

} // namespace gfl
