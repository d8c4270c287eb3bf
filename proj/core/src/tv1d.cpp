#include "gfl/tv1d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gfl/error.hpp"

namespace gfl {

/* The derivative of the running cost is piecewise linear and increasing.
 * Knot i stores the jump (a_i, b_i) of its slope/intercept when crossing
 * from left to right. Scanning from the left accumulates (a, b) giving the
 * derivative a*x + b; scanning from the right accumulates the negated
 * derivative. Knots only ever get trimmed or added at the two ends, so a
 * flat buffer of size 2n indexed by [l, r] is enough. */
template <typename Weight>
void Tv1dSolver::run(std::span<const double> y, Weight weight, std::span<double> z) {
    const std::size_t n = y.size();
    if (n == 0) return;
    if (n == 1) {
        z[0] = y[0];
        return;
    }

    knot_x_.resize(2 * n);
    knot_a_.resize(2 * n);
    knot_b_.resize(2 * n);
    lower_.resize(n - 1);
    upper_.resize(n - 1);
    double* x = knot_x_.data();
    double* a = knot_a_.data();
    double* b = knot_b_.data();

    const double w0 = weight(0);
    lower_[0] = y[0] - 0.5 / w0;
    upper_[0] = y[0] + 0.5 / w0;
    std::size_t l = n - 1;
    std::size_t r = n;
    x[l] = lower_[0];
    x[r] = upper_[0];
    a[l] = 2.0 * w0;
    b[l] = -2.0 * w0 * y[0] + 1.0;
    a[r] = -2.0 * w0;
    b[r] = 2.0 * w0 * y[0] + 1.0;

    double w1 = weight(1);
    double a_first = 2.0 * w1;
    double b_first = -2.0 * w1 * y[1] - 1.0;
    double a_last = -2.0 * w1;
    double b_last = 2.0 * w1 * y[1] - 1.0;

    for (std::size_t k = 1; k + 1 < n; ++k) {
        // lowest point where the derivative rises above -1
        double a_lo = a_first;
        double b_lo = b_first;
        std::size_t lo = l;
        for (; lo <= r; ++lo) {
            if (a_lo * x[lo] + b_lo > -1.0) break;
            a_lo += a[lo];
            b_lo += b[lo];
        }
        // highest point where the derivative falls below +1
        double a_hi = a_last;
        double b_hi = b_last;
        std::size_t hi = r;
        for (; hi + 1 > lo; --hi) {
            if (-a_hi * x[hi] - b_hi < 1.0) break;
            a_hi += a[hi];
            b_hi += b[hi];
        }

        lower_[k] = (-1.0 - b_lo) / a_lo;
        l = lo - 1;
        x[l] = lower_[k];
        upper_[k] = (1.0 + b_hi) / (-a_hi);
        r = hi + 1;
        x[r] = upper_[k];

        a[l] = a_lo;
        b[l] = b_lo + 1.0;
        a[r] = a_hi;
        b[r] = b_hi + 1.0;

        w1 = weight(k + 1);
        a_first = 2.0 * w1;
        b_first = -2.0 * w1 * y[k + 1] - 1.0;
        a_last = -2.0 * w1;
        b_last = 2.0 * w1 * y[k + 1] - 1.0;
    }

    // minimizer of the final cost: where its derivative crosses zero
    double a_lo = a_first;
    double b_lo = b_first;
    for (std::size_t lo = l; lo <= r; ++lo) {
        if (a_lo * x[lo] + b_lo > 0.0) break;
        a_lo += a[lo];
        b_lo += b[lo];
    }
    z[n - 1] = -b_lo / a_lo;
    for (std::size_t k = n - 1; k-- > 0;) {
        z[k] = std::clamp(z[k + 1], lower_[k], upper_[k]);
    }
}

void Tv1dSolver::solve(std::span<const double> y, double w, std::span<double> z) {
    run(y, [w](std::size_t) { return w; }, z);
}

void Tv1dSolver::solve(std::span<const double> y, std::span<const double> w, std::span<double> z) {
    run(y, [w](std::size_t i) { return w[i]; }, z);
}

std::vector<double> solve_tv1d(std::span<const double> y, double w) {
    if (!(w > 0.0)) throw Error(ErrorCode::InvalidArgument, "tv1d weight must be positive");
    std::vector<double> z(y.size());
    Tv1dSolver().solve(y, w, z);
    return z;
}

std::vector<double> solve_tv1d(std::span<const double> y, std::span<const double> w) {
    if (w.size() != y.size()) {
        throw Error(ErrorCode::LengthMismatch, "tv1d weights: " + std::to_string(w.size()) +
                                                   " vs targets: " + std::to_string(y.size()));
    }
    for (const double wi : w) {
        if (!(wi > 0.0)) throw Error(ErrorCode::InvalidArgument, "tv1d weight must be positive");
    }
    std::vector<double> z(y.size());
    Tv1dSolver().solve(y, w, z);
    return z;
}

namespace {

template <typename Weight>
bool kkt_holds(std::span<const double> y, Weight weight, std::span<const double> z, double tol) {
    if (z.size() != y.size()) {
        throw Error(ErrorCode::LengthMismatch, "candidate length " + std::to_string(z.size()) +
                                                   " vs targets " + std::to_string(y.size()));
    }
    const std::size_t n = y.size();
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        s += 2.0 * weight(r) * (z[r] - y[r]);
        if (!std::isfinite(s)) return false;
        if (r + 1 == n) return std::abs(s) <= tol;
        if (std::abs(s) > 1.0 + tol) return false;
        const double diff = z[r + 1] - z[r];
        if (diff != 0.0 && std::abs(s - (diff > 0.0 ? 1.0 : -1.0)) > tol) return false;
    }
    return true;
}

} // namespace

bool verify_tv1d_kkt(std::span<const double> y, double w, std::span<const double> z, double tol) {
    return kkt_holds(y, [w](std::size_t) { return w; }, z, tol);
}

bool verify_tv1d_kkt(std::span<const double> y, std::span<const double> w,
                     std::span<const double> z, double tol) {
    if (w.size() != y.size()) {
        throw Error(ErrorCode::LengthMismatch, "weights vs targets length");
    }
    return kkt_holds(y, [w](std::size_t i) { return w[i]; }, z, tol);
}

double tv1d_objective(std::span<const double> y, double w, std::span<const double> z) {
    double value = 0.0;
    for (std::size_t r = 0; r < y.size(); ++r) {
        value += w * (y[r] - z[r]) * (y[r] - z[r]);
        if (r + 1 < y.size()) value += std::abs(z[r + 1] - z[r]);
    }
    return value;
}

} // namespace gfl
