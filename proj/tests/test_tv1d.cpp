#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "gfl/error.hpp"
#include "gfl/tv1d.hpp"
#include "support/oracles.hpp"

namespace {

using gfl::solve_tv1d;
using gfl::verify_tv1d_kkt;

std::vector<double> heavy_tailed(std::size_t m, std::mt19937_64& rng) {
    std::student_t_distribution<double> t3(3.0);
    std::vector<double> y(m);
    for (auto& v : y) v = t3(rng);
    return y;
}

std::vector<double> clustered(std::size_t m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> level(-5.0, 5.0);
    std::normal_distribution<double> noise(0.0, 0.3);
    std::geometric_distribution<std::size_t> run(0.1);
    std::vector<double> y;
    while (y.size() < m) {
        const double mu = level(rng);
        const std::size_t len = 1 + run(rng);
        for (std::size_t i = 0; i < len && y.size() < m; ++i) y.push_back(mu + noise(rng));
    }
    return y;
}

double log_uniform(double lo, double hi, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

TEST(Tv1d, ConstantInputIsFixedPoint) {
    const std::vector<double> y(17, 3.25);
    for (const double w : {1e-3, 0.5, 1e3}) {
        for (const double v : solve_tv1d(y, w)) EXPECT_NEAR(v, 3.25, 1e-12);
    }
}

TEST(Tv1d, TwoPointSeparated) {
    const auto [a, b] = gfl::oracle::tv1d_two_point(0.0, 1.0, 10.0);
    ASSERT_NEAR(a, 0.05, 1e-15);
    ASSERT_NEAR(b, 0.95, 1e-15);
    const auto z = solve_tv1d(std::vector<double>{0.0, 1.0}, 10.0);
    EXPECT_NEAR(z[0], a, 1e-12);
    EXPECT_NEAR(z[1], b, 1e-12);
}

TEST(Tv1d, TwoPointFused) {
    const auto [a, b] = gfl::oracle::tv1d_two_point(0.0, 1.0, 0.4);
    ASSERT_DOUBLE_EQ(a, 0.5);
    ASSERT_DOUBLE_EQ(b, 0.5);
    const auto z = solve_tv1d(std::vector<double>{0.0, 1.0}, 0.4);
    EXPECT_NEAR(z[0], 0.5, 1e-12);
    EXPECT_NEAR(z[1], 0.5, 1e-12);
}

TEST(Tv1d, TwoPointAgreesWithOracleOnRandomPairs) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0.0, 3.0);
    for (int i = 0; i < 500; ++i) {
        const double y1 = g(rng);
        const double y2 = g(rng);
        const double w = log_uniform(1e-2, 1e2, rng);
        const auto [a, b] = gfl::oracle::tv1d_two_point(y1, y2, w);
        const auto z = solve_tv1d(std::vector<double>{y1, y2}, w);
        EXPECT_NEAR(z[0], a, 1e-10);
        EXPECT_NEAR(z[1], b, 1e-10);
    }
}

TEST(Tv1d, DegenerateLengths) {
    EXPECT_TRUE(solve_tv1d(std::vector<double>{}, 1.0).empty());
    EXPECT_EQ(solve_tv1d(std::vector<double>{-2.5}, 1.0), std::vector<double>{-2.5});
}

TEST(Tv1d, RejectsNonPositiveWeight) {
    EXPECT_THROW(solve_tv1d(std::vector<double>{1.0, 2.0}, 0.0), gfl::Error);
}

TEST(Tv1dKkt, AcceptsConstantSignal) {
    const std::vector<double> y(5, 1.5);
    EXPECT_TRUE(verify_tv1d_kkt(y, 0.1, y, 1e-8));
}

TEST(Tv1dKkt, RejectsUnpenalizedSolution) {
    // with small w the first subgradient 2w(z - y) = 0 is fine, but the jump
    // 0 -> 3 demands s_0 = +1 while forward substitution gives 0
    const std::vector<double> y{0.0, 3.0, 1.0, 4.0};
    EXPECT_FALSE(verify_tv1d_kkt(y, 0.01, y, 1e-8));
}

TEST(Tv1dKkt, LengthMismatchThrows) {
    const std::vector<double> y{0.0, 1.0};
    const std::vector<double> z{0.0};
    try {
        verify_tv1d_kkt(y, 1.0, z, 1e-8);
        FAIL() << "expected LengthMismatch";
    } catch (const gfl::Error& e) {
        EXPECT_EQ(e.code(), gfl::ErrorCode::LengthMismatch);
    }
}

TEST(Tv1dProperty, FuzzedInstancesPassKkt) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> len(1, 500);
    for (int i = 0; i < 1000; ++i) {
        const std::size_t m = len(rng);
        const auto y = (i % 2 == 0) ? heavy_tailed(m, rng) : clustered(m, rng);
        const double w = log_uniform(1e-3, 1e3, rng);
        const auto z = solve_tv1d(y, w);
        ASSERT_TRUE(verify_tv1d_kkt(y, w, z, 1e-8)) << "instance " << i << " m=" << m << " w=" << w;
    }
}

TEST(Tv1dProperty, BeatsRandomPerturbations) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const auto y = clustered(60, rng);
        const double w = log_uniform(1e-2, 1e2, rng);
        const auto z = solve_tv1d(y, w);
        const double best = gfl::tv1d_objective(y, w, z);
        for (int p = 0; p < 50; ++p) {
            auto zp = z;
            const double scale = std::pow(10.0, -1 - (p % 6));
            for (auto& v : zp) v += scale * g(rng);
            EXPECT_LE(best, gfl::tv1d_objective(y, w, zp) + 1e-12);
        }
    }
}

TEST(Tv1dProperty, WeightLimits) {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 20; ++i) {
        const auto y = clustered(80, rng);
        const auto sharp = solve_tv1d(y, 1e6);
        for (std::size_t r = 0; r < y.size(); ++r) EXPECT_NEAR(sharp[r], y[r], 1e-3);

        const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
        const auto flat = solve_tv1d(y, 1e-6);
        for (const double v : flat) EXPECT_NEAR(v, mean, 1e-3);
    }
}

TEST(Tv1dProperty, TranslationEquivariance) {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 50; ++i) {
        const auto y = heavy_tailed(100, rng);
        const double w = log_uniform(1e-2, 1e2, rng);
        const double c = 7.5;
        auto shifted = y;
        for (auto& v : shifted) v += c;
        const auto z = solve_tv1d(y, w);
        const auto zs = solve_tv1d(shifted, w);
        for (std::size_t r = 0; r < y.size(); ++r) EXPECT_NEAR(zs[r], z[r] + c, 1e-9);
    }
}

TEST(Tv1dWeighted, PerPositionWeightsPassKkt) {
    std::mt19937_64 rng(10);
    for (int i = 0; i < 200; ++i) {
        const auto y = clustered(1 + i, rng);
        std::vector<double> w(y.size());
        for (auto& wi : w) wi = log_uniform(1e-2, 1e2, rng);
        const auto z = solve_tv1d(y, w);
        ASSERT_TRUE(verify_tv1d_kkt(y, w, z, 1e-8)) << i;
    }
}

TEST(Tv1dWeighted, ConstantWeightsMatchScalarExactly) {
    std::mt19937_64 rng(12);
    const auto y = heavy_tailed(300, rng);
    const std::vector<double> w(y.size(), 0.37);
    EXPECT_EQ(solve_tv1d(y, w), solve_tv1d(y, 0.37));
}

TEST(Tv1dWeighted, TinyWeightsGiveWeightedMean) {
    const std::vector<double> y{1.0, 2.0, 10.0};
    const std::vector<double> w{1e-7, 1e-7, 2e-7};
    const double mean = (1.0 + 2.0 + 2.0 * 10.0) / 4.0;
    for (const double v : solve_tv1d(y, w)) EXPECT_NEAR(v, mean, 1e-6);
}

TEST(Tv1dRuntime, ScalesLinearly) {
    std::mt19937_64 rng(13);
    gfl::Tv1dSolver solver;
    std::vector<double> per_item;
    for (const std::size_t m : {1000u, 10000u, 100000u, 1000000u}) {
        const auto y = clustered(m, rng);
        std::vector<double> z(m);
        double best = 1e300;
        const int reps = m >= 1000000 ? 3 : 20;
        for (int r = 0; r < reps; ++r) {
            const auto t0 = std::chrono::steady_clock::now();
            solver.solve(y, 0.5, z);
            const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            best = std::min(best, s);
        }
        per_item.push_back(best / static_cast<double>(m));
    }
    const auto [lo, hi] = std::minmax_element(per_item.begin() + 1, per_item.end());
    // the smallest size is dominated by fixed overhead and cache warmness
    EXPECT_LE(*hi / *lo, 2.0) << "per-item times " << per_item[1] << " " << per_item[2] << " "
                              << per_item[3];
}

} // namespace
