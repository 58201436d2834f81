#include <gtest/gtest.h>

#include <cmath>

#include "fbplab/errors.hpp"
#include "fbplab/feynman_kac.hpp"
#include "fbplab/kernels.hpp"
#include "fbplab/stochastic.hpp"
#include "fbplab/waves.hpp"

namespace {

using namespace fbp;
using mc::Exec;
constexpr double kSqrt2 = waves::kSqrt2;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Oracle: Brownian motion from x > 0 stays above 0 up to time t with
// probability 1 - 2 Phi(-x / sqrt t) (reflection principle); average over
// the minimal-wave density 2x e^{-sqrt2 x} by Simpson.
double survival_constant_barrier(double t) {
    const int n = 20000;
    const double a = 0.0, b = 40.0, h = (b - a) / n;
    auto f = [t](double x) { return 2.0 * x * std::exp(-kSqrt2 * x) * (1.0 - 2.0 * normal_cdf(-x / std::sqrt(t))); };
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

TEST(Kernels, SerialAndParallelBitIdentical) {
    const auto front = linear_front(0.0, kSqrt2, 1.0, 0.01);
    const double cps[] = {0.5, 1.0};
    for (std::uint64_t seed : {1u, 77u}) {
        const auto a = mc::killed_paths(Wave{kSqrt2}, front, cps, 2500, 1e-3, true, seed, Exec::Serial);
        const auto b = mc::killed_paths(Wave{kSqrt2}, front, cps, 2500, 1e-3, true, seed, Exec::Parallel);
        EXPECT_EQ(a.alive, b.alive);
        EXPECT_EQ(a.final_positions, b.final_positions);
        const auto c = mc::feynman_kac_paths(Heaviside{}, front, 1.0, 2.0, 2500, 1e-3, seed, Exec::Serial);
        const auto d = mc::feynman_kac_paths(Heaviside{}, front, 1.0, 2.0, 2500, 1e-3, seed, Exec::Parallel);
        EXPECT_EQ(c.mean, d.mean);
        EXPECT_EQ(c.std_error, d.std_error);
    }
}

TEST(Kernels, RemoteBarrierKillsNothing) {
    const auto front = linear_front(-1000.0, 0.0, 1.0, 0.1);
    const double cps[] = {1.0};
    const auto r = mc::killed_paths(PowerExpTail{1.0, 0.0, 1.0}, front, cps, 3000, 0.01, true, 5, Exec::Serial);
    EXPECT_EQ(r.alive[0], 3000u);
    EXPECT_EQ(r.final_positions.size(), 3000u);
}

TEST(KilledBM, ConstantBarrierMatchesReflectionPrinciple) {
    const auto front = linear_front(0.0, 0.0, 1.0, 0.01);
    const double times[] = {0.25, 1.0};
    const auto s = stoch::killed_bm_survival(Wave{kSqrt2}, front, times, 40000, 1e-3, 3);
    for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_NEAR(s.S[k], survival_constant_barrier(times[k]), 4.0 * s.std_error[k]) << "t=" << times[k];
    }
}

TEST(KilledBM, BridgeCorrectionRemovesDiscreteMonitoringBias) {
    const auto front = linear_front(0.0, 0.0, 1.0, 0.01);
    const double times[] = {1.0};
    const double exact = survival_constant_barrier(1.0);
    const auto with = stoch::killed_bm_survival(Wave{kSqrt2}, front, times, 40000, 0.02, 8, true);
    const auto without = stoch::killed_bm_survival(Wave{kSqrt2}, front, times, 40000, 0.02, 8, false);
    // without the correction crossings between samples are missed: survival is too high
    EXPECT_GT(without.S[0] - exact, 5.0 * without.std_error[0]);
    EXPECT_NEAR(with.S[0], exact, 4.0 * with.std_error[0]);
}

TEST(KilledBM, ConditionalLawNeedsSurvivors) {
    const auto front = linear_front(0.0, 50.0, 1.0, 0.01);  // runs away from every path
    const double xs[] = {1.0};
    EXPECT_THROW(stoch::killed_bm_conditional_ccdf(Wave{kSqrt2}, front, 1.0, 1000, 1e-3, 1, xs), PrecisionError);
}

TEST(FeynmanKac, ExactAtTimeZero) {
    const auto front = linear_front(0.0, kSqrt2, 1.0, 0.01);
    const auto e = feynman_kac_check(Wave{kSqrt2}, front, 0.0, 0.7, 100, 1e-3, 1);
    EXPECT_EQ(e.mean, waves::Pi_c(kSqrt2, 0.7));
    EXPECT_EQ(e.std_error, 0.0);
    EXPECT_THROW(feynman_kac_check(Wave{kSqrt2}, front, 0.5, 0.7, 10, 1e-3, 1), ParameterError);
}

TEST(FeynmanKac, ReproducesTravellingWave) {
    const double t = 1.0;
    const auto front = linear_front(0.0, kSqrt2, t, 0.001);
    for (double y : {-0.5, 0.3, 1.5}) {
        const double x = kSqrt2 * t + y;
        const auto e = feynman_kac_check(Wave{kSqrt2}, front, t, x, 20000, 1e-3, 17);
        EXPECT_NEAR(e.mean, waves::Pi_c(kSqrt2, y), 4.0 * e.std_error + 3e-3) << "y=" << y;
    }
}

// Property: Monte Carlo is reproducible for a fixed seed and varies with it.
TEST(MonteCarloProperty, SeedDeterminism) {
    const auto front = linear_front(0.0, kSqrt2, 1.0, 0.01);
    const double times[] = {1.0};
    const auto a = stoch::killed_bm_survival(Wave{kSqrt2}, front, times, 3000, 1e-3, 5);
    const auto b = stoch::killed_bm_survival(Wave{kSqrt2}, front, times, 3000, 1e-3, 5);
    const auto c = stoch::killed_bm_survival(Wave{kSqrt2}, front, times, 3000, 1e-3, 6);
    EXPECT_EQ(a.S, b.S);
    EXPECT_NE(a.S, c.S);
}

TEST(Nbbm, PopulationAndDeterminism) {
    const double times[] = {0.5, 1.0};
    const auto a = stoch::nbbm_run(Wave{kSqrt2}, 200, times, 9);
    const auto b = stoch::nbbm_run(Wave{kSqrt2}, 200, times, 9);
    ASSERT_EQ(a.size(), 2u);
    EXPECT_EQ(a[1].positions.size(), 200u);
    EXPECT_EQ(a[1].positions, b[1].positions);
    EXPECT_GT(a[1].n_branch_events, a[0].n_branch_events);
    const std::uint64_t seeds[] = {9, 10};
    const auto reps = stoch::nbbm_replicas(Wave{kSqrt2}, 200, times, seeds, Exec::Parallel);
    EXPECT_EQ(reps[0][1].positions, a[1].positions);
}

TEST(Nbbm, BranchingRateIsN) {
    const double times[] = {5.0};
    const auto e = stoch::nbbm_run(Heaviside{}, 100, times, 4);
    // Poisson(500): within 4 standard deviations
    EXPECT_NEAR(static_cast<double>(e[0].n_branch_events), 500.0, 4.0 * std::sqrt(500.0));
}

TEST(Nbbm, EmpiricalCcdfAndKs) {
    const std::vector<double> pos = {0.0, 1.0, 2.0, 3.0};
    const std::vector<double> xs = {-1.0, 1.0, 2.5, 4.0};
    const auto F = stoch::empirical_ccdf(pos, xs);
    EXPECT_EQ(F, (std::vector<double>{1.0, 0.75, 0.25, 0.0}));
    // against the constant 0.5 the worst gap is 0.5 (just left of the first point)
    EXPECT_NEAR(stoch::ks_distance(pos, [](double) { return 0.5; }), 0.5, 1e-15);
}

// Property: the front of the particle system tracks the free boundary; its
// minimum is within a few tenths of sqrt(2) t for moderate N.
TEST(NbbmProperty, MinimumTracksMinimalSpeed) {
    const double times[] = {3.0};
    for (std::uint64_t seed : {1u, 2u}) {
        const auto e = stoch::nbbm_run(Wave{kSqrt2}, 3000, times, seed);
        const double m = *std::min_element(e[0].positions.begin(), e[0].positions.end());
        EXPECT_NEAR(m, kSqrt2 * 3.0, 0.5);
    }
}

}  // namespace
