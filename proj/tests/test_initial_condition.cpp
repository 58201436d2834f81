#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fbplab/errors.hpp"
#include "fbplab/initial_condition.hpp"
#include "fbplab/waves.hpp"

namespace {

using namespace fbp;
constexpr double kSqrt2 = waves::kSqrt2;

TEST(InitialCondition, HeavisideValues) {
    const InitialCondition ic = Heaviside{};
    EXPECT_EQ(eval(ic, -0.5), 1.0);
    EXPECT_EQ(eval(ic, 0.0), 0.0);
    EXPECT_EQ(left_edge(ic), 0.0);
    EXPECT_TRUE(std::isinf(tail_rate(ic)));
    std::mt19937_64 rng(1);
    EXPECT_EQ(sample(ic, rng), 0.0);
}

TEST(InitialCondition, PowerExpRootAndClamp) {
    // A = e^2, nu = 0, lam = 1: root at x = 2
    const PowerExpTail p{std::exp(2.0), 0.0, 1.0};
    EXPECT_NEAR(power_exp_root(p), 2.0, 1e-14);
    EXPECT_EQ(eval(p, 1.0), 1.0);
    EXPECT_NEAR(eval(p, 3.0), std::exp(-1.0), 1e-15);
    // nu < 0: x^-1 e^{-x} = 1 at the omega constant W(1) = 0.567143...
    const PowerExpTail q{1.0, -1.0, 1.0};
    EXPECT_NEAR(power_exp_root(q), 0.5671432904097838, 1e-12);
    EXPECT_NEAR(left_edge(q), 0.5671432904097838, 1e-12);
}

TEST(InitialCondition, PowerExpWithoutUnitLevelRejected) {
    // x e^{-x} peaks at 1/e < 1: never equals 1
    EXPECT_THROW(validate(PowerExpTail{1.0, 1.0, 1.0}), ValidationError);
    EXPECT_THROW(validate(PowerExpTail{-1.0, 0.0, 1.0}), ValidationError);
    EXPECT_THROW(validate(Wave{1.0}), ValidationError);
    EXPECT_THROW(validate(Tabulated{{0.0, 1.0}, {0.5, 0.0}}), ValidationError);
    EXPECT_THROW(validate(Tabulated{{0.0, 1.0, 2.0}, {1.0, 0.2, 0.4}}), ValidationError);
}

TEST(InitialCondition, TwoRateMatchesDefinition) {
    const TwoRate r{1.0, 3.0};
    for (double x : {0.1, 1.0, 5.0}) {
        EXPECT_NEAR(eval(r, x), (3.0 * std::exp(-x) - std::exp(-3.0 * x)) / 2.0, 1e-15);
    }
    EXPECT_NEAR(eval(TwoRate{2.0, 2.0}, 0.5), 2.0 * std::exp(-1.0), 1e-15);
    // equal rates sqrt 2 reproduce the minimal wave
    EXPECT_NEAR(eval(TwoRate{kSqrt2, kSqrt2}, 1.3), waves::Pi_c(kSqrt2, 1.3), 1e-15);
}

TEST(InitialCondition, LogEvalAgreesAndExtendsTail) {
    const std::vector<InitialCondition> ics = {PowerExpTail{2.0, -1.5, 1.2}, Wave{kSqrt2}, Wave{2.0},
                                               BetaWave{0.7}, BetaWave{2.0}, TwoRate{0.5, 1.5}};
    for (const auto& ic : ics) {
        for (double x : {0.5, 3.0, 20.0}) {
            EXPECT_NEAR(log_eval(ic, x), std::log(eval(ic, x)), 1e-10) << ic_name(ic) << " x=" << x;
        }
        // far beyond underflow of eval the log stays finite
        EXPECT_TRUE(std::isfinite(log_eval(ic, 2000.0))) << ic_name(ic);
    }
}

TEST(InitialCondition, TailDescriptors) {
    EXPECT_DOUBLE_EQ(tail_rate(PowerExpTail{1, -2, kSqrt2}), kSqrt2);
    EXPECT_DOUBLE_EQ(tail_power(PowerExpTail{1, -2, kSqrt2}), -2.0);
    EXPECT_DOUBLE_EQ(tail_rate(Wave{1.5}), 1.0);
    EXPECT_DOUBLE_EQ(tail_power(Wave{kSqrt2}), 1.0);
    EXPECT_DOUBLE_EQ(tail_rate(BetaWave{2.0}), 2.0);
    EXPECT_DOUBLE_EQ(tail_rate(BetaWave{1.0}), kSqrt2);
}

TEST(InitialCondition, ParseAndFormatRoundTrip) {
    for (const std::string s : {"heaviside", "powexp:1,0,1", "wave:1.5", "betawave:2", "tworate:1,2"}) {
        const auto ic = parse_ic(s);
        EXPECT_EQ(format_ic(parse_ic(format_ic(ic))), format_ic(ic)) << s;
    }
    EXPECT_EQ(ic_name(parse_ic("powexp:1,-2,1.4142135623730951")), "powexp");
    EXPECT_THROW(parse_ic("gaussian"), ValidationError);
    EXPECT_THROW(parse_ic("powexp:1,2"), ValidationError);
}

TEST(InitialCondition, RightExtent) {
    const InitialCondition ic = PowerExpTail{1.0, 0.0, 1.0};
    EXPECT_NEAR(right_extent(ic, 1e-10), 10.0 * std::log(10.0), 1e-9);
}

// Property: samples of u0 = -dU0 reproduce U0 as their CCDF.
TEST(InitialConditionProperty, SamplerMatchesCcdf) {
    const std::vector<InitialCondition> ics = {Wave{kSqrt2}, PowerExpTail{1.0, 0.0, 1.0}, BetaWave{2.0},
                                               TwoRate{1.0, 3.0}};
    for (const auto& ic : ics) {
        std::mt19937_64 rng(42);
        const int n = 40000;
        std::vector<double> xs(n);
        for (auto& x : xs) x = sample(ic, rng);
        for (double q : {0.2, 1.0, 2.5}) {
            const double frac = static_cast<double>(std::count_if(xs.begin(), xs.end(), [q](double x) { return x >= q; })) / n;
            const double se = std::sqrt(eval(ic, q) * (1.0 - eval(ic, q)) / n);
            EXPECT_NEAR(frac, eval(ic, q), 5.0 * se + 1e-12) << ic_name(ic) << " q=" << q;
        }
        EXPECT_GE(*std::min_element(xs.begin(), xs.end()), left_edge(ic));
    }
}

// Property: every admissible variant is non-increasing with values in [0,1].
TEST(InitialConditionProperty, MonotoneUnitRange) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> uA(0.5, 5.0), unu(-3.0, 0.0), ulam(0.3, 3.0);
    for (int k = 0; k < 100; ++k) {
        const InitialCondition ic = PowerExpTail{uA(rng), unu(rng), ulam(rng)};
        ASSERT_NO_THROW(validate(ic));
        double prev = 1.0;
        for (double x = left_edge(ic) - 1.0; x < 30.0; x += 0.05) {
            const double v = eval(ic, x);
            EXPECT_LE(v, prev + 1e-15);
            EXPECT_GE(v, 0.0);
            prev = v;
        }
    }
}

}  // namespace
