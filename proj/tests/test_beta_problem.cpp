#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "json.hpp"
#include "fbplab/beta_problem.hpp"
#include "fbplab/errors.hpp"
#include "fbplab/waves.hpp"

namespace {

using namespace fbp;
constexpr double kSqrt2 = waves::kSqrt2;

TEST(BetaMap, HeavisideClosedForm) {
    for (double beta : {0.5, 1.0, 2.0, 3.0}) {
        const auto U0 = beta::map_V0_to_U0(Heaviside{}, beta);
        for (double x : {-1.0, 0.0, 0.3, 2.0, 7.0}) {
            const double exact = x <= 0.0 ? 1.0 : std::exp(-2.0 * x / beta);
            EXPECT_NEAR(eval(U0, x), exact, 1e-14);
            EXPECT_NEAR(beta::map_V0_to_U0_at(Heaviside{}, beta, x), exact, 1e-10);
        }
    }
}

TEST(BetaMap, ExponentialTailGivesTwoRate) {
    const InitialCondition V0 = PowerExpTail{1.0, 0.0, 3.0};
    const auto U0 = beta::map_V0_to_U0(V0, 2.0);
    ASSERT_TRUE(std::holds_alternative<TwoRate>(U0));
    for (double x : {0.1, 0.5, 1.0, 4.0}) {
        EXPECT_NEAR(eval(U0, x), beta::map_V0_to_U0_at(V0, 2.0, x), 1e-10);
    }
}

TEST(BetaMap, BetaWaveGoesToWave) {
    for (double beta : {1.0, 2.0, 3.0}) {
        const double c = waves::c_beta_min(beta);
        for (double x : {0.2, 1.0, 3.0}) {
            EXPECT_NEAR(beta::map_V0_to_U0_at(BetaWave{beta}, beta, x), waves::Pi_c(c, x), 1e-8)
                << "beta=" << beta << " x=" << x;
        }
    }
}

TEST(BetaMap, TabulatedAgreesWithPointwise) {
    const InitialCondition V0 = PowerExpTail{2.0, -1.0, 2.5};
    const auto U0 = beta::map_V0_to_U0(V0, 1.5);
    ASSERT_TRUE(std::holds_alternative<Tabulated>(U0));
    for (double x : {0.5, 1.0, 2.0, 5.0}) {
        EXPECT_NEAR(eval(U0, x), beta::map_V0_to_U0_at(V0, 1.5, x), 1e-6) << x;
    }
}

TEST(BetaMap, UToVOnWaveGivesBetaWave) {
    const double c = 1.7;
    const Grid g = Grid::centred(0.01, 40.0);
    const auto U = sample_profile(Wave{c}, g);
    for (double beta : {0.8, 2.0}) {
        const auto V = beta::map_U_to_V(U, beta, 0.0);
        double worst = 0.0;
        for (std::size_t i = 0; i < V.values.size(); ++i) {
            worst = std::max(worst, std::abs(V.values[i] - waves::Pi_beta_c(beta, c, V.x(i))));
        }
        EXPECT_LT(worst, 1e-7) << beta;
    }
}

TEST(BetaMap, Errors) {
    EXPECT_THROW(beta::map_V0_to_U0(Heaviside{}, 0.0), ParameterError);
    EXPECT_THROW(beta::validate({-1.0, Heaviside{}}), ParameterError);
    Profile V;
    V.grid = Grid::centred(0.1, 40.0);
    V.values.assign(V.grid.nx, 0.0);
    EXPECT_THROW(beta::map_V_to_U(V, 1.0), WindowError);
}

TEST(BetaIntegral, ClosedForms) {
    EXPECT_DOUBLE_EQ(beta::I_beta(Heaviside{}, 1.0), 0.0);
    EXPECT_NEAR(beta::I_beta(Heaviside{}, 2.0), 1.0, 1e-14);
    // beta < sqrt2: int_0^inf x e^{sqrt2 x} e^{-3x} dx = (3 - sqrt2)^-2
    EXPECT_NEAR(beta::I_beta(PowerExpTail{1.0, 0.0, 3.0}, 1.0), 1.0 / std::pow(3.0 - kSqrt2, 2), 1e-9);
    // beta = 2: int_{-inf}^0 e^x + int_0^inf e^{-x} = 2
    EXPECT_NEAR(beta::I_beta(PowerExpTail{1.0, 0.0, 2.0}, 2.0), 2.0, 1e-9);
    EXPECT_TRUE(std::isinf(beta::I_beta(PowerExpTail{1.0, 0.0, 1.0}, 2.0)));
    EXPECT_TRUE(std::isinf(beta::I_beta(PowerExpTail{1.0, -2.0, kSqrt2}, 1.0)));
    EXPECT_TRUE(std::isfinite(beta::I_beta(PowerExpTail{1.0, -3.0, kSqrt2}, 1.0)));
}

TEST(BetaRegimes, Classification) {
    using asym::Regime;
    EXPECT_EQ(beta::front_prediction_beta({1.0, Heaviside{}}).regime, Regime::FiniteMassPulled);
    EXPECT_EQ(beta::front_prediction_beta({1.0, PowerExpTail{1.0, -1.0, kSqrt2}}).regime,
              Regime::InfiniteMassPulled);
    EXPECT_EQ(beta::front_prediction_beta({kSqrt2, Heaviside{}}).regime, Regime::PushmiPullyu);
    const auto pushed = beta::front_prediction_beta({2.0, Heaviside{}});
    EXPECT_EQ(pushed.regime, Regime::Pushed);
    EXPECT_NEAR(pushed.linear, 1.5, 1e-12);
    // (beta/2)(log((2/beta) I) + log(beta^2 - 2) - 2 log beta) with I = 1
    EXPECT_NEAR(*pushed.constant, std::log(1.0) + std::log(2.0) - 2.0 * std::log(2.0), 1e-12);
    const auto divergent = beta::front_prediction_beta({2.0, PowerExpTail{1.0, 0.0, 1.0}});
    EXPECT_FALSE(divergent.constant.has_value());
    EXPECT_FALSE(divergent.note.empty());
    EXPECT_THROW(beta::front_prediction_beta({2.0, PowerExpTail{1.0, 0.0, 0.5}}), RegimeError);
    EXPECT_THROW(beta::m_pushed({1.0, Heaviside{}}, 10.0), RegimeError);
}

TEST(BetaRegimes, ReportJson) {
    const auto path = std::filesystem::temp_directory_path() / "fbplab_regime_test.json";
    beta::write_regime_report(path, {2.0, Heaviside{}});
    nlohmann::json j;
    std::ifstream(path) >> j;
    EXPECT_EQ(j["regime"], asym::regime_name(asym::Regime::Pushed));
    EXPECT_NEAR(j["c_min"].get<double>(), 1.5, 1e-12);
    EXPECT_NEAR(j["I_beta"].get<double>(), 1.0, 1e-12);
    std::filesystem::remove(path);
}

TEST(BetaSolve, PushedFrontSpeedAndSlope) {
    solver::SolveOptions opt;
    opt.T = 8.0;
    opt.dt_out = 0.1;
    const auto res = beta::solve_beta({2.0, Heaviside{}}, Grid::centred(0.02, 50.0), opt);
    const double L = res.front.positions.back();
    const double L4 = res.front.at(4.0);
    EXPECT_NEAR((L - L4) / 4.0, 1.5, 0.02);
    EXPECT_LT(res.V_final.max_increase(), 1e-6);
    const auto slope = solver::boundary_slope_diagnostics(res.U_final, L);
    // V_x(L+) = U_x + (beta/2) U_xx = 0 + (beta/2)(-2) = -beta
    EXPECT_NEAR(slope.first + 0.5 * 2.0 * slope.second, -2.0, 0.05);
}

// Property: U -> V -> U is the identity on smooth monotone profiles with a
// flat contact region.
TEST(BetaMapProperty, RoundTrip) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uc(kSqrt2, 3.0), ub(0.3, 3.0);
    const Grid g = Grid::centred(0.01, 40.0);
    for (int trial = 0; trial < 6; ++trial) {
        const double c = uc(rng), beta = ub(rng);
        const auto U = sample_profile(Wave{c}, g);
        const auto back = beta::map_V_to_U(beta::map_U_to_V(U, beta, 0.0), beta, 0.0);
        double worst = 0.0;
        for (std::size_t i = 0; i < U.values.size(); ++i) worst = std::max(worst, std::abs(U.values[i] - back.values[i]));
        EXPECT_LT(worst, 1e-6) << "c=" << c << " beta=" << beta;
    }
}

// Property: V0 -> U0 produces valid (monotone, [0,1]) data for random
// power-exponential V0.
TEST(BetaMapProperty, MappedDataIsValid) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ubeta(0.5, 3.0), unu(-2.0, 0.0), ulam(2.0, 4.0);
    for (int trial = 0; trial < 5; ++trial) {
        const double beta = ubeta(rng);
        const InitialCondition V0 = PowerExpTail{3.0, unu(rng), ulam(rng)};
        const auto U0 = beta::map_V0_to_U0(V0, beta);
        EXPECT_NO_THROW(validate(U0));
        double prev = 1.0;
        for (double x = -1.0; x < 10.0; x += 0.05) {
            const double u = eval(U0, x);
            EXPECT_LE(u, prev + 1e-14);
            EXPECT_GE(u, 0.0);
            prev = u;
        }
    }
}

}  // namespace
