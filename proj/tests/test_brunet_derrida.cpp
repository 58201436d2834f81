#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "fbplab/brunet_derrida.hpp"
#include "fbplab/csv.hpp"
#include "fbplab/errors.hpp"
#include "fbplab/solver.hpp"
#include "fbplab/waves.hpp"

namespace {

using namespace fbp;
constexpr double kSqrt2 = waves::kSqrt2;

TEST(BrunetDerrida, LhsClosedForms) {
    // int_0^inf e^{-x} e^{r x} dx = 1/(1-r)
    for (double r : {-1.0, 0.5, 0.9}) EXPECT_NEAR(bd::bd_lhs(PowerExpTail{1.0, 0.0, 1.0}, r), 1.0 / (1.0 - r), 1e-10);
    EXPECT_EQ(bd::bd_lhs(Heaviside{}, 0.7), 0.0);
    // minimal wave: 1/(sqrt2 - r) + sqrt2/(sqrt2 - r)^2
    for (double r : {-0.5, 1.0}) {
        const double k = kSqrt2 - r;
        EXPECT_NEAR(bd::bd_lhs(Wave{kSqrt2}, r), 1.0 / k + kSqrt2 / (k * k), 1e-9);
    }
    EXPECT_NEAR(bd::bd_lhs(Wave{kSqrt2}, 1.0), (2.0 * kSqrt2 - 1.0) / ((1.0 - kSqrt2) * (1.0 - kSqrt2)), 1e-9);
}

TEST(BrunetDerrida, DivergentMoments) {
    EXPECT_TRUE(std::isinf(bd::bd_lhs(PowerExpTail{1.0, 0.0, 1.0}, 1.0)));
    EXPECT_TRUE(std::isinf(bd::bd_lhs(PowerExpTail{1.0, 0.0, 1.0}, 1.2)));
    // x^-2 e^{-x} e^{x} is integrable at infinity; x^-1 is not
    EXPECT_FALSE(std::isinf(bd::bd_lhs(PowerExpTail{1.0, -2.0, 1.0}, 1.0)));
    EXPECT_TRUE(std::isinf(bd::bd_lhs(PowerExpTail{1.0, -1.0, 1.0}, 1.0)));
}

TEST(BrunetDerrida, RejectsBadRates) {
    EXPECT_THROW(bd::check_r(0.0), DomainError);
    EXPECT_THROW(bd::check_r(kSqrt2), DomainError);
    EXPECT_THROW(bd::check_r(std::nan("")), DomainError);
    EXPECT_NO_THROW(bd::check_r(-3.0));
}

TEST(BrunetDerrida, RhsOfLinearFront) {
    // L_t = v t: -1/r + 1/(r (1 + r^2/2 - r v))
    for (double r : {-1.0, 0.5, 1.0}) {
        for (double v : {0.0, 1.0, kSqrt2}) {
            const double kappa = 1.0 + 0.5 * r * r - r * v;
            if (kappa <= 0.0) continue;
            const auto res = bd::bd_rhs(linear_front(0.0, v, 40.0, 0.05), 0.0, r, v);
            EXPECT_NEAR(res.value, -1.0 / r + 1.0 / (r * kappa), 1e-10) << "r=" << r << " v=" << v;
        }
    }
    const auto div = bd::bd_rhs(linear_front(0.0, 2.0, 10.0, 0.1), 0.0, 1.0, 2.0);  // 1.5 - 2 < 0
    EXPECT_TRUE(std::isinf(div.value));
}

TEST(BrunetDerrida, SpeedLaw) {
    EXPECT_DOUBLE_EQ(bd::speed_from_r0(1.0), 1.5);
    EXPECT_NEAR(bd::speed_from_r0(kSqrt2), kSqrt2, 1e-15);
    EXPECT_TRUE(std::isinf(bd::speed_from_r0(0.0)));
    EXPECT_THROW(bd::speed_from_r0(2.0), DomainError);
    EXPECT_DOUBLE_EQ(bd::r0_of(PowerExpTail{1.0, 0.0, 1.0}), 1.0);
    EXPECT_DOUBLE_EQ(bd::r0_of(Heaviside{}), kSqrt2);
    EXPECT_DOUBLE_EQ(bd::r0_of(PowerExpTail{1.0, 0.0, 0.3}), 0.3);
}

TEST(BrunetDerrida, IdentityHoldsOnSolverFront) {
    const InitialCondition ic = TwoRate{1.0, 2.0};
    solver::SolveOptions o;
    o.T = 25.0;
    const auto res = solver::solve_obstacle(ic, Grid::centred(0.04, 50.0), o);
    for (double r : {-1.0, 0.5}) {
        const auto rep = bd::bd_check(ic, res.front, r);
        EXPECT_TRUE(rep.pass) << "r=" << r << " rel_err=" << rep.rel_err;
        EXPECT_LT(rep.rel_err, 0.02);
    }
}

// Property: random linear fronts, random admissible r; closed form vs the
// exact-exponential trapezoid.
TEST(BrunetDerridaProperty, RhsLinearFrontsRandom) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> ur(-2.0, 1.4), uv(0.0, 1.5), uL(-2.0, 2.0);
    int checked = 0;
    while (checked < 50) {
        const double r = ur(rng), v = uv(rng), L0 = uL(rng);
        const double kappa = 1.0 + 0.5 * r * r - r * v;
        if (std::abs(r) < 0.05 || kappa < 0.1) continue;
        const auto res = bd::bd_rhs(linear_front(L0, v, 30.0, 0.1), L0, r, v);
        const double exact = (-1.0 + 1.0 / kappa) * std::exp(r * L0) / r;
        EXPECT_NEAR(res.value, exact, 1e-9 * std::max(1.0, std::abs(exact)));
        ++checked;
    }
}

TEST(BrunetDerrida, ReportCsv) {
    const auto dir = std::filesystem::temp_directory_path() / "fbplab_bd_test";
    bd::write_report(dir / "r.csv", {bd::BDReport{0.5, 2.0, 2.01, 0.005, 0.0, 0.0, true}});
    const auto t = io::read_csv(dir / "r.csv");
    EXPECT_EQ(t.header, (std::vector<std::string>{"r", "lhs", "rhs", "rel_err", "tail_fraction", "verdict"}));
    EXPECT_EQ(t.column("verdict")[0], 1.0);
    std::filesystem::remove_all(dir);
}

// U0 = 1{x<0} has lhs = 0: the time integral of the front must balance the
// boundary term exactly. The front leaves the origin like -sqrt(t), so the
// rhs converges only at first order in dx; check the trend.
TEST(BrunetDerrida, HeavisideDegenerateCase) {
    solver::SolveOptions o;
    o.T = 20.0;
    const auto coarse = solver::solve_obstacle(Heaviside{}, Grid::centred(0.04, 50.0), o);
    const auto fine = solver::solve_obstacle(Heaviside{}, Grid::centred(0.02, 50.0), o);
    for (double r : {-1.0, 0.4}) {
        const double e1 = std::abs(bd::bd_check(Heaviside{}, coarse.front, r).rhs);
        const double e2 = std::abs(bd::bd_check(Heaviside{}, fine.front, r).rhs);
        EXPECT_LT(e2, 0.01) << "r=" << r;
        EXPECT_LT(e2, 0.6 * e1) << "r=" << r;
    }
}

}  // namespace
