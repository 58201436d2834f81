#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>

#include "fbplab/csv.hpp"
#include "fbplab/grid.hpp"
#include "fbplab/quadrature.hpp"

namespace {

using namespace fbp;

TEST(Quadrature, KnownIntegrals) {
    EXPECT_NEAR(quad::integrate([](double x) { return std::exp(-x); }, 0.0, std::numeric_limits<double>::infinity()).value,
                1.0, 1e-12);
    EXPECT_NEAR(quad::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value, 2.0, 1e-13);
    const double bps[] = {0.3, -5.0, 7.0};  // the out-of-range ones are ignored
    const auto r = quad::integrate_split([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, bps);
    EXPECT_NEAR(r.value, 0.5 * (0.09 + 0.49), 1e-14);
}

TEST(Csv, RoundTripIsExactAtTwelveDigits) {
    const auto dir = std::filesystem::temp_directory_path() / "fbplab_csv_test";
    std::filesystem::create_directories(dir);
    const std::vector<double> a = {0.0, 1.0 / 3.0, -2.5e-9}, b = {1.0, 2.0, 3.0};
    io::write_csv(dir / "t.csv", {"a", "b"}, {a, b});
    const auto t = io::read_csv(dir / "t.csv");
    ASSERT_EQ(t.header.size(), 2u);
    EXPECT_NEAR(t.column("a")[1], 1.0 / 3.0, 1e-12);
    EXPECT_EQ(t.column("b")[2], 3.0);
    EXPECT_EQ(io::fmt12(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(std::stod(io::fmt_exact(0.1 + 0.2)), 0.1 + 0.2);
    EXPECT_THROW(io::write_csv(dir / "bad.csv", {"a"}, {a, b}), std::exception);
    std::filesystem::remove_all(dir);
}

TEST(Grid, CentredWindowAndShift) {
    auto g = Grid::centred(0.02, 60.0);
    EXPECT_EQ(g.nx, 3001u);
    EXPECT_NEAR(g.x0, -20.0, 1e-12);
    EXPECT_NEAR(g.right(), 40.0, 1e-9);
    g.shift(50);
    EXPECT_NEAR(g.x0, -19.0, 1e-12);
    EXPECT_NEAR(g.window_shift, 1.0, 1e-12);
    Grid tiny{0.0, 0.1, 100, 0.0};
    EXPECT_ANY_THROW(tiny.validate());
}

TEST(Grid, ProfileInterpolationAndBracketing) {
    const auto p = sample_profile(Heaviside{}, Grid::centred(0.5, 60.0));
    EXPECT_EQ(p.at(-100.0), 1.0);
    EXPECT_EQ(p.at(100.0), 0.0);
    EXPECT_NEAR(p.at(-0.25), 0.5, 1e-15);  // linear between x = -0.5 and the jump at 0
    EXPECT_NEAR(p.at(-0.75), 1.0, 1e-15);
    EXPECT_TRUE(p.brackets());
    EXPECT_EQ(p.max_increase(), 0.0);
}

TEST(Grid, FrontTraceInterpolation) {
    const auto f = linear_front(1.0, 2.0, 3.0, 0.5);
    EXPECT_EQ(f.size(), 7u);
    EXPECT_NEAR(f.at(1.25), 3.5, 1e-14);
    EXPECT_THROW(f.at(3.5), std::exception);
    FrontTrace g;
    g.push(0.0, 0.0);
    EXPECT_THROW(g.push(0.0, 1.0), std::exception);
    g.push(1.0, -1.0);
    g.push(2.0, 0.5);
    g.push(3.0, 0.7);
    EXPECT_EQ(g.monotone_from(), 1.0);
}

}  // namespace
