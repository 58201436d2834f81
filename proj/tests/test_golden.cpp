#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "fbplab/csv.hpp"
#include "fbplab/runner.hpp"

// Front traces pinned from a reference run of the tool with the settings
// below; regenerate with tools/make_goldens.sh after an intended change.

namespace {

using namespace fbp;
namespace fs = std::filesystem;

struct GoldenCase {
    const char* name;
    const char* subcommand;
    const char* ic;
};

ExperimentConfig golden_config(const GoldenCase& g) {
    ExperimentConfig cfg;
    cfg.subcommand = g.subcommand;
    cfg.ic = g.ic;
    cfg.beta = 2.0;
    cfg.T = 5.0;
    cfg.dx = 0.05;
    cfg.window = 40.0;
    cfg.dt_out = 0.1;
    cfg.output_dir = g.name;
    return cfg;
}

class Golden : public ::testing::TestWithParam<GoldenCase> {};

TEST_P(Golden, FrontTraceMatches) {
    const auto& g = GetParam();
    const auto root = fs::temp_directory_path() / "fbplab_golden";
    std::ostringstream log;
    const auto out = run(golden_config(g), root, log);
    const auto got = io::read_csv(out.directory / "front.csv");
    const auto want = io::read_csv(fs::path(FBPLAB_GOLDEN_DIR) / (std::string(g.name) + ".csv"));
    ASSERT_EQ(got.header, want.header);
    const auto& t1 = got.column("t");
    const auto& t2 = want.column("t");
    ASSERT_EQ(t1.size(), t2.size());
    const auto& L1 = got.column("L");
    const auto& L2 = want.column("L");
    for (std::size_t i = 0; i < t1.size(); ++i) {
        EXPECT_NEAR(t1[i], t2[i], 1e-9);
        EXPECT_NEAR(L1[i], L2[i], 1e-9) << "t=" << t1[i];
    }
    fs::remove_all(out.directory);
}

INSTANTIATE_TEST_SUITE_P(Fronts, Golden,
                         ::testing::Values(GoldenCase{"heaviside", "solve", "heaviside"},
                                           GoldenCase{"wave_sqrt2", "solve", "wave:1.4142135623730951"},
                                           GoldenCase{"beta2_pushed", "beta-solve", "heaviside"}),
                         [](const auto& info) { return std::string(info.param.name); });

}  // namespace
