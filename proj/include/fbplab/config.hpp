#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace fbp {

/// Everything needed to reproduce one run of the command-line tool.
struct ExperimentConfig {
    std::string subcommand = "solve";
    std::string ic = "heaviside";
    // grid
    double dx = 0.02;
    double window = 60.0;
    // time stepping
    double T = 10.0;
    double dt = 0.0;  // 0: automatic
    double dt_out = 0.01;
    std::vector<double> snapshots;
    double eps = 1e-6;
    std::string scheme = "obstacle";  // obstacle | penalized
    int n = 128;                      // penalization exponent
    // waves / beta problem
    double c = 1.41421356237309504880;
    double beta = 2.0;
    // Brunet-Derrida
    std::vector<double> r = {0.5};
    // Monte Carlo
    std::uint64_t seed = 1;
    std::size_t n_paths = 100000;
    double dt_mc = 1e-3;
    bool bridge = true;
    std::size_t N = 1000;
    double burn_in = 0.0;  // > 0 adds the stationary N-BBM run
    std::size_t n_samples = 200;
    double thin = 0.5;
    // outputs
    std::string output_dir;           // subdirectory of the output root; default = subcommand
    std::vector<std::string> checks;  // empty: every check of the subcommand

    bool operator==(const ExperimentConfig&) const = default;
};

inline const std::vector<std::string> kSubcommands = {"waves",   "solve", "beta-solve", "bd-check",
                                                      "asymptotics", "nbbm", "killed-bm", "all-acceptance"};

nlohmann::json to_json(const ExperimentConfig& cfg);

/// Strict parse: unknown keys and ill-typed values are rejected. Missing
/// keys keep their defaults.
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Throws ValidationError naming every offending field.
void validate(const ExperimentConfig& cfg);

ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const ExperimentConfig& cfg);

}  // namespace fbp
