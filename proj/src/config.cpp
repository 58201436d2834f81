#include "fbplab/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "fbplab/errors.hpp"
#include "fbplab/initial_condition.hpp"

namespace fbp {
namespace {

// One table drives serialisation in both directions.
template <class F>
void for_each_field(ExperimentConfig& c, F&& f) {
    f("subcommand", c.subcommand);
    f("ic", c.ic);
    f("dx", c.dx);
    f("window", c.window);
    f("T", c.T);
    f("dt", c.dt);
    f("dt_out", c.dt_out);
    f("snapshots", c.snapshots);
    f("eps", c.eps);
    f("scheme", c.scheme);
    f("n", c.n);
    f("c", c.c);
    f("beta", c.beta);
    f("r", c.r);
    f("seed", c.seed);
    f("n_paths", c.n_paths);
    f("dt_mc", c.dt_mc);
    f("bridge", c.bridge);
    f("N", c.N);
    f("burn_in", c.burn_in);
    f("n_samples", c.n_samples);
    f("thin", c.thin);
    f("output_dir", c.output_dir);
    f("checks", c.checks);
}

}  // namespace

nlohmann::json to_json(const ExperimentConfig& cfg) {
    nlohmann::json j = nlohmann::json::object();
    auto copy = cfg;
    for_each_field(copy, [&](const char* key, const auto& value) { j[key] = value; });
    return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    ExperimentConfig cfg;
    std::vector<std::string> known;
    std::vector<std::string> bad;
    for_each_field(cfg, [&](const char* key, auto& value) {
        known.emplace_back(key);
        if (!j.contains(key)) return;
        try {
            j.at(key).get_to(value);
        } catch (const nlohmann::json::exception&) {
            bad.push_back(std::string(key) + " (wrong type)");
        }
    });
    for (const auto& [key, _] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) bad.push_back(key + " (unknown key)");
    }
    if (!bad.empty()) {
        std::string msg = "invalid config fields:";
        for (const auto& b : bad) msg += " " + b + ";";
        throw ValidationError(msg);
    }
    return cfg;
}

void validate(const ExperimentConfig& cfg) {
    std::vector<std::string> bad;
    auto need = [&](bool ok, const char* field) {
        if (!ok) bad.emplace_back(field);
    };
    need(std::find(kSubcommands.begin(), kSubcommands.end(), cfg.subcommand) != kSubcommands.end(), "subcommand");
    try {
        (void)parse_ic(cfg.ic);
    } catch (const Error& e) {
        bad.push_back(std::string("ic (") + e.what() + ")");
    }
    need(cfg.dx > 0.0, "dx");
    need(cfg.window >= 40.0, "window");
    need(cfg.T >= 0.0, "T");
    need(cfg.dt >= 0.0, "dt");
    need(cfg.dt_out > 0.0, "dt_out");
    need(std::all_of(cfg.snapshots.begin(), cfg.snapshots.end(), [&](double t) { return t >= 0.0 && t <= cfg.T; }),
         "snapshots");
    need(cfg.eps > 0.0 && cfg.eps < 0.5, "eps");
    need(cfg.scheme == "obstacle" || cfg.scheme == "penalized", "scheme");
    need(cfg.n >= 2, "n");
    need(cfg.c >= 1.41421356237309504880 - 1e-12, "c");
    need(cfg.beta > 0.0, "beta");
    need(!cfg.r.empty(), "r");
    need(cfg.n_paths >= 100, "n_paths");
    need(cfg.dt_mc > 0.0, "dt_mc");
    need(cfg.N >= 2, "N");
    need(cfg.burn_in == 0.0 || cfg.burn_in >= 5.0, "burn_in");
    need(cfg.n_samples > 0, "n_samples");
    need(cfg.thin > 0.0, "thin");
    if (!bad.empty()) {
        std::string msg = "invalid config fields:";
        for (const auto& b : bad) msg += " " + b + ";";
        throw ValidationError(msg);
    }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

void save_config(const std::filesystem::path& path, const ExperimentConfig& cfg) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream(path) << to_json(cfg).dump(2) << '\n';
}

}  // namespace fbp
