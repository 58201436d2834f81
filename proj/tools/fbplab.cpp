// Command-line front end: one subcommand per pipeline. A JSON config given
// with --config supplies the base settings; any flag on the command line
// overrides the corresponding field.

#include <functional>
#include <iostream>
#include <vector>

#include "CLI11.hpp"
#include "fbplab/config.hpp"
#include "fbplab/errors.hpp"
#include "fbplab/runner.hpp"

namespace {

struct Override {
    CLI::Option* option;
    std::function<void(fbp::ExperimentConfig&)> apply;
};

template <class T>
void add(CLI::App& app, std::vector<Override>& table, fbp::ExperimentConfig& flags, const std::string& name,
         T fbp::ExperimentConfig::*field, const std::string& help) {
    CLI::Option* opt = app.add_option(name, flags.*field, help);
    if constexpr (CLI::detail::is_mutable_container<T>::value) opt->delimiter(',');
    table.push_back({opt, [&flags, field](fbp::ExperimentConfig& cfg) { cfg.*field = flags.*field; }});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Free boundary problem laboratory"};
    app.require_subcommand(1);
    app.fallthrough();

    fbp::ExperimentConfig flags;
    std::vector<Override> table;
    std::string config_path, out_root;
    bool no_bridge = false;
    app.add_option("--config", config_path, "JSON config file (flags override it)")->check(CLI::ExistingFile);
    app.add_option("--out", out_root, "output root (default: $FBPLAB_OUT or ./out)");

    add(app, table, flags, "--ic", &fbp::ExperimentConfig::ic,
        "initial condition: heaviside | wave:c | betawave:beta | powexp:A,nu,lambda | tworate:a,b | table:path.csv");
    add(app, table, flags, "--dx", &fbp::ExperimentConfig::dx, "grid spacing");
    add(app, table, flags, "--window", &fbp::ExperimentConfig::window, "window length");
    add(app, table, flags, "--T", &fbp::ExperimentConfig::T, "time horizon");
    add(app, table, flags, "--dt", &fbp::ExperimentConfig::dt, "time step (0 = automatic)");
    add(app, table, flags, "--dt-out", &fbp::ExperimentConfig::dt_out, "front sampling interval");
    add(app, table, flags, "--snapshots", &fbp::ExperimentConfig::snapshots, "profile snapshot times");
    add(app, table, flags, "--eps", &fbp::ExperimentConfig::eps, "front threshold");
    add(app, table, flags, "--scheme", &fbp::ExperimentConfig::scheme, "obstacle | penalized");
    add(app, table, flags, "--n", &fbp::ExperimentConfig::n, "penalization exponent");
    add(app, table, flags, "--c", &fbp::ExperimentConfig::c, "wave speed");
    add(app, table, flags, "--beta", &fbp::ExperimentConfig::beta, "boundary parameter beta");
    add(app, table, flags, "--r", &fbp::ExperimentConfig::r, "exponential moment rates");
    add(app, table, flags, "--seed", &fbp::ExperimentConfig::seed, "random seed");
    add(app, table, flags, "--n-paths", &fbp::ExperimentConfig::n_paths, "Monte Carlo paths");
    add(app, table, flags, "--dt-mc", &fbp::ExperimentConfig::dt_mc, "Monte Carlo time step");
    add(app, table, flags, "--N", &fbp::ExperimentConfig::N, "N-BBM population size");
    add(app, table, flags, "--burn-in", &fbp::ExperimentConfig::burn_in, "N-BBM burn-in (0 skips the stationary run)");
    add(app, table, flags, "--n-samples", &fbp::ExperimentConfig::n_samples, "stationary samples");
    add(app, table, flags, "--thin", &fbp::ExperimentConfig::thin, "time between stationary samples");
    add(app, table, flags, "--output-dir", &fbp::ExperimentConfig::output_dir, "subdirectory of the output root");
    add(app, table, flags, "--checks", &fbp::ExperimentConfig::checks, "only report these checks");
    CLI::Option* bridge_opt = app.add_flag("--no-bridge", no_bridge, "disable the Brownian-bridge correction");

    std::vector<CLI::App*> subs;
    for (const auto& name : fbp::kSubcommands) subs.push_back(app.add_subcommand(name, "run the " + name + " pipeline"));

    CLI11_PARSE(app, argc, argv);

    try {
        fbp::ExperimentConfig cfg = config_path.empty() ? fbp::ExperimentConfig{} : fbp::load_config(config_path);
        for (const auto& o : table) {
            if (o.option->count() > 0) o.apply(cfg);
        }
        if (bridge_opt->count() > 0) cfg.bridge = !no_bridge;
        for (auto* s : subs) {
            if (s->parsed()) cfg.subcommand = s->get_name();
        }
        const auto root = out_root.empty() ? fbp::default_output_root() : std::filesystem::path(out_root);
        const auto outcome = fbp::run(cfg, root, std::cout);
        std::cout << (outcome.pass() ? "all checks passed" : "some checks failed") << "; artifacts in "
                  << outcome.directory.string() << '\n';
        return fbp::exit_code(outcome);
    } catch (const fbp::ValidationError& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
