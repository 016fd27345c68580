#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "crane/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Deep-sea crane control experiments"};
    app.require_subcommand(1);

    crane::RunOptions opt;
    std::string scenario, controller, suite, out_dir;
    std::uint64_t seed = 0;

    auto* run_cmd = app.add_subcommand("run", "Run experiment cells from a config profile");
    run_cmd->add_option("config", opt.config_path, "Config profile path")
        ->required()
        ->check(CLI::ExistingFile);
    run_cmd->add_option("--scenario", scenario,
                        "Single scenario preset (none, low, high, random, random-prose, "
                        "switch-low, switch-high, switch-random)");
    run_cmd->add_option("--controller", controller, "Single controller (hsmc, pid, lqr)");
    run_cmd->add_option("--suite", suite, "Cell suite: table5, switching or all");
    auto* seed_opt = run_cmd->add_option("--seed", seed, "Override the config seed list");
    run_cmd->add_option("--out", out_dir, "Output directory (overrides the profile)");
    run_cmd->add_flag("--print-config", opt.print_config,
                      "Echo the parsed profile in canonical form and exit");

    CLI11_PARSE(app, argc, argv);

    if (!scenario.empty()) opt.scenario = scenario;
    if (!controller.empty()) opt.controller = controller;
    if (!suite.empty()) opt.suite = suite;
    if (!out_dir.empty()) opt.out_dir = out_dir;
    if (seed_opt->count() > 0) opt.seed = seed;

    try {
        return crane::run(opt);
    } catch (const crane::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
