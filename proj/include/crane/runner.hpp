#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crane/config.hpp"
#include "crane/csvio.hpp"
#include "crane/simkit.hpp"

namespace crane {

struct RunOptions {
    std::string config_path;
    std::optional<std::string> scenario;    // run a single named scenario
    std::optional<std::string> controller;  // run a single controller
    std::optional<std::string> suite;       // table5 | switching | all
    std::optional<std::uint64_t> seed;      // override the config seed list
    std::optional<std::string> out_dir;
    bool print_config = false;
};

struct Cell {
    std::string controller;
    std::string scenario;
    std::uint64_t seed = 0;
};

/// The (controller x scenario x seed) grid an invocation expands to.
std::vector<Cell> plan_cells(const ExperimentConfig& cfg, const RunOptions& opt);

ControllerSpec make_controller(const ExperimentConfig& cfg, const std::string& name,
                               std::uint64_t seed);

/// Runs every cell, writes per-episode traces and the summary files.
/// Returns 0 on success, 2 when any cell hit a numerical blowup (summary is
/// still written with that cell flagged). Config errors throw before any
/// cell runs; the CLI maps them to exit code 1.
int run(const RunOptions& opt);

}  // namespace crane
