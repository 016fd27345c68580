#include "crane/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "crane/rng.hpp"

namespace crane {

namespace {

int batch_threads(int n_cells) {
    int threads = n_cells;
#ifdef _OPENMP
    threads = std::min(n_cells, omp_get_max_threads());
#endif
    if (const char* env = std::getenv("CRANE_SIM_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) threads = std::min(threads, cap);
    }
    return std::max(threads, 1);
}

std::vector<std::string> filter(std::vector<std::string> items,
                                const std::optional<std::string>& keep) {
    if (!keep) return items;
    std::vector<std::string> out;
    for (auto& it : items)
        if (it == *keep) out.push_back(it);
    return out;
}

}  // namespace

std::vector<Cell> plan_cells(const ExperimentConfig& cfg, const RunOptions& opt) {
    std::vector<std::string> controllers;
    std::vector<std::string> scenarios;
    std::vector<Cell> cells;

    std::vector<std::uint64_t> seeds = cfg.seeds;
    if (opt.seed) seeds = {*opt.seed};

    auto add = [&](const std::vector<std::string>& ctrls,
                   const std::vector<std::string>& scens) {
        for (const auto& c : filter(ctrls, opt.controller))
            for (const auto& s : filter(scens, opt.scenario))
                for (auto seed : seeds) {
                    if (std::none_of(cells.begin(), cells.end(), [&](const Cell& e) {
                            return e.controller == c && e.scenario == s && e.seed == seed;
                        }))
                        cells.push_back({c, s, seed});
                }
    };

    if (opt.suite) {
        if (*opt.suite == "table5") {
            add({"hsmc", "pid", "lqr"}, {"low", "high", "random"});
        } else if (*opt.suite == "switching") {
            add({"hsmc"}, {"switch-low", "switch-high", "switch-random"});
        } else if (*opt.suite == "all") {
            add({"hsmc", "pid", "lqr"}, {"none", "low", "high", "random"});
            add({"hsmc"}, {"switch-low", "switch-high", "switch-random"});
        } else {
            throw ConfigError("unknown suite '" + *opt.suite +
                              "' (expected table5, switching or all)");
        }
        return cells;
    }

    controllers = cfg.run_controllers;
    scenarios = cfg.run_scenarios;
    if (opt.controller) controllers = {*opt.controller};
    if (opt.scenario) scenarios = {*opt.scenario};
    add(controllers, scenarios);
    return cells;
}

ControllerSpec make_controller(const ExperimentConfig& cfg, const std::string& name,
                               std::uint64_t seed) {
    if (name == "hsmc") {
        HsmcController hc;
        hc.gains = cfg.gains;
        hc.eta_min = cfg.nn_eta_min;
        hc.eta_max = cfg.nn_eta_max;
        hc.nn_seed = splitmix64(seed);  // decorrelated from the disturbance stream
        return hc;
    }
    if (name == "pid") return PidController{cfg.pid};
    if (name == "lqr") {
        Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(4, 4);
        for (int i = 0; i < 4; ++i) Q(i, i) = cfg.lqr_q[i];
        Eigen::MatrixXd R(1, 1);
        R(0, 0) = cfg.lqr_r;
        LqrController lc{lqr_design(crane_linearization(cfg.plant), Q, R)};
        lc.design.u_min = cfg.gains.u_min;
        lc.design.u_max = cfg.gains.u_max;
        return lc;
    }
    throw ConfigError("unknown controller '" + name + "'");
}

int run(const RunOptions& opt) {
    ExperimentConfig cfg = load_config(opt.config_path);
    if (opt.out_dir) cfg.out_dir = *opt.out_dir;

    if (opt.print_config) {
        std::cout << serialize_config(cfg);
        return 0;
    }

    if (!cfg.unused_gain_keys.empty()) {
        std::string keys;
        for (std::size_t i = 0; i < cfg.unused_gain_keys.size(); ++i)
            keys += (i ? ", " : "") + cfg.unused_gain_keys[i];
        std::cerr << "warning: " << keys << " are defined in the profile but used by no "
                  << "control law\n";
    }

    const std::vector<Cell> cells = plan_cells(cfg, opt);
    if (cells.empty()) {
        std::cerr << "error: no cells selected\n";
        return 1;
    }

    std::filesystem::create_directories(cfg.out_dir);

    std::vector<SummaryRow> rows(cells.size());
    std::vector<std::exception_ptr> failures(cells.size());
    bool any_blowup = false;

    const int n = static_cast<int>(cells.size());
    const int threads = batch_threads(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (int i = 0; i < n; ++i) {
        const Cell& cell = cells[static_cast<std::size_t>(i)];
        SummaryRow row;
        row.controller = cell.controller;
        row.scenario = cell.scenario;
        row.seed = cell.seed;
        try {
            const auto controller = make_controller(cfg, cell.controller, cell.seed);
            const auto scenario = make_scenario(cfg, cell.scenario, cell.seed);
            SimConfig sim = cfg.sim;
            sim.T = scenario_horizon(cfg, cell.scenario);
            const EpisodeResult result = run_episode(cfg.plant, controller, scenario, sim);

            const std::string base = cfg.out_dir + "/" + cell.controller + "_" +
                                     cell.scenario + "_seed" + std::to_string(cell.seed);
            emit_trace_csv(result, base + ".csv", cfg.sim.record_fields);
            if (!result.nn_weights_final.empty())
                emit_weights_csv(result.nn_weights_final, base + "_nn_weights.csv");

            row.metrics = result.metrics;
            row.status = result.metrics.settled ? "ok" : "unsettled";
        } catch (const NumericalBlowup& e) {
            row.status = "blowup";
#pragma omp critical
            {
                any_blowup = true;
                std::cerr << "blowup in cell " << cell.controller << "/" << cell.scenario
                          << " seed " << cell.seed << ": " << e.what() << "\n";
            }
        } catch (...) {
            failures[static_cast<std::size_t>(i)] = std::current_exception();
        }
        rows[static_cast<std::size_t>(i)] = std::move(row);
    }

    for (auto& f : failures)
        if (f) std::rethrow_exception(f);

    std::sort(rows.begin(), rows.end(), [](const SummaryRow& a, const SummaryRow& b) {
        return std::tie(a.controller, a.scenario, a.seed) <
               std::tie(b.controller, b.scenario, b.seed);
    });

    write_text_file(cfg.out_dir + "/summary.csv", summary_csv_string(rows));
    const std::string table = summary_text_table(rows);
    write_text_file(cfg.out_dir + "/summary.txt", table);
    std::cout << table;

    return any_blowup ? 2 : 0;
}

}  // namespace crane
