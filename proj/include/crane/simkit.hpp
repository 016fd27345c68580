#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "crane/baselines.hpp"
#include "crane/hsmc.hpp"
#include "crane/neurocomp.hpp"
#include "crane/plant.hpp"
#include "crane/scenarios.hpp"

namespace crane {

enum class Integrator { rk4, semi_implicit_euler };

struct SimConfig {
    double dt_ctrl = 0.1;  // controller period (s)
    int substeps = 100;    // plant integration steps per period
    double T = 20.0;       // horizon (s)
    Integrator integrator = Integrator::rk4;
    std::vector<std::string> record_fields;  // empty = record everything

    void validate() const;
    int steps() const;  // floor(T / dt_ctrl)
};

struct TraceRow {
    double t = 0.0;
    double x = 0.0;
    double x_d = 0.0;
    double e1 = 0.0;  // x - x_d
    double w_tip = 0.0;
    double w_dot_tip = 0.0;
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    double u_sm0 = 0.0, u_sm1 = 0.0, u_sm2 = 0.0;
    double u_ad = 0.0, u_nn = 0.0, u_total = 0.0;
    double sigma = 0.0;
    double theta_hat = 0.0;
    double V = 0.0;
};

/// Column names in trace order; the CSV writer uses these verbatim.
extern const std::array<const char*, 18> kTraceColumns;

double trace_field(const TraceRow& row, const std::string& name);

struct MetricsSummary {
    double mse = 0.0;
    double max_error = 0.0;        // after the first reference rise completes
    double response_time = 0.0;    // enter-and-stay 2% band
    bool settled = true;           // false when the band is never held to T
    double chattering_energy = 0.0;
    double control_effort = 0.0;
};

struct EpisodeResult {
    std::vector<TraceRow> trace;
    MetricsSummary metrics;
    std::vector<double> nn_weights_final;  // empty for PID/LQR episodes
};

struct HsmcController {
    HsmcGains gains;
    double eta_min = 3.0e-4;
    double eta_max = 1.2e-3;
    std::uint64_t nn_seed = 0;
};

struct PidController {
    PidGains gains;
};

struct LqrController {
    LqrDesign design;
};

using ControllerSpec = std::variant<HsmcController, PidController, LqrController>;

struct Scenario {
    DisturbanceSpec disturbance;
    ReferenceSpec reference;
};

struct IntegrationResult {
    PlantState state;
    double x_ddot = 0.0;  // trolley acceleration at the period end, held input
};

/// Advances the plant one controller period with zero-order-held u and
/// distributed load. Throws NumericalBlowup when any state magnitude passes
/// 1e6.
IntegrationResult integrate_substeps(const PlantState& state, const PlantParams& params,
                                     double u, std::span<const double> delta_f,
                                     double dt_ctrl, int substeps, Integrator integrator);

/// Composite candidate: weighted surface energy plus adaptive-gain and
/// output-weight estimation error.
double lyapunov_candidate(double s0, double s1, double s2, const HsmcGains& gains,
                          double theta_hat, std::span<const double> w_out,
                          std::span<const double> w_out_ref);

MetricsSummary compute_metrics(const std::vector<TraceRow>& trace,
                               const ReferenceSpec& ref);

/// Closed-loop episode: observe, reference, control, disturb, integrate,
/// record. Deterministic for fixed specs and seeds.
EpisodeResult run_episode(const PlantParams& params, const ControllerSpec& controller,
                          const Scenario& scenario, const SimConfig& sim);

}  // namespace crane
