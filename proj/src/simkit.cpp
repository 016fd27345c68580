#include "crane/simkit.hpp"

#include <algorithm>
#include <cmath>

namespace crane {

const std::array<const char*, 18> kTraceColumns = {
    "t",     "x",     "x_d",   "e1",    "w_tip",   "w_dot_tip", "s0",        "s1",
    "s2",    "u_sm0", "u_sm1", "u_sm2", "u_ad",    "u_nn",      "u_total",   "sigma",
    "theta_hat", "V"};

double trace_field(const TraceRow& r, const std::string& name) {
    if (name == "t") return r.t;
    if (name == "x") return r.x;
    if (name == "x_d") return r.x_d;
    if (name == "e1") return r.e1;
    if (name == "w_tip") return r.w_tip;
    if (name == "w_dot_tip") return r.w_dot_tip;
    if (name == "s0") return r.s0;
    if (name == "s1") return r.s1;
    if (name == "s2") return r.s2;
    if (name == "u_sm0") return r.u_sm0;
    if (name == "u_sm1") return r.u_sm1;
    if (name == "u_sm2") return r.u_sm2;
    if (name == "u_ad") return r.u_ad;
    if (name == "u_nn") return r.u_nn;
    if (name == "u_total") return r.u_total;
    if (name == "sigma") return r.sigma;
    if (name == "theta_hat") return r.theta_hat;
    if (name == "V") return r.V;
    throw InvalidParams("trace_field: unknown column '" + name + "'");
}

void SimConfig::validate() const {
    if (!(dt_ctrl > 0.0)) throw InvalidParams("SimConfig: dt_ctrl must be > 0");
    if (substeps < 1) throw InvalidParams("SimConfig: substeps must be >= 1");
    if (!(T >= dt_ctrl)) throw InvalidParams("SimConfig: T must be >= dt_ctrl");
    for (const auto& f : record_fields) (void)trace_field(TraceRow{}, f);
}

int SimConfig::steps() const { return static_cast<int>(std::floor(T / dt_ctrl + 1e-9)); }

namespace {

constexpr double kBlowupLimit = 1.0e6;

PlantState add_scaled(const PlantState& s, const PlantDerivatives& d, double h) {
    PlantState out = s;
    out.x = s.x + h * d.x_dot;
    out.x_dot = s.x_dot + h * d.x_ddot;
    const int n = static_cast<int>(s.w.size());
    for (int i = 0; i < n; ++i) {
        out.w[i] = s.w[i] + h * d.w_dot[i];
        out.w_dot[i] = s.w_dot[i] + h * d.w_ddot[i];
    }
    out.w[0] = 0.0;  // clamped root, exact by construction
    out.w_dot[0] = 0.0;
    out.t = s.t + h;
    return out;
}

void check_blowup(const PlantState& s) {
    double peak = std::max(std::abs(s.x), std::abs(s.x_dot));
    for (double v : s.w) peak = std::max(peak, std::abs(v));
    for (double v : s.w_dot) peak = std::max(peak, std::abs(v));
    if (!(peak <= kBlowupLimit) || !std::isfinite(peak))
        throw NumericalBlowup(s.t, "integrate_substeps: state magnitude exceeded 1e6 at t=" +
                                       std::to_string(s.t));
}

PlantState rk4_step(const PlantState& s, const PlantParams& p, double u,
                    std::span<const double> delta_f, double h) {
    const auto k1 = plant_derivatives(s, p, u, delta_f);
    const auto k2 = plant_derivatives(add_scaled(s, k1, 0.5 * h), p, u, delta_f);
    const auto k3 = plant_derivatives(add_scaled(s, k2, 0.5 * h), p, u, delta_f);
    const auto k4 = plant_derivatives(add_scaled(s, k3, h), p, u, delta_f);

    PlantState out = s;
    const int n = static_cast<int>(s.w.size());
    out.x = s.x + h / 6.0 * (k1.x_dot + 2.0 * k2.x_dot + 2.0 * k3.x_dot + k4.x_dot);
    out.x_dot =
        s.x_dot + h / 6.0 * (k1.x_ddot + 2.0 * k2.x_ddot + 2.0 * k3.x_ddot + k4.x_ddot);
    for (int i = 0; i < n; ++i) {
        out.w[i] = s.w[i] + h / 6.0 *
                                (k1.w_dot[i] + 2.0 * k2.w_dot[i] + 2.0 * k3.w_dot[i] +
                                 k4.w_dot[i]);
        out.w_dot[i] = s.w_dot[i] + h / 6.0 *
                                        (k1.w_ddot[i] + 2.0 * k2.w_ddot[i] +
                                         2.0 * k3.w_ddot[i] + k4.w_ddot[i]);
    }
    out.w[0] = 0.0;
    out.w_dot[0] = 0.0;
    out.t = s.t + h;
    return out;
}

PlantState semi_implicit_step(const PlantState& s, const PlantParams& p, double u,
                              std::span<const double> delta_f, double h) {
    const auto d = plant_derivatives(s, p, u, delta_f);
    PlantState out = s;
    out.x_dot = s.x_dot + h * d.x_ddot;
    out.x = s.x + h * out.x_dot;
    const int n = static_cast<int>(s.w.size());
    for (int i = 0; i < n; ++i) {
        out.w_dot[i] = s.w_dot[i] + h * d.w_ddot[i];
        out.w[i] = s.w[i] + h * out.w_dot[i];
    }
    out.w[0] = 0.0;
    out.w_dot[0] = 0.0;
    out.t = s.t + h;
    return out;
}

}  // namespace

IntegrationResult integrate_substeps(const PlantState& state, const PlantParams& params,
                                     double u, std::span<const double> delta_f,
                                     double dt_ctrl, int substeps, Integrator integrator) {
    const double h = dt_ctrl / substeps;
    PlantState s = state;
    for (int k = 0; k < substeps; ++k) {
        s = (integrator == Integrator::rk4) ? rk4_step(s, params, u, delta_f, h)
                                            : semi_implicit_step(s, params, u, delta_f, h);
        check_blowup(s);
    }
    // Acceleration at the period end under the held input, reported to the
    // controller as its (delayed) x_ddot observation.
    const auto d = plant_derivatives(s, params, u, delta_f);
    return {std::move(s), d.x_ddot};
}

double lyapunov_candidate(double s0, double s1, double s2, const HsmcGains& gains,
                          double theta_hat, std::span<const double> w_out,
                          std::span<const double> w_out_ref) {
    double v = 0.5 * (gains.Ks0 * s0 * s0 + gains.Ks1 * s1 * s1 + gains.Ks2 * s2 * s2);
    v += 0.5 * theta_hat * theta_hat;
    double werr = 0.0;
    for (std::size_t i = 0; i < w_out.size(); ++i) {
        const double dwi = w_out[i] - w_out_ref[i];
        werr += dwi * dwi;
    }
    return v + 0.5 * werr;
}

MetricsSummary compute_metrics(const std::vector<TraceRow>& trace,
                               const ReferenceSpec& ref) {
    if (trace.empty()) throw EmptyTrace("compute_metrics: empty trace");
    MetricsSummary m;

    double sq = 0.0;
    for (const auto& r : trace) sq += r.e1 * r.e1;
    m.mse = sq / static_cast<double>(trace.size());

    const double rise_end = ref.first_rise_end();
    for (const auto& r : trace)
        if (r.t >= rise_end - 1e-9) m.max_error = std::max(m.max_error, std::abs(r.e1));

    const double band = 0.02 * std::abs(ref.final_target());
    int last_violation = -1;
    for (int i = 0; i < static_cast<int>(trace.size()); ++i)
        if (std::abs(trace[i].e1) > band) last_violation = i;
    if (last_violation + 1 >= static_cast<int>(trace.size())) {
        m.settled = false;
        m.response_time = trace.back().t;
    } else {
        m.settled = true;
        m.response_time = trace[last_violation + 1].t;
    }

    // Differences over all recorded samples; effort over the applied steps
    // (the final sample acts for zero time).
    for (std::size_t k = 1; k < trace.size(); ++k) {
        const double du = trace[k].u_total - trace[k - 1].u_total;
        m.chattering_energy += du * du;
    }
    for (std::size_t k = 0; k + 1 < trace.size(); ++k)
        m.control_effort += trace[k].u_total * trace[k].u_total;
    if (trace.size() >= 2) m.control_effort *= trace[1].t - trace[0].t;
    return m;
}

EpisodeResult run_episode(const PlantParams& params, const ControllerSpec& controller,
                          const Scenario& scenario, const SimConfig& sim) {
    params.validate();
    scenario.disturbance.validate();
    scenario.reference.validate();
    sim.validate();

    const int n_steps = sim.steps();
    const int n = params.n_nodes;

    PlantState state = PlantState::rest(n);
    double x_ddot_prev = 0.0;

    // Controller-specific bits.
    const auto* hsmc_ctrl = std::get_if<HsmcController>(&controller);
    const auto* pid_ctrl = std::get_if<PidController>(&controller);
    const auto* lqr_ctrl = std::get_if<LqrController>(&controller);
    if (hsmc_ctrl) hsmc_ctrl->gains.validate();
    if (pid_ctrl) pid_ctrl->gains.validate();

    HsmcState hsmc_state;
    PidState pid_state;
    NnCompensator net;
    if (hsmc_ctrl)
        net = NnCompensator::make(hsmc_ctrl->eta_min, hsmc_ctrl->eta_max,
                                  hsmc_ctrl->gains.delta, hsmc_ctrl->nn_seed);

    EpisodeResult result;
    result.trace.reserve(static_cast<std::size_t>(n_steps) + 1);
    std::vector<std::array<double, NnCompensator::hidden_size>> w_out_log;
    if (hsmc_ctrl) w_out_log.reserve(static_cast<std::size_t>(n_steps) + 1);

    std::vector<double> delta_f(static_cast<std::size_t>(n), 0.0);

    for (int k = 0; k <= n_steps; ++k) {
        const double t = k * sim.dt_ctrl;
        const auto ref = reference(scenario.reference, t);

        TraceRow row;
        row.t = t;
        row.x = state.x;
        row.x_d = ref.x_d;
        row.e1 = state.x - ref.x_d;
        row.w_tip = state.w_tip();
        row.w_dot_tip = state.w_dot_tip();

        if (hsmc_ctrl) {
            const NnInput nn_in{state.x, state.x_dot, state.w_tip(), state.w_dot_tip()};
            const double u_nn = forward(net, nn_in);
            const PlantObservation obs{state.x, state.x_dot, x_ddot_prev,
                                       state.w_dot_tip(), state.w_slope_tip(params.dy())};
            const auto step =
                control_step(obs, {ref.x_d, ref.x_d_dot}, hsmc_state, hsmc_ctrl->gains,
                             u_nn, sim.dt_ctrl);
            row.s0 = step.breakdown.s0;
            row.s1 = step.breakdown.s1;
            row.s2 = step.breakdown.s2;
            row.u_sm0 = step.breakdown.u_sm0;
            row.u_sm1 = step.breakdown.u_sm1;
            row.u_sm2 = step.breakdown.u_sm2;
            row.u_ad = step.breakdown.u_ad;
            row.u_nn = step.breakdown.u_nn;
            row.u_total = step.breakdown.u_total;
            row.sigma = step.breakdown.sigma;
            row.theta_hat = hsmc_state.theta_hat;
            hsmc_state = step.state;
            w_out_log.push_back(net.w_out);  // weights the sample was computed with
            net = weight_update(net, step.breakdown.s0, nn_in, sim.dt_ctrl);
        } else if (pid_ctrl) {
            row.u_total = pid_step(pid_ctrl->gains, ref.x_d - state.x, sim.dt_ctrl,
                                   pid_state);
        } else if (lqr_ctrl) {
            Eigen::Vector4d obs(state.x, state.x_dot, state.w_tip(), state.w_dot_tip());
            Eigen::Vector4d target(ref.x_d, ref.x_d_dot, 0.0, 0.0);
            row.u_total = lqr_step(lqr_ctrl->design, obs, target);
        }

        result.trace.push_back(row);

        if (k < n_steps) {
            const double F = disturbance_force(scenario.disturbance, t);
            std::fill(delta_f.begin(), delta_f.end(), F / params.L);
            auto advanced = integrate_substeps(state, params, row.u_total, delta_f,
                                               sim.dt_ctrl, sim.substeps, sim.integrator);
            state = std::move(advanced.state);
            x_ddot_prev = advanced.x_ddot;
        }
    }

    if (hsmc_ctrl) {
        const auto& w_ref = w_out_log.back();
        for (std::size_t k = 0; k < result.trace.size(); ++k) {
            auto& row = result.trace[k];
            row.V = lyapunov_candidate(row.s0, row.s1, row.s2, hsmc_ctrl->gains,
                                       row.theta_hat, w_out_log[k], w_ref);
        }
        result.nn_weights_final = net.snapshot();
    }

    result.metrics = compute_metrics(result.trace, scenario.reference);
    return result;
}

}  // namespace crane
