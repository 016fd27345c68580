#include "crane/hsmc.hpp"

#include <algorithm>
#include <cmath>

namespace crane {

namespace {

inline double clamp(double v, double lo, double hi) { return std::clamp(v, lo, hi); }

inline double sign_fn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

inline void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw ObservationNotFinite(std::string("control_step: ") + name);
}

}  // namespace

void HsmcGains::validate() const {
    const double nonneg[] = {K0, Kp1, Ki1, Kd1, Kp2, Ki2, Kd2, alpha, beta,
                             Ks0, Ks1, Ks2, Kr1, Kr2, gamma};
    for (double g : nonneg)
        if (!(std::isfinite(g) && g >= 0.0))
            throw InvalidParams("HsmcGains: gains must be finite and >= 0");
    if (!(phi0 > 0.0 && phi1 > 0.0 && phi2 > 0.0))
        throw NonPositivePhi("HsmcGains: smoothing factors must be > 0");
    if (!(u_min < 0.0 && 0.0 < u_max))
        throw InvalidParams("HsmcGains: need u_min < 0 < u_max");
    if (!(delta > 0.0))
        throw InvalidParams("HsmcGains: switching threshold delta must be > 0");
    if (!(alpha1 >= alpha2 && alpha2 > 0.0))
        throw InvalidParams("HsmcGains: need alpha1 >= alpha2 > 0");
    if (!(int_clamp > 0.0))
        throw InvalidParams("HsmcGains: integral clamp must be > 0");
}

double sat(double v, double phi) {
    if (!(phi > 0.0)) throw NonPositivePhi("sat: phi must be > 0");
    return v / (std::abs(v) + phi);
}

double surface_s1(double e1, double int_e1, double e1_dot, const HsmcGains& g) {
    return g.Kp1 * e1 + g.Ki1 * int_e1 + g.Kd1 * e1_dot;
}

double surface_s2(double e2, double int_e2, double x_ddot, double w_dot_tip,
                  double w_slope_tip, const HsmcGains& g) {
    if (std::abs(e2 + w_dot_tip) > 1e-12)
        throw InconsistentVelocityError("surface_s2: e2 must equal -w_dot_tip");
    return g.Kp2 * e2 + g.Ki2 * int_e2 + g.Kd2 * (x_ddot - w_dot_tip) +
           g.alpha * x_ddot + g.beta * w_slope_tip;
}

double surface_s0(double s1, double s2, double K0) { return K0 * (s1 + s2); }

double switching_sigma(double s0, const HsmcGains& g) {
    return std::abs(s0) > g.delta ? g.alpha1 : g.alpha2;
}

double adaptive_update(double theta_hat, double s0, double gamma, double dt) {
    return theta_hat - gamma * s0 * s0 * dt;
}

ControlStepResult control_step(const PlantObservation& obs, const Reference& ref,
                               const HsmcState& state, const HsmcGains& gains,
                               double u_nn, double dt) {
    require_finite(obs.x, "x");
    require_finite(obs.x_dot, "x_dot");
    require_finite(obs.x_ddot_prev, "x_ddot_prev");
    require_finite(obs.w_dot_tip, "w_dot_tip");
    require_finite(obs.w_slope_tip, "w_slope_tip");
    require_finite(ref.x_d, "x_d");
    require_finite(ref.x_d_dot, "x_d_dot");
    require_finite(u_nn, "u_nn");

    // Tracking error as actual minus desired, so the -K*sat reaching terms
    // push the trolley toward the reference.
    const double e1 = obs.x - ref.x_d;
    const double e1_dot = obs.x_dot - ref.x_d_dot;
    const double e2 = -obs.w_dot_tip;

    const double s1 = surface_s1(e1, state.int_e1, e1_dot, gains);
    const double s2 = surface_s2(e2, state.int_e2, obs.x_ddot_prev, obs.w_dot_tip,
                                 obs.w_slope_tip, gains);
    const double s0 = surface_s0(s1, s2, gains.K0);

    const double s1_dot = state.initialized ? (s1 - state.prev_s1) / dt : 0.0;
    const double s2_dot = state.initialized ? (s2 - state.prev_s2) / dt : 0.0;

    auto reach = [&](double s, double phi) {
        return gains.sign_reaching ? sign_fn(s) : sat(s / phi, phi);
    };

    ControlBreakdown cb;
    cb.s0 = s0;
    cb.s1 = s1;
    cb.s2 = s2;
    cb.u_sm0 = -gains.Ks0 * reach(s0, gains.phi0);
    cb.u_sm1 = -gains.Ks1 * reach(s1, gains.phi1) - gains.Kr1 * s1_dot;
    cb.u_sm2 = -gains.Ks2 * reach(s2, gains.phi2) - gains.Kr2 * s2_dot;
    cb.u_ad = state.theta_hat * s0;
    cb.u_nn = u_nn;
    cb.sigma = switching_sigma(s0, gains);
    cb.u_total = clamp(cb.u_sm0 + cb.u_sm1 + cb.u_sm2 + cb.sigma * cb.u_ad + cb.u_nn,
                       gains.u_min, gains.u_max);

    HsmcState next = state;
    next.int_e1 = clamp(state.int_e1 + e1 * dt, -gains.int_clamp, gains.int_clamp);
    next.int_e2 = clamp(state.int_e2 + e2 * dt, -gains.int_clamp, gains.int_clamp);
    next.prev_s1 = s1;
    next.prev_s2 = s2;
    next.theta_hat = adaptive_update(state.theta_hat, s0, gains.gamma, dt);
    if (gains.theta_clamp) next.theta_hat = std::max(next.theta_hat, gains.theta_min);
    next.initialized = true;
    return {cb, next};
}

}  // namespace crane
