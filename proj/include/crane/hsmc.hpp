#pragma once

#include "crane/errors.hpp"

namespace crane {

/// All controller gains. Values mirror the config profile; u_min/u_max are
/// the shared actuator bounds.
struct HsmcGains {
    double K0 = 0.01;   // global surface gain
    double Kp1 = 400.0; // drive-subsystem surface
    double Ki1 = 5.0;
    double Kd1 = 150.0;
    double Kp2 = 100.0; // non-drive surface
    double Ki2 = 5.0;
    double Kd2 = 50.0;
    double alpha = 0.2; // trolley-acceleration compensation
    double beta = 0.5;  // tip-slope compensation
    double Ks0 = 10.0;  // reaching gains
    double Ks1 = 10.0;
    double Ks2 = 50.0;
    double Kr1 = 1.0;   // surface-rate damping
    double Kr2 = 1.0;
    double phi0 = 0.1;  // saturation smoothing
    double phi1 = 0.1;
    double phi2 = 0.1;
    double gamma = 2.5;  // adaptive learning rate
    double delta = 0.05; // switching threshold on |s0|
    double alpha1 = 2.0; // switching gain, large-error branch
    double alpha2 = 1.0; // switching gain, small-error branch
    double u_min = -200.0;
    double u_max = 200.0;
    double int_clamp = 10.0;      // anti-windup bound on error integrals
    bool sign_reaching = false;   // replace sat with sign (chattering study)
    bool theta_clamp = false;     // optional lower bound on theta_hat
    double theta_min = -50.0;

    void validate() const;  // throws InvalidParams
};

/// Controller memory carried between samples; value-passed.
struct HsmcState {
    double int_e1 = 0.0;
    double int_e2 = 0.0;
    double prev_s1 = 0.0;
    double prev_s2 = 0.0;
    double theta_hat = 0.0;
    bool initialized = false;  // first sample takes s_dot = 0
};

/// One sample of the assembled control with its components and surfaces.
struct ControlBreakdown {
    double u_sm0 = 0.0;
    double u_sm1 = 0.0;
    double u_sm2 = 0.0;
    double u_ad = 0.0;
    double u_nn = 0.0;
    double u_total = 0.0;
    double sigma = 0.0;
    double s0 = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
};

/// What the controller can measure. x_ddot_prev is the integrator-reported
/// acceleration of the previous period (one-sample delay, no algebraic loop).
struct PlantObservation {
    double x = 0.0;
    double x_dot = 0.0;
    double x_ddot_prev = 0.0;
    double w_dot_tip = 0.0;
    double w_slope_tip = 0.0;
};

struct Reference {
    double x_d = 0.0;
    double x_d_dot = 0.0;
};

/// Smooth saturation v/(|v| + phi): odd, monotone, strictly inside (-1, 1).
double sat(double v, double phi);

double surface_s1(double e1, double int_e1, double e1_dot, const HsmcGains& g);

/// e2 must equal -w_dot_tip (asserted to 1e-12).
double surface_s2(double e2, double int_e2, double x_ddot, double w_dot_tip,
                  double w_slope_tip, const HsmcGains& g);

double surface_s0(double s1, double s2, double K0);

/// alpha1 above the threshold, alpha2 on |s0| <= delta.
double switching_sigma(double s0, const HsmcGains& g);

/// Explicit Euler step of theta_dot = -gamma * s0^2; never increases.
double adaptive_update(double theta_hat, double s0, double gamma, double dt);

struct ControlStepResult {
    ControlBreakdown breakdown;
    HsmcState state;
};

/// One controller sample: surfaces, reaching terms, adaptive and NN
/// compensation, clamped total, and the advanced controller state.
ControlStepResult control_step(const PlantObservation& obs, const Reference& ref,
                               const HsmcState& state, const HsmcGains& gains,
                               double u_nn, double dt);

}  // namespace crane
