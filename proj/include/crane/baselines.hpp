#pragma once

#include <Eigen/Dense>

#include "crane/errors.hpp"
#include "crane/plant.hpp"

namespace crane {

struct PidGains {
    double kp = 150.0;
    double ki = 10.0;
    double kd = 80.0;
    double u_min = -200.0;
    double u_max = 200.0;
    double int_clamp = 10.0;

    void validate() const;
};

struct PidState {
    double integral = 0.0;
    double prev_e = 0.0;
    bool has_prev = false;
};

/// Positional PID on e = x_d - x with clamped integral and backward-difference
/// derivative; output clamped to the actuator bounds.
double pid_step(const PidGains& g, double e1, double dt, PidState& state);

/// Linear time-invariant model x_dot = A x + B u.
struct LtiModel {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
};

struct LqrDesign {
    LtiModel model;
    Eigen::MatrixXd Q;
    Eigen::MatrixXd R;
    Eigen::MatrixXd P;  // CARE solution
    Eigen::MatrixXd K;  // feedback rows, u = -K (x - x_ref)
    double u_min = -200.0;
    double u_max = 200.0;
};

/// Solves A'P + PA - P B R^-1 B' P + Q = 0 by the matrix sign iteration on
/// the Hamiltonian. Throws NotStabilizable when the iteration fails, the
/// residual stays above 1e-8, or the closed loop is not Hurwitz.
Eigen::MatrixXd care_solve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R);

LqrDesign lqr_design(const LtiModel& model, const Eigen::MatrixXd& Q,
                     const Eigen::MatrixXd& R);

/// u = -K (state - ref), clamped.
double lqr_step(const LqrDesign& design, const Eigen::VectorXd& state_obs,
                const Eigen::VectorXd& ref_state);

/// Rigid-mode reduction of the flexible payload: the first cantilever mode of
/// the discrete beam operator, Galerkin-projected, coupled to the trolley.
/// State [x, x_dot, w_tip, w_dot_tip].
LtiModel crane_linearization(const PlantParams& p);

}  // namespace crane
