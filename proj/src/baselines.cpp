#include "crane/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace crane {

void PidGains::validate() const {
    if (!(kp >= 0.0 && ki >= 0.0 && kd >= 0.0))
        throw InvalidParams("PidGains: gains must be >= 0");
    if (!(u_min < u_max)) throw InvalidParams("PidGains: need u_min < u_max");
    if (!(int_clamp > 0.0)) throw InvalidParams("PidGains: integral clamp must be > 0");
}

double pid_step(const PidGains& g, double e1, double dt, PidState& state) {
    if (!(dt > 0.0)) throw InvalidParams("pid_step: dt must be > 0");
    state.integral = std::clamp(state.integral + e1 * dt, -g.int_clamp, g.int_clamp);
    const double deriv = state.has_prev ? (e1 - state.prev_e) / dt : 0.0;
    state.prev_e = e1;
    state.has_prev = true;
    const double u = g.kp * e1 + g.ki * state.integral + g.kd * deriv;
    return std::clamp(u, g.u_min, g.u_max);
}

Eigen::MatrixXd care_solve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R) {
    const int n = static_cast<int>(A.rows());
    const Eigen::MatrixXd Rinv = R.inverse();
    const Eigen::MatrixXd G = B * Rinv * B.transpose();

    Eigen::MatrixXd H(2 * n, 2 * n);
    H << A, -G, -Q, -A.transpose();

    // Matrix sign iteration with determinant scaling. Quadratic convergence
    // whenever the Hamiltonian has no imaginary-axis eigenvalues.
    Eigen::MatrixXd Z = H;
    bool converged = false;
    for (int iter = 0; iter < 100; ++iter) {
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(Z);
        const double det = std::abs(lu.determinant());
        if (!std::isfinite(det) || det <= 0.0)
            throw NotStabilizable("care_solve: singular iterate");
        const double scale = std::pow(det, -1.0 / (2.0 * n));
        const Eigen::MatrixXd Zinv = lu.inverse();
        Eigen::MatrixXd next = 0.5 * (scale * Z + (1.0 / scale) * Zinv);
        const double step = (next - Z).norm();
        Z = next;
        if (!Z.allFinite()) throw NotStabilizable("care_solve: iteration diverged");
        if (step <= 1e-14 * std::max(1.0, Z.norm())) {
            converged = true;
            break;
        }
    }
    if (!converged) throw NotStabilizable("care_solve: sign iteration did not converge");

    // Stable subspace is the graph of P: (S + I) [I; P] = 0.
    Eigen::MatrixXd lhs(2 * n, n), rhs(2 * n, n);
    lhs << Z.topRightCorner(n, n), Z.bottomRightCorner(n, n) + Eigen::MatrixXd::Identity(n, n);
    rhs << -(Z.topLeftCorner(n, n) + Eigen::MatrixXd::Identity(n, n)),
        -Z.bottomLeftCorner(n, n);
    Eigen::MatrixXd P = lhs.colPivHouseholderQr().solve(rhs);
    P = 0.5 * (P + P.transpose());

    const Eigen::MatrixXd residual =
        A.transpose() * P + P * A - P * G * P + Q;
    if (!(residual.norm() < 1e-8))
        throw NotStabilizable("care_solve: Riccati residual above tolerance");
    return P;
}

LqrDesign lqr_design(const LtiModel& model, const Eigen::MatrixXd& Q,
                     const Eigen::MatrixXd& R) {
    LqrDesign d;
    d.model = model;
    d.Q = Q;
    d.R = R;
    d.P = care_solve(model.A, model.B, Q, R);
    d.K = R.inverse() * model.B.transpose() * d.P;

    const Eigen::MatrixXd Acl = model.A - model.B * d.K;
    const Eigen::VectorXcd eigs = Acl.eigenvalues();
    for (int i = 0; i < eigs.size(); ++i)
        if (!(eigs(i).real() < 0.0))
            throw NotStabilizable("lqr_design: closed loop is not Hurwitz");
    return d;
}

double lqr_step(const LqrDesign& design, const Eigen::VectorXd& state_obs,
                const Eigen::VectorXd& ref_state) {
    const double u = -(design.K * (state_obs - ref_state))(0);
    return std::clamp(u, design.u_min, design.u_max);
}

LtiModel crane_linearization(const PlantParams& p) {
    p.validate();
    const int n = p.n_nodes;
    const int nf = n - 1;  // free nodes, root pinned
    const double dy = p.dy();
    const double mu = p.mu();
    const double m_eff = p.nodal_mass();
    const double M = p.m_t + p.m_r;

    // Dense biharmonic operator restricted to the free nodes.
    Eigen::MatrixXd D4 = Eigen::MatrixXd::Zero(nf, nf);
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    for (int j = 1; j < n; ++j) {
        e[static_cast<std::size_t>(j)] = 1.0;
        const auto col = beam_fourth_derivative(e, dy);
        for (int i = 1; i < n; ++i) D4(i - 1, j - 1) = col[static_cast<std::size_t>(i)];
        e[static_cast<std::size_t>(j)] = 0.0;
    }

    // First bending mode: smallest eigenvalue of (EI/m_eff) D4.
    Eigen::EigenSolver<Eigen::MatrixXd> es(D4);
    int best = -1;
    double best_lambda = 0.0;
    for (int i = 0; i < nf; ++i) {
        const std::complex<double> lambda = es.eigenvalues()(i);
        if (std::abs(lambda.imag()) > 1e-8 * std::abs(lambda)) continue;
        if (lambda.real() <= 0.0) continue;
        if (best < 0 || lambda.real() < best_lambda) {
            best = i;
            best_lambda = lambda.real();
        }
    }
    if (best < 0) throw NotStabilizable("crane_linearization: no bending mode found");

    Eigen::VectorXd phi = es.eigenvectors().col(best).real();
    phi /= phi(nf - 1);  // normalize tip deflection to 1

    auto weight = [&](int i_free) { return (i_free == nf - 1) ? 0.5 * dy : dy; };
    double a = 0.0, b2 = 0.0, kq = 0.0;
    const Eigen::VectorXd d4phi = D4 * phi;
    for (int i = 0; i < nf; ++i) {
        a += weight(i) * phi(i);
        b2 += weight(i) * phi(i) * phi(i);
        kq += weight(i) * phi(i) * d4phi(i);
    }

    // Trolley row:  M x_dd + mu a q_dd = u
    // Modal row:    m_eff a x_dd + m_eff b2 q_dd + c b2 q_d + EI kq q = 0
    Eigen::Matrix2d mass;
    mass << M, mu * a, m_eff * a, m_eff * b2;
    const Eigen::Matrix2d mass_inv = mass.inverse();

    LtiModel model;
    model.A = Eigen::MatrixXd::Zero(4, 4);
    model.B = Eigen::MatrixXd::Zero(4, 1);
    model.A(0, 1) = 1.0;
    model.A(2, 3) = 1.0;
    // Accelerations = mass_inv * ([u; 0] - [0; c b2 q_d + EI kq q])
    const double k_term = p.EI * kq;
    const double c_term = p.c * b2;
    model.A(1, 2) = -mass_inv(0, 1) * k_term;
    model.A(1, 3) = -mass_inv(0, 1) * c_term;
    model.A(3, 2) = -mass_inv(1, 1) * k_term;
    model.A(3, 3) = -mass_inv(1, 1) * c_term;
    model.B(1, 0) = mass_inv(0, 0);
    model.B(3, 0) = mass_inv(1, 0);
    return model;
}

}  // namespace crane
