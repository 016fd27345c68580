#include "crane/plant.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace crane {

namespace {

// Below this size the parallel regions are pure overhead; production grids
// (n_nodes ~ 21) stay serial, convergence-study grids fan out.
constexpr int kOmpGrain = 4096;

inline double trap_weight(int i, int n, double dy) {
    return (i == 0 || i == n - 1) ? 0.5 * dy : dy;
}

inline bool finite(double v) { return std::isfinite(v); }

void check_state(const PlantState& s, const PlantParams& p, std::span<const double> delta_f) {
    const auto n = static_cast<std::size_t>(p.n_nodes);
    if (s.w.size() != n || s.w_dot.size() != n)
        throw InvalidParams("plant_derivatives: field length does not match n_nodes");
    if (delta_f.size() != n)
        throw InvalidParams("plant_derivatives: delta_f length does not match n_nodes");
}

}  // namespace

void PlantParams::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(m_t) || !positive(m_r) || !positive(L) || !positive(d) ||
        !positive(EI) || !positive(rho_w))
        throw InvalidParams("PlantParams: masses, geometry, EI and rho_w must be > 0");
    if (!std::isfinite(c) || c < 0.0)
        throw InvalidParams("PlantParams: damping c must be >= 0");
    if (!(C_a > 0.0 && C_a <= 2.0) || !(C_d > 0.0 && C_d <= 2.0))
        throw InvalidParams("PlantParams: C_a and C_d must lie in (0, 2]");
    if (n_nodes < 5)
        throw InvalidParams("PlantParams: n_nodes must be >= 5");
    if (!(dy() > 0.0))
        throw InvalidParams("PlantParams: grid spacing must be > 0");
}

PlantState PlantState::rest(int n_nodes) {
    PlantState s;
    s.w.assign(static_cast<std::size_t>(n_nodes), 0.0);
    s.w_dot.assign(static_cast<std::size_t>(n_nodes), 0.0);
    return s;
}

double morison_inertial(const PlantParams& p, double a_rel) {
    return 0.25 * kPi * p.rho_w * p.C_a * p.d * p.d * a_rel;
}

double morison_drag(const PlantParams& p, double v_rel) {
    return 0.5 * p.rho_w * p.C_d * p.d * v_rel * std::abs(v_rel);
}

HydroForceBreakdown hydro_force(const PlantParams& p, double v_abs, double a_abs,
                                double delta_f) {
    return {morison_inertial(p, a_abs), morison_drag(p, v_abs), delta_f};
}

double trapezoid(std::span<const double> f, double dy) {
    const int n = static_cast<int>(f.size());
    if (n < 2) throw FieldTooShort("trapezoid: need at least 2 samples");
    double sum = 0.5 * (f[0] + f[n - 1]);
    for (int i = 1; i < n - 1; ++i) sum += f[i];
    return sum * dy;
}

void beam_fourth_derivative_into(std::span<const double> w, double dy,
                                 std::span<double> d4) {
    const int n = static_cast<int>(w.size());
    if (n < 5) throw FieldTooShort("beam_fourth_derivative: need at least 5 samples");
    const double inv = 1.0 / (dy * dy * dy * dy);

    // Clamped root: w(0) = 0, w'(0) = 0 give ghosts w[-1] = w[1], w[-2] = w[2].
    d4[0] = (6.0 * w[0] - 8.0 * w[1] + 2.0 * w[2]) * inv;
    d4[1] = (-4.0 * w[0] + 7.0 * w[1] - 4.0 * w[2] + w[3]) * inv;

    if (n >= kOmpGrain) {
#pragma omp parallel for
        for (int i = 2; i < n - 2; ++i)
            d4[i] =
                (w[i - 2] - 4.0 * w[i - 1] + 6.0 * w[i] - 4.0 * w[i + 1] + w[i + 2]) * inv;
    } else {
        for (int i = 2; i < n - 2; ++i)
            d4[i] =
                (w[i - 2] - 4.0 * w[i - 1] + 6.0 * w[i] - 4.0 * w[i + 1] + w[i + 2]) * inv;
    }

    // Free tip: w''(L) = 0, w'''(L) = 0 eliminate ghosts w[n], w[n+1].
    d4[n - 2] = (w[n - 4] - 4.0 * w[n - 3] + 5.0 * w[n - 2] - 2.0 * w[n - 1]) * inv;
    d4[n - 1] = (2.0 * w[n - 3] - 4.0 * w[n - 2] + 2.0 * w[n - 1]) * inv;
}

std::vector<double> beam_fourth_derivative(std::span<const double> w, double dy) {
    std::vector<double> d4(w.size());
    beam_fourth_derivative_into(w, dy, d4);
    return d4;
}

// The coupled system is arrow-shaped: one trolley row coupling x_ddot to all
// nodal accelerations through the quadrature weights, and one diagonal row
// per free node. Eliminating the nodes leaves a scalar equation for x_ddot,
// so the exact solve is O(n).
PlantDerivatives plant_derivatives(const PlantState& s, const PlantParams& p,
                                   double u, std::span<const double> delta_f) {
    check_state(s, p, delta_f);
    const int n = p.n_nodes;
    const double dy = p.dy();
    const double mu = p.mu();
    const double m_eff = p.nodal_mass();
    if (!(m_eff > 1e-12))
        throw SingularMassMatrix("plant_derivatives: vanishing nodal mass");

    // Scratch for the stencil and the nodal right-hand side; the integrator
    // calls this four times per substep, so the buffers are reused.
    static thread_local std::vector<double> d4, b;
    d4.resize(static_cast<std::size_t>(n));
    b.resize(static_cast<std::size_t>(n));
    beam_fourth_derivative_into(s.w, dy, d4);

    // Nodal right-hand side with the added-mass acceleration term kept on the
    // left (inside m_eff) and the x_ddot coupling still unknown.
    b[0] = 0.0;
    const double drag_coef = 0.5 * p.rho_w * p.C_d * p.d;
    auto fill_b = [&](int i) {
        const double v = s.x_dot + s.w_dot[i];
        b[i] = -p.EI * d4[i] - p.c * s.w_dot[i] - drag_coef * v * std::abs(v) + delta_f[i];
    };
    if (n >= kOmpGrain) {
#pragma omp parallel for
        for (int i = 1; i < n; ++i) fill_b(i);
    } else {
        for (int i = 1; i < n; ++i) fill_b(i);
    }

    // Serial reduction: results do not depend on the thread count.
    double weighted_b = 0.0;
    for (int i = 1; i < n; ++i) weighted_b += trap_weight(i, n, dy) * b[i];

    const double denom = (p.m_t + p.m_r) - mu * (p.L - 0.5 * dy);
    if (std::abs(denom) < 1e-12 * (p.m_t + p.m_r))
        throw SingularMassMatrix("plant_derivatives: trolley row eliminated to zero mass");

    const double x_ddot = (u - (mu / m_eff) * weighted_b) / denom;

    PlantDerivatives out;
    out.x_dot = s.x_dot;
    out.x_ddot = x_ddot;
    out.w_dot = s.w_dot;
    out.w_dot[0] = 0.0;
    out.w_ddot.resize(static_cast<std::size_t>(n));
    out.w_ddot[0] = 0.0;
    const double inv_m = 1.0 / m_eff;
    if (n >= kOmpGrain) {
#pragma omp parallel for
        for (int i = 1; i < n; ++i) out.w_ddot[i] = b[i] * inv_m - x_ddot;
    } else {
        for (int i = 1; i < n; ++i) out.w_ddot[i] = b[i] * inv_m - x_ddot;
    }

    if (!finite(out.x_ddot))
        throw SingularMassMatrix("plant_derivatives: non-finite acceleration");
    return out;
}

PlantDerivatives plant_derivatives(const PlantState& s, const PlantParams& p,
                                   double u, double total_force) {
    std::vector<double> delta_f(static_cast<std::size_t>(p.n_nodes), total_force / p.L);
    return plant_derivatives(s, p, u, delta_f);
}

double mechanical_energy(const PlantState& s, const PlantParams& p) {
    const int n = p.n_nodes;
    const double dy = p.dy();
    const double M = p.m_t + p.m_r;
    const double mu = p.mu();
    const double ca = p.added_mass();
    const double m_eff = p.nodal_mass();

    const auto d4 = beam_fourth_derivative(s.w, dy);

    double q_wdot = 0.0;    // integral of w_dot
    double q_wdot2 = 0.0;   // integral of w_dot^2
    double strain2 = 0.0;   // integral of w * w'''' == integral of (w'')^2
    for (int i = 0; i < n; ++i) {
        const double wt = trap_weight(i, n, dy);
        q_wdot += wt * s.w_dot[i];
        q_wdot2 += wt * s.w_dot[i] * s.w_dot[i];
        strain2 += wt * s.w[i] * d4[i];
    }

    // Kinetic part in trolley + relative coordinates; the two cross terms are
    // what the trolley-payload coupling exchanges, so they belong to the
    // invariant. Without them the sum oscillates with the added-mass flux.
    return 0.5 * M * s.x_dot * s.x_dot + mu * s.x_dot * q_wdot + 0.5 * m_eff * q_wdot2 +
           0.5 * p.EI * strain2 - 0.5 * (ca * mu / M) * q_wdot * q_wdot;
}

namespace serial_ref {

std::vector<double> beam_fourth_derivative(std::span<const double> w, double dy) {
    const int n = static_cast<int>(w.size());
    if (n < 5) throw FieldTooShort("beam_fourth_derivative: need at least 5 samples");
    const double inv = 1.0 / (dy * dy * dy * dy);
    std::vector<double> d4(static_cast<std::size_t>(n));
    d4[0] = (6.0 * w[0] - 8.0 * w[1] + 2.0 * w[2]) * inv;
    d4[1] = (-4.0 * w[0] + 7.0 * w[1] - 4.0 * w[2] + w[3]) * inv;
    for (int i = 2; i < n - 2; ++i)
        d4[i] = (w[i - 2] - 4.0 * w[i - 1] + 6.0 * w[i] - 4.0 * w[i + 1] + w[i + 2]) * inv;
    d4[n - 2] = (w[n - 4] - 4.0 * w[n - 3] + 5.0 * w[n - 2] - 2.0 * w[n - 1]) * inv;
    d4[n - 1] = (2.0 * w[n - 3] - 4.0 * w[n - 2] + 2.0 * w[n - 1]) * inv;
    return d4;
}

PlantDerivatives plant_derivatives(const PlantState& s, const PlantParams& p,
                                   double u, std::span<const double> delta_f) {
    check_state(s, p, delta_f);
    const int n = p.n_nodes;
    const double dy = p.dy();
    const double mu = p.mu();
    const double m_eff = p.nodal_mass();

    const auto d4 = beam_fourth_derivative(s.w, dy);

    // Unknowns [x_ddot, w_ddot(1..n-1)]. Scaling node row i by
    // mu*trap_i/m_eff makes the matrix symmetric, so an LDLT factorization
    // applies. Node 0 is pinned and excluded.
    const int m = n;  // 1 trolley DOF + (n-1) free nodes
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);

    A(0, 0) = p.m_t + p.m_r;
    rhs(0) = u;
    for (int i = 1; i < n; ++i) {
        const double wt = trap_weight(i, n, dy);
        const double scale = mu * wt / m_eff;
        const double b_i =
            -p.EI * d4[i] - p.c * s.w_dot[i] - morison_drag(p, s.x_dot + s.w_dot[i]) + delta_f[i];
        A(0, i) = mu * wt;
        A(i, 0) = scale * m_eff;  // == mu * wt, symmetric with the trolley row
        A(i, i) = scale * m_eff;
        rhs(i) = scale * b_i;
    }

    Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
    if (ldlt.info() != Eigen::Success)
        throw SingularMassMatrix("serial_ref::plant_derivatives: factorization failed");
    Eigen::VectorXd sol = ldlt.solve(rhs);
    if (!sol.allFinite())
        throw SingularMassMatrix("serial_ref::plant_derivatives: singular mass matrix");

    PlantDerivatives out;
    out.x_dot = s.x_dot;
    out.x_ddot = sol(0);
    out.w_dot = s.w_dot;
    out.w_dot[0] = 0.0;
    out.w_ddot.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 1; i < n; ++i) out.w_ddot[i] = sol(i);
    return out;
}

}  // namespace serial_ref

}  // namespace crane
