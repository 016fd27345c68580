#pragma once

#include <span>
#include <vector>

#include "crane/errors.hpp"

namespace crane {

inline constexpr double kPi = 3.14159265358979323846;

/// Trolley + flexible submerged payload, uniform properties along the span.
struct PlantParams {
    double m_t = 100.0;    // trolley mass (kg)
    double m_r = 50.0;     // payload mass (kg)
    double L = 10.0;       // payload length (m)
    double d = 0.5;        // payload diameter (m)
    double EI = 1.0e4;     // bending stiffness (N m^2)
    double c = 10.0;       // structural damping per unit length (N s/m^2)
    double rho_w = 1025.0; // water density (kg/m^3)
    double C_a = 0.8;      // added-mass coefficient
    double C_d = 0.8;      // drag coefficient
    int n_nodes = 21;      // spatial grid points (>= 5)

    double mu() const { return m_r / L; }              // linear mass density (kg/m)
    double dy() const { return L / (n_nodes - 1); }    // grid spacing (m)
    double added_mass() const {                        // fluid mass per unit length (kg/m)
        return 0.25 * kPi * rho_w * C_a * d * d;
    }
    double nodal_mass() const { return mu() + added_mass(); }

    void validate() const;  // throws InvalidParams
};

/// w is the payload deflection relative to the trolley, sampled on the grid;
/// node 0 is the clamped attachment (w[0] = w_dot[0] = 0 always).
struct PlantState {
    double x = 0.0;
    double x_dot = 0.0;
    std::vector<double> w;
    std::vector<double> w_dot;
    double t = 0.0;

    static PlantState rest(int n_nodes);

    double w_tip() const { return w.back(); }
    double w_dot_tip() const { return w_dot.back(); }
    double w_slope_tip(double dy) const {
        return (w[w.size() - 1] - w[w.size() - 2]) / dy;
    }
};

/// Per-unit-length hydrodynamic load split at one point of the span.
/// total() fixes the summation order so the identity is bit-exact.
struct HydroForceBreakdown {
    double f_m = 0.0;
    double f_d = 0.0;
    double delta_f = 0.0;
    double total() const { return f_m + f_d + delta_f; }
};

struct PlantDerivatives {
    double x_dot = 0.0;
    double x_ddot = 0.0;
    std::vector<double> w_dot;
    std::vector<double> w_ddot;
};

/// Added-mass (inertial) load per unit length for a relative acceleration.
double morison_inertial(const PlantParams& p, double a_rel);

/// Quadratic drag load per unit length; odd in the relative velocity.
double morison_drag(const PlantParams& p, double v_rel);

HydroForceBreakdown hydro_force(const PlantParams& p, double v_abs, double a_abs,
                                double delta_f);

/// Five-point biharmonic stencil d4w/dy4. Interior rows use the central
/// stencil; node 0/1 rows close with clamped-root ghosts (w = 0, w' = 0),
/// the last two rows with free-tip ghosts (w'' = 0, w''' = 0).
/// Throws FieldTooShort for fewer than 5 samples.
std::vector<double> beam_fourth_derivative(std::span<const double> w, double dy);

/// In-place variant; d4 must match w in length.
void beam_fourth_derivative_into(std::span<const double> w, double dy,
                                 std::span<double> d4);

/// Trapezoid quadrature of a nodal field over the span.
double trapezoid(std::span<const double> f, double dy);

/// Coupled solve for (x_ddot, w_ddot). delta_f is a per-node distributed
/// load (N/m), positive driving w positive. Throws SingularMassMatrix when
/// the assembled mass matrix loses rank.
PlantDerivatives plant_derivatives(const PlantState& s, const PlantParams& p,
                                   double u, std::span<const double> delta_f);

/// Scalar overload: a total force F (N) is broadcast as a uniform F/L load.
PlantDerivatives plant_derivatives(const PlantState& s, const PlantParams& p,
                                   double u, double total_force);

/// Energy invariant of the undamped, unforced model (u = 0, c = 0, C_d = 0,
/// delta_f = 0): trolley and payload kinetic energy including added mass and
/// the trolley-payload momentum coupling, plus bending strain energy.
double mechanical_energy(const PlantState& s, const PlantParams& p);

namespace serial_ref {

/// Dense-assembly route: builds the full symmetric mass matrix and solves it
/// with a factorization. Slower than the structured solver above but
/// algebraically independent; kept for cross-checking and benchmarks.
PlantDerivatives plant_derivatives(const PlantState& s, const PlantParams& p,
                                   double u, std::span<const double> delta_f);

/// Plain serial loop version of the stencil, for kernel benchmarks.
std::vector<double> beam_fourth_derivative(std::span<const double> w, double dy);

}  // namespace serial_ref

}  // namespace crane
