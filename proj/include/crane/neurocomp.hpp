#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace crane {

/// Measurable states fed to the compensator.
struct NnInput {
    double x = 0.0;
    double x_dot = 0.0;
    double w_tip = 0.0;
    double w_dot_tip = 0.0;
};

/// One-hidden-layer network with a frozen random feature layer and an online
/// trained output layer. The output layer starts at zero so the compensator
/// is neutral until the sliding surface drives it.
struct NnCompensator {
    static constexpr int input_size = 4;
    static constexpr int hidden_size = 10;

    std::array<double, hidden_size * input_size> W_in{};  // row-major
    std::array<double, hidden_size> b_in{};
    std::array<double, hidden_size> w_out{};
    double eta_min = 3.0e-4;
    double eta_max = 1.2e-3;
    double delta = 0.05;  // learning-rate switching threshold, shared with the controller
    std::uint64_t rng_seed = 0;

    /// W_in, b_in drawn uniform in [-0.5, 0.5] from the seed; w_out zeroed.
    static NnCompensator make(double eta_min, double eta_max, double delta,
                              std::uint64_t seed);

    std::array<double, hidden_size> hidden(const NnInput& in) const;

    /// Flat weight dump: W_in row-major, then b_in, then w_out.
    std::vector<double> snapshot() const;
};

/// Compensation force w_out . tanh(W_in x + b_in).
double forward(const NnCompensator& net, const NnInput& in);

/// Gradient of the output w.r.t. w_out: the hidden activation vector.
std::array<double, NnCompensator::hidden_size> grad_output_weights(
    const NnCompensator& net, const NnInput& in);

/// eta_max outside the |s0| <= delta band, eta_min inside.
double learning_rate(double s0, const NnCompensator& net);

/// Euler step of w_out_dot = -eta(s0) * s0 * grad; hidden layer stays frozen.
NnCompensator weight_update(const NnCompensator& net, double s0, const NnInput& in,
                            double dt);

}  // namespace crane
