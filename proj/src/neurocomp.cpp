#include "crane/neurocomp.hpp"

#include <cmath>

#include "crane/rng.hpp"

namespace crane {

NnCompensator NnCompensator::make(double eta_min, double eta_max, double delta,
                                  std::uint64_t seed) {
    NnCompensator net;
    net.eta_min = eta_min;
    net.eta_max = eta_max;
    net.delta = delta;
    net.rng_seed = seed;
    std::uint64_t k = 0;
    for (auto& w : net.W_in) w = uniform_range(seed, k++, -0.5, 0.5);
    for (auto& b : net.b_in) b = uniform_range(seed, k++, -0.5, 0.5);
    net.w_out.fill(0.0);
    return net;
}

std::array<double, NnCompensator::hidden_size> NnCompensator::hidden(
    const NnInput& in) const {
    const double x[input_size] = {in.x, in.x_dot, in.w_tip, in.w_dot_tip};
    std::array<double, hidden_size> h{};
    for (int j = 0; j < hidden_size; ++j) {
        double a = b_in[j];
        for (int i = 0; i < input_size; ++i) a += W_in[j * input_size + i] * x[i];
        h[j] = std::tanh(a);
    }
    return h;
}

std::vector<double> NnCompensator::snapshot() const {
    std::vector<double> flat;
    flat.reserve(W_in.size() + b_in.size() + w_out.size());
    flat.insert(flat.end(), W_in.begin(), W_in.end());
    flat.insert(flat.end(), b_in.begin(), b_in.end());
    flat.insert(flat.end(), w_out.begin(), w_out.end());
    return flat;
}

double forward(const NnCompensator& net, const NnInput& in) {
    const auto h = net.hidden(in);
    double u = 0.0;
    for (int j = 0; j < NnCompensator::hidden_size; ++j) u += net.w_out[j] * h[j];
    return u;
}

std::array<double, NnCompensator::hidden_size> grad_output_weights(
    const NnCompensator& net, const NnInput& in) {
    return net.hidden(in);
}

double learning_rate(double s0, const NnCompensator& net) {
    return std::abs(s0) > net.delta ? net.eta_max : net.eta_min;
}

NnCompensator weight_update(const NnCompensator& net, double s0, const NnInput& in,
                            double dt) {
    const double eta = learning_rate(s0, net);
    const auto grad = grad_output_weights(net, in);
    NnCompensator next = net;
    for (int j = 0; j < NnCompensator::hidden_size; ++j)
        next.w_out[j] = net.w_out[j] - eta * s0 * grad[j] * dt;
    return next;
}

}  // namespace crane
