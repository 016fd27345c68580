#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "crane/errors.hpp"

namespace crane {

enum class DisturbanceKind { none, low_freq, high_freq, random };

/// Scalar external force F(t) applied to the payload as a uniform F/L load.
/// The random kind adds zero-mean gaussian noise held constant over each
/// controller period (counter-based draw, bit-reproducible).
struct DisturbanceSpec {
    DisturbanceKind kind = DisturbanceKind::none;
    double amp1 = 0.0;       // first sinusoid amplitude (N), sign included
    double freq1 = 0.3;      // Hz
    double amp2 = 0.0;       // second sinusoid (random kind only)
    double freq2 = 5.0;      // Hz
    double noise_std = 0.0;  // N
    std::uint64_t rng_seed = 0;
    double noise_hold_dt = 0.1;  // zero-order-hold interval for the noise (s)

    void validate() const;

    static DisturbanceSpec none_spec();
    static DisturbanceSpec low(double amp = -50.0, double freq = 0.3);
    static DisturbanceSpec high(double amp = 50.0, double freq = 8.0);
    static DisturbanceSpec random(double amp_low, double freq_low, double amp_mid,
                                  double freq_mid, double noise_std,
                                  std::uint64_t seed, double hold_dt);
};

double disturbance_force(const DisturbanceSpec& spec, double t);

enum class ReferenceKind { smooth_step, multi_target };

/// Piecewise-constant targets joined by quintic blends (zero velocity and
/// acceleration at both ends of every blend).
struct ReferenceSpec {
    ReferenceKind kind = ReferenceKind::smooth_step;
    /// (window end time, target position); windows are contiguous from t = 0.
    std::vector<std::pair<double, double>> targets;
    double rise_time = 2.0;

    void validate() const;

    double final_target() const { return targets.back().second; }
    double last_window_end() const { return targets.back().first; }
    /// Time at which the first blend completes.
    double first_rise_end() const { return rise_time; }

    static ReferenceSpec smooth_step(double target, double horizon, double rise_time);
    static ReferenceSpec multi_target(std::vector<std::pair<double, double>> targets,
                                      double rise_time);
};

struct ReferenceSample {
    double x_d = 0.0;
    double x_d_dot = 0.0;
};

/// Reference position/velocity at time t. Beyond the last window the value
/// clamps to the final target; *out_of_range (when given) is set so the
/// caller can log the excursion.
ReferenceSample reference(const ReferenceSpec& spec, double t,
                          bool* out_of_range = nullptr);

}  // namespace crane
