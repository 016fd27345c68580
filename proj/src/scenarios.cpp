#include "crane/scenarios.hpp"

#include <cmath>

#include "crane/plant.hpp"
#include "crane/rng.hpp"

namespace crane {

void DisturbanceSpec::validate() const {
    if (kind != DisturbanceKind::none) {
        if (!(freq1 > 0.0) || (kind == DisturbanceKind::random && !(freq2 > 0.0)))
            throw InvalidParams("DisturbanceSpec: frequencies must be > 0");
    }
    if (noise_std < 0.0) throw InvalidParams("DisturbanceSpec: noise_std must be >= 0");
    if (!(noise_hold_dt > 0.0))
        throw InvalidParams("DisturbanceSpec: noise hold interval must be > 0");
}

DisturbanceSpec DisturbanceSpec::none_spec() { return {}; }

DisturbanceSpec DisturbanceSpec::low(double amp, double freq) {
    DisturbanceSpec s;
    s.kind = DisturbanceKind::low_freq;
    s.amp1 = amp;
    s.freq1 = freq;
    return s;
}

DisturbanceSpec DisturbanceSpec::high(double amp, double freq) {
    DisturbanceSpec s;
    s.kind = DisturbanceKind::high_freq;
    s.amp1 = amp;
    s.freq1 = freq;
    return s;
}

DisturbanceSpec DisturbanceSpec::random(double amp_low, double freq_low, double amp_mid,
                                        double freq_mid, double noise_std,
                                        std::uint64_t seed, double hold_dt) {
    DisturbanceSpec s;
    s.kind = DisturbanceKind::random;
    s.amp1 = amp_low;
    s.freq1 = freq_low;
    s.amp2 = amp_mid;
    s.freq2 = freq_mid;
    s.noise_std = noise_std;
    s.rng_seed = seed;
    s.noise_hold_dt = hold_dt;
    return s;
}

double disturbance_force(const DisturbanceSpec& spec, double t) {
    switch (spec.kind) {
        case DisturbanceKind::none:
            return 0.0;
        case DisturbanceKind::low_freq:
        case DisturbanceKind::high_freq:
            return spec.amp1 * std::sin(2.0 * kPi * spec.freq1 * t);
        case DisturbanceKind::random: {
            const double det = spec.amp1 * std::sin(2.0 * kPi * spec.freq1 * t) +
                               spec.amp2 * std::sin(2.0 * kPi * spec.freq2 * t);
            // The epsilon absorbs roundoff in t/hold when t sits exactly on a
            // period boundary.
            const auto k = static_cast<std::uint64_t>(
                std::floor(t / spec.noise_hold_dt + 1e-9));
            return det + spec.noise_std * gaussian(spec.rng_seed, k);
        }
    }
    return 0.0;
}

void ReferenceSpec::validate() const {
    if (targets.empty()) throw InvalidParams("ReferenceSpec: needs at least one target");
    double prev_end = 0.0;
    for (const auto& [end, pos] : targets) {
        if (!(end > prev_end))
            throw InvalidParams("ReferenceSpec: windows must be contiguous and increasing");
        if (!std::isfinite(pos)) throw InvalidParams("ReferenceSpec: non-finite target");
        prev_end = end;
    }
    if (!(rise_time > 0.0)) throw InvalidParams("ReferenceSpec: rise_time must be > 0");
}

ReferenceSpec ReferenceSpec::smooth_step(double target, double horizon, double rise) {
    ReferenceSpec s;
    s.kind = ReferenceKind::smooth_step;
    s.targets = {{horizon, target}};
    s.rise_time = rise;
    return s;
}

ReferenceSpec ReferenceSpec::multi_target(std::vector<std::pair<double, double>> targets,
                                          double rise) {
    ReferenceSpec s;
    s.kind = ReferenceKind::multi_target;
    s.targets = std::move(targets);
    s.rise_time = rise;
    return s;
}

namespace {

// Quintic blend p0 -> p1 over [t0, t0 + rise]: zero velocity and
// acceleration at both ends.
ReferenceSample quintic(double p0, double p1, double t0, double rise, double t) {
    if (t <= t0) return {p0, 0.0};
    if (t >= t0 + rise) return {p1, 0.0};
    const double tau = (t - t0) / rise;
    const double h = tau * tau * tau * (10.0 + tau * (-15.0 + 6.0 * tau));
    const double hd = 30.0 * tau * tau * (1.0 + tau * (-2.0 + tau)) / rise;
    return {p0 + (p1 - p0) * h, (p1 - p0) * hd};
}

}  // namespace

ReferenceSample reference(const ReferenceSpec& spec, double t, bool* out_of_range) {
    if (out_of_range) *out_of_range = false;
    if (t < 0.0) throw InvalidParams("reference: t must be >= 0");

    double window_start = 0.0;
    double prev_target = 0.0;  // initial trolley position
    for (const auto& [end, pos] : spec.targets) {
        if (t <= end) return quintic(prev_target, pos, window_start, spec.rise_time, t);
        window_start = end;
        prev_target = pos;
    }
    if (out_of_range) *out_of_range = true;
    return {spec.final_target(), 0.0};
}

}  // namespace crane
