// Times the OpenMP plant kernels against the serial reference routes:
//  - biharmonic stencil, parallel vs plain loop
//  - coupled derivative solve, structured O(n) vs dense factorization
// Grids far beyond the production default expose the scaling.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "crane/plant.hpp"

using crane::PlantParams;
using crane::PlantState;

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch())
        .count();
}

template <typename F>
double time_best_ms(F&& fn, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = now_ms();
        fn();
        best = std::min(best, now_ms() - t0);
    }
    return best;
}

PlantState bent_state(const PlantParams& p) {
    PlantState s = PlantState::rest(p.n_nodes);
    const double dy = p.dy();
    for (int i = 0; i < p.n_nodes; ++i) {
        const double y = i * dy;
        s.w[i] = 0.02 * (y / p.L) * (y / p.L);
        s.w_dot[i] = 0.01 * std::sin(y);
    }
    s.w[0] = s.w_dot[0] = 0.0;
    s.x_dot = 0.3;
    return s;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif

    std::printf("\n-- biharmonic stencil --\n");
    std::printf("%10s %14s %14s %8s\n", "n", "serial (ms)", "parallel (ms)", "speedup");
    for (int n : {1 << 12, 1 << 15, 1 << 18, 1 << 21}) {
        std::vector<double> w(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = std::sin(0.01 * i);
        const double dy = 1.0 / (n - 1);
        volatile double sink = 0.0;
        const double ts = time_best_ms(
            [&] { sink = sink + crane::serial_ref::beam_fourth_derivative(w, dy)[1]; }, 5);
        const double tp =
            time_best_ms([&] { sink = sink + crane::beam_fourth_derivative(w, dy)[1]; }, 5);
        std::printf("%10d %14.3f %14.3f %8.2f\n", n, ts, tp, ts / tp);
    }

    std::printf("\n-- coupled derivative solve --\n");
    std::printf("%10s %17s %16s %8s\n", "n_nodes", "dense ref (ms)", "structured (ms)",
                "ratio");
    for (int n : {21, 101, 501, 2001}) {
        PlantParams p;
        p.n_nodes = n;
        const PlantState s = bent_state(p);
        const std::vector<double> load(static_cast<std::size_t>(n), 1.0);
        volatile double sink = 0.0;
        const double td = time_best_ms(
            [&] { sink = sink + crane::serial_ref::plant_derivatives(s, p, 50.0, load).x_ddot; },
            3);
        const double ts = time_best_ms(
            [&] { sink = sink + crane::plant_derivatives(s, p, 50.0, load).x_ddot; }, 3);
        std::printf("%10d %17.3f %16.3f %8.1f\n", n, td, ts, td / ts);
    }
    return 0;
}
