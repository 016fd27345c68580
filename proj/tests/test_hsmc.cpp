#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "crane/hsmc.hpp"
#include "crane/rng.hpp"

using namespace crane;

namespace {

HsmcGains table_gains() {
    HsmcGains g;  // defaults mirror the profile
    g.K0 = 1.0;
    g.phi0 = g.phi1 = g.phi2 = 0.1;
    return g;
}

}  // namespace

TEST_CASE("sat function") {
    CHECK(sat(0.0, 0.1) == 0.0);
    // v = phi gives exactly 1/2
    CHECK(sat(0.1, 0.1) == doctest::Approx(0.5).epsilon(1e-15));
    // large argument approaches 1: 1000/1000.1
    CHECK(sat(1000.0, 0.1) == doctest::Approx(1000.0 / 1000.1).epsilon(1e-12));
    CHECK(sat(1000.0, 0.1) > 0.9999);
    CHECK_THROWS_AS(sat(1.0, 0.0), NonPositivePhi);
    CHECK_THROWS_AS(sat(1.0, -0.5), NonPositivePhi);

    SUBCASE("bounded, odd, monotone") {
        double prev = -1.0;
        for (int k = 0; k <= 2000; ++k) {
            const double v = -1e6 + k * 1e3;
            const double y = sat(v, 0.05);
            CHECK(std::abs(y) < 1.0);
            CHECK(sat(-v, 0.05) == doctest::Approx(-y).epsilon(1e-15));
            CHECK(y >= prev);
            prev = y;
        }
    }
}

TEST_CASE("surface s1") {
    const HsmcGains g = table_gains();
    CHECK(surface_s1(0.0, 0.0, 0.0, g) == 0.0);
    // 400 * 0.1
    CHECK(surface_s1(0.1, 0.0, 0.0, g) == doctest::Approx(40.0).epsilon(1e-14));
    // 400*0.1 + 5*0.5 + 150*0.02 = 45.5
    CHECK(surface_s1(0.1, 0.5, 0.02, g) == doctest::Approx(45.5).epsilon(1e-14));

    SUBCASE("linear in all arguments") {
        for (int k = 0; k < 100; ++k) {
            const double e = uniform_range(31, 3 * k, -1.0, 1.0);
            const double ie = uniform_range(31, 3 * k + 1, -1.0, 1.0);
            const double ed = uniform_range(31, 3 * k + 2, -1.0, 1.0);
            const double two = surface_s1(2 * e, 2 * ie, 2 * ed, g);
            CHECK(two == doctest::Approx(2 * surface_s1(e, ie, ed, g)).epsilon(1e-12));
        }
    }
}

TEST_CASE("surface s2") {
    const HsmcGains g = table_gains();
    CHECK(surface_s2(0.0, 0.0, 0.0, 0.0, 0.0, g) == 0.0);
    // Kd2*x_ddot + alpha*x_ddot = 50 + 0.2
    CHECK(surface_s2(0.0, 0.0, 1.0, 0.0, 0.0, g) == doctest::Approx(50.2).epsilon(1e-14));
    // Kp2*(-0.1) + Kd2*(0 - 0.1) + beta*0.05 = -10 - 5 + 0.025
    CHECK(surface_s2(-0.1, 0.0, 0.0, 0.1, 0.05, g) ==
          doctest::Approx(-14.975).epsilon(1e-14));
    // e2 must equal -w_dot_tip
    CHECK_THROWS_AS(surface_s2(0.1, 0.0, 0.0, 0.1, 0.0, g), InconsistentVelocityError);
}

TEST_CASE("surface s0") {
    CHECK(surface_s0(0.0, 0.0, 3.0) == 0.0);
    CHECK(surface_s0(40.0, -14.975, 1.0) == doctest::Approx(25.025).epsilon(1e-14));
    CHECK(surface_s0(1.0, -1.0, 5.0) == 0.0);
}

TEST_CASE("switching sigma") {
    HsmcGains g = table_gains();
    g.delta = 0.05;
    g.alpha1 = 2.0;
    g.alpha2 = 1.0;
    CHECK(switching_sigma(0.1, g) == 2.0);
    CHECK(switching_sigma(-0.1, g) == 2.0);
    CHECK(switching_sigma(0.01, g) == 1.0);
    // boundary belongs to the small-error branch
    CHECK(switching_sigma(0.05, g) == 1.0);
    CHECK(switching_sigma(-0.05, g) == 1.0);

    SUBCASE("branch rule is scale invariant") {
        for (int k = 0; k < 200; ++k) {
            const double s0 = uniform_range(32, 2 * k, -1.0, 1.0);
            const double c = uniform_range(32, 2 * k + 1, 0.1, 50.0);
            HsmcGains scaled = g;
            scaled.delta = g.delta * c;
            CHECK(switching_sigma(s0, g) == switching_sigma(s0 * c, scaled));
        }
    }
}

TEST_CASE("adaptive update") {
    CHECK(adaptive_update(0.3, 0.0, 2.5, 0.1) == 0.3);
    // 0 - 2.5 * 0.1^2 * 0.1
    CHECK(adaptive_update(0.0, 0.1, 2.5, 0.1) == doctest::Approx(-0.0025).epsilon(1e-15));

    // two unit-s0 updates drop theta by 2 * gamma * dt
    const double gamma = 2.5, dt = 0.1;
    double theta = 0.7;
    theta = adaptive_update(theta, 1.0, gamma, dt);
    theta = adaptive_update(theta, 1.0, gamma, dt);
    CHECK(theta == doctest::Approx(0.7 - 2.0 * gamma * dt).epsilon(1e-14));

    SUBCASE("never increases") {
        double th = 5.0;
        for (int k = 0; k < 300; ++k) {
            const double s0 = uniform_range(33, k, -4.0, 4.0);
            const double next = adaptive_update(th, s0, gamma, dt);
            CHECK(next <= th);
            th = next;
        }
    }
}

TEST_CASE("control step equilibrium") {
    const HsmcGains g = table_gains();
    const auto r = control_step({}, {}, {}, g, 0.0, 0.1);
    CHECK(r.breakdown.u_total == 0.0);
    CHECK(r.breakdown.u_sm0 == 0.0);
    CHECK(r.breakdown.u_sm1 == 0.0);
    CHECK(r.breakdown.u_sm2 == 0.0);
    CHECK(r.breakdown.u_ad == 0.0);
    CHECK(r.breakdown.u_nn == 0.0);
}

TEST_CASE("control step against hand-evaluated reaching laws") {
    HsmcGains g = table_gains();  // phi* = 0.1, K0 = 1
    PlantObservation obs;
    obs.x = 0.1;  // e1 = x - x_d = 0.1 with a zero reference

    const auto r = control_step(obs, {}, {}, g, 0.0, 0.1);
    CHECK(r.breakdown.s1 == doctest::Approx(40.0).epsilon(1e-14));
    CHECK(r.breakdown.s2 == 0.0);
    CHECK(r.breakdown.s0 == doctest::Approx(40.0).epsilon(1e-14));

    // u_sm1 = -Ks1 * sat(s1/phi1, phi1) = -10 * 400/400.1; same for u_sm0.
    const double expect_sm = -10.0 * (400.0 / 400.1);
    CHECK(expect_sm == doctest::Approx(-9.99750062).epsilon(1e-8));
    CHECK(r.breakdown.u_sm1 == doctest::Approx(expect_sm).epsilon(1e-12));
    CHECK(r.breakdown.u_sm0 == doctest::Approx(expect_sm).epsilon(1e-12));
    CHECK(r.breakdown.u_sm2 == 0.0);
    CHECK(r.breakdown.u_total == doctest::Approx(2.0 * expect_sm).epsilon(1e-12));
    CHECK(r.breakdown.u_total > g.u_min);

    // first call: integrals accumulate after the surfaces are formed
    CHECK(r.state.int_e1 == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(r.state.prev_s1 == doctest::Approx(40.0).epsilon(1e-14));
}

TEST_CASE("control step clamps to the actuator bounds") {
    HsmcGains g = table_gains();
    g.u_max = 200.0;
    g.u_min = -200.0;
    HsmcState st;
    st.theta_hat = -5000.0;  // adaptive term alone would ask for far more
    PlantObservation obs;
    obs.x = -1.0;
    const auto r = control_step(obs, {}, st, g, 0.0, 0.1);
    CHECK(r.breakdown.u_total == 200.0);

    obs.x = 1.0;
    const auto r2 = control_step(obs, {}, st, g, 0.0, 0.1);
    CHECK(r2.breakdown.u_total == -200.0);
}

TEST_CASE("control step total stays within bounds under fuzzing") {
    const HsmcGains g = table_gains();
    HsmcState st;
    for (int k = 0; k < 2000; ++k) {
        PlantObservation obs;
        obs.x = uniform_range(34, 7 * k, -3.0, 3.0);
        obs.x_dot = uniform_range(34, 7 * k + 1, -3.0, 3.0);
        obs.x_ddot_prev = uniform_range(34, 7 * k + 2, -5.0, 5.0);
        obs.w_dot_tip = uniform_range(34, 7 * k + 3, -2.0, 2.0);
        obs.w_slope_tip = uniform_range(34, 7 * k + 4, -0.5, 0.5);
        Reference ref{uniform_range(34, 7 * k + 5, -2.0, 2.0),
                      uniform_range(34, 7 * k + 6, -1.0, 1.0)};
        const auto r = control_step(obs, ref, st, g, uniform01(35, k) * 10.0 - 5.0, 0.1);
        CHECK(r.breakdown.u_total >= g.u_min);
        CHECK(r.breakdown.u_total <= g.u_max);
        CHECK(r.breakdown.u_total ==
              std::clamp(r.breakdown.u_sm0 + r.breakdown.u_sm1 + r.breakdown.u_sm2 +
                             r.breakdown.sigma * r.breakdown.u_ad + r.breakdown.u_nn,
                         g.u_min, g.u_max));
        st = r.state;
    }
    // theta_hat decreased monotonically along the fuzzed trajectory
    CHECK(st.theta_hat <= 0.0);
}

TEST_CASE("control step is deterministic") {
    const HsmcGains g = table_gains();
    PlantObservation obs{0.3, -0.2, 0.5, 0.1, -0.02};
    Reference ref{1.0, 0.1};
    HsmcState st;
    st.int_e1 = 0.4;
    st.theta_hat = -2.0;
    st.prev_s1 = 3.0;
    st.initialized = true;
    const auto a = control_step(obs, ref, st, g, 1.5, 0.1);
    const auto b = control_step(obs, ref, st, g, 1.5, 0.1);
    CHECK(a.breakdown.u_total == b.breakdown.u_total);
    CHECK(a.breakdown.u_sm1 == b.breakdown.u_sm1);
    CHECK(a.state.theta_hat == b.state.theta_hat);
    CHECK(a.state.int_e1 == b.state.int_e1);
}

TEST_CASE("non-finite observations are rejected") {
    const HsmcGains g = table_gains();
    PlantObservation obs;
    obs.x = std::nan("");
    CHECK_THROWS_AS(control_step(obs, {}, {}, g, 0.0, 0.1), ObservationNotFinite);
    PlantObservation obs2;
    CHECK_THROWS_AS(control_step(obs2, {}, {}, g, std::nan(""), 0.1),
                    ObservationNotFinite);
}

TEST_CASE("sign reaching variant") {
    HsmcGains g = table_gains();
    g.sign_reaching = true;
    PlantObservation obs;
    obs.x = 0.1;
    const auto r = control_step(obs, {}, {}, g, 0.0, 0.1);
    // relay output: -Ks1 * sign(40) etc.
    CHECK(r.breakdown.u_sm1 == doctest::Approx(-10.0).epsilon(1e-15));
    CHECK(r.breakdown.u_sm0 == doctest::Approx(-10.0).epsilon(1e-15));
}

TEST_CASE("theta telescoping over a synthetic trajectory") {
    const HsmcGains g = table_gains();
    HsmcState st;
    double accum = 0.0;
    const double dt = 0.1;
    for (int k = 0; k < 500; ++k) {
        PlantObservation obs;
        obs.x = 0.2 * std::sin(0.07 * k);
        obs.w_dot_tip = 0.05 * std::cos(0.11 * k);
        const auto r = control_step(obs, {}, st, g, 0.0, dt);
        accum += r.breakdown.s0 * r.breakdown.s0 * dt;
        st = r.state;
    }
    CHECK(st.theta_hat == doctest::Approx(-g.gamma * accum).epsilon(1e-9));
}
