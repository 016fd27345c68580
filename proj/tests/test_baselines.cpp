#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crane/baselines.hpp"
#include "crane/rng.hpp"

using namespace crane;

TEST_CASE("pid basics") {
    PidGains g;
    g.kp = 100.0;
    g.ki = 0.0;
    g.kd = 0.0;
    PidState st;

    SUBCASE("zero error gives zero output") {
        for (int k = 0; k < 5; ++k) CHECK(pid_step(g, 0.0, 0.1, st) == 0.0);
    }

    SUBCASE("pure proportional") {
        CHECK(pid_step(g, 0.5, 0.1, st) == doctest::Approx(50.0).epsilon(1e-14));
    }

    SUBCASE("output clamps to the shared actuator bound") {
        CHECK(pid_step(g, 2.5, 0.1, st) == 200.0);  // raw request 250 N
        CHECK(pid_step(g, -9.0, 0.1, st) == -200.0);
    }
}

TEST_CASE("pid integral clamp and derivative") {
    PidGains g;
    g.kp = 0.0;
    g.ki = 1.0;
    g.kd = 0.0;
    g.int_clamp = 2.0;
    PidState st;
    for (int k = 0; k < 1000; ++k) pid_step(g, 1.0, 0.1, st);
    CHECK(st.integral == 2.0);  // anti-windup

    PidGains gd;
    gd.kp = 0.0;
    gd.ki = 0.0;
    gd.kd = 10.0;
    PidState std_state;
    CHECK(pid_step(gd, 1.0, 0.1, std_state) == 0.0);  // no derivative on first sample
    CHECK(pid_step(gd, 1.5, 0.1, std_state) == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("pid determinism and clamp under fuzzing") {
    PidGains g;
    PidState a, b;
    for (int k = 0; k < 5000; ++k) {
        const double e = uniform_range(61, k, -5.0, 5.0);
        const double ua = pid_step(g, e, 0.1, a);
        const double ub = pid_step(g, e, 0.1, b);
        CHECK(ua == ub);
        CHECK(ua >= g.u_min);
        CHECK(ua <= g.u_max);
    }
}

TEST_CASE("lqr double integrator closed form") {
    // A = [[0,1],[0,0]], B = [0,1]', Q = I, R = 1 has K = [1, sqrt(3)].
    LtiModel m;
    m.A = Eigen::MatrixXd::Zero(2, 2);
    m.A(0, 1) = 1.0;
    m.B = Eigen::MatrixXd::Zero(2, 1);
    m.B(1, 0) = 1.0;
    const Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(2, 2);
    Eigen::MatrixXd R(1, 1);
    R(0, 0) = 1.0;

    const auto d = lqr_design(m, Q, R);
    CHECK(std::abs(d.K(0, 0) - 1.0) < 1e-8);
    CHECK(std::abs(d.K(0, 1) - std::sqrt(3.0)) < 1e-8);

    SUBCASE("gain is invariant under joint cost scaling") {
        const auto d2 = lqr_design(m, 9.0 * Q, 9.0 * R);
        CHECK(d2.K(0, 0) == doctest::Approx(d.K(0, 0)).epsilon(1e-9));
        CHECK(d2.K(0, 1) == doctest::Approx(d.K(0, 1)).epsilon(1e-9));
    }

    SUBCASE("closed loop is Hurwitz") {
        const Eigen::MatrixXd Acl = m.A - m.B * d.K;
        const auto eigs = Acl.eigenvalues();
        for (int i = 0; i < eigs.size(); ++i) CHECK(eigs(i).real() < 0.0);
    }
}

TEST_CASE("care residual is tight on the crane linearization") {
    PlantParams p;
    const LtiModel m = crane_linearization(p);

    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(4, 4);
    Q.diagonal() << 100.0, 10.0, 10.0, 1.0;
    Eigen::MatrixXd R(1, 1);
    R(0, 0) = 0.01;

    const Eigen::MatrixXd P = care_solve(m.A, m.B, Q, R);
    const Eigen::MatrixXd res = m.A.transpose() * P + P * m.A -
                                P * m.B * R.inverse() * m.B.transpose() * P + Q;
    CHECK(res.norm() < 1e-8);

    const auto d = lqr_design(m, Q, R);
    const auto eigs = (m.A - m.B * d.K).eigenvalues();
    for (int i = 0; i < eigs.size(); ++i) CHECK(eigs(i).real() < 0.0);
}

TEST_CASE("crane linearization structure") {
    PlantParams p;
    const LtiModel m = crane_linearization(p);
    REQUIRE(m.A.rows() == 4);
    REQUIRE(m.B.rows() == 4);
    // kinematic rows
    CHECK(m.A(0, 1) == 1.0);
    CHECK(m.A(2, 3) == 1.0);
    CHECK(m.A(0, 0) == 0.0);
    // pushing the trolley accelerates it and back-drives the tip
    CHECK(m.B(1, 0) > 0.0);
    CHECK(m.B(3, 0) != 0.0);
    // undriven beam mode is oscillatory and damped
    const auto eigs = m.A.eigenvalues();
    bool has_oscillatory = false;
    for (int i = 0; i < eigs.size(); ++i)
        if (std::abs(eigs(i).imag()) > 1e-6) {
            has_oscillatory = true;
            CHECK(eigs(i).real() < 0.0);
        }
    CHECK(has_oscillatory);
}

TEST_CASE("lqr step") {
    LtiModel m;
    m.A = Eigen::MatrixXd::Zero(2, 2);
    m.A(0, 1) = 1.0;
    m.B = Eigen::MatrixXd::Zero(2, 1);
    m.B(1, 0) = 1.0;
    auto d = lqr_design(m, Eigen::MatrixXd::Identity(2, 2),
                        Eigen::MatrixXd::Identity(1, 1));
    d.u_min = -200.0;
    d.u_max = 200.0;

    Eigen::VectorXd x(2), ref(2);
    x << 1.0, 0.0;
    ref = x;
    CHECK(lqr_step(d, x, ref) == 0.0);

    ref << 0.0, 0.0;
    CHECK(lqr_step(d, x, ref) == doctest::Approx(-d.K(0, 0)).epsilon(1e-12));

    x << 1e6, 0.0;
    CHECK(lqr_step(d, x, ref) == -200.0);
}

TEST_CASE("unstabilizable pair is rejected") {
    LtiModel m;
    m.A = Eigen::MatrixXd::Identity(2, 2);  // unstable, unreachable
    m.B = Eigen::MatrixXd::Zero(2, 1);
    CHECK_THROWS_AS(lqr_design(m, Eigen::MatrixXd::Identity(2, 2),
                               Eigen::MatrixXd::Identity(1, 1)),
                    NotStabilizable);
}
