#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crane/plant.hpp"
#include "crane/scenarios.hpp"

using namespace crane;

TEST_CASE("disturbance presets") {
    SUBCASE("none") {
        const auto spec = DisturbanceSpec::none_spec();
        for (double t : {0.0, 0.5, 3.7}) CHECK(disturbance_force(spec, t) == 0.0);
    }

    SUBCASE("low frequency") {
        const auto spec = DisturbanceSpec::low();
        CHECK(disturbance_force(spec, 0.0) == 0.0);
        // quarter period of 0.3 Hz: -50 * sin(pi/2)
        const double tq = 1.0 / (4.0 * 0.3);
        CHECK(disturbance_force(spec, tq) == doctest::Approx(-50.0).epsilon(1e-9));
    }

    SUBCASE("high frequency") {
        const auto spec = DisturbanceSpec::high();
        // quarter period of 8 Hz: +50
        CHECK(disturbance_force(spec, 1.0 / 32.0) == doctest::Approx(50.0).epsilon(1e-9));
    }

    SUBCASE("amplitude bounds hold everywhere") {
        const auto low = DisturbanceSpec::low();
        const auto high = DisturbanceSpec::high();
        for (int k = 0; k <= 20000; ++k) {
            const double t = k * 1e-3;
            CHECK(std::abs(disturbance_force(low, t)) <= 50.0 + 1e-12);
            CHECK(std::abs(disturbance_force(high, t)) <= 50.0 + 1e-12);
        }
    }
}

TEST_CASE("random disturbance") {
    const auto spec = DisturbanceSpec::random(20.0, 0.3, 20.0, 5.0, 20.0, 99, 0.1);

    SUBCASE("bit reproducible") {
        for (int k = 0; k < 100; ++k) {
            const double t = 0.05 * k;
            CHECK(disturbance_force(spec, t) == disturbance_force(spec, t));
        }
        auto other = spec;
        other.rng_seed = 100;
        bool any_diff = false;
        for (int k = 0; k < 100 && !any_diff; ++k)
            any_diff = disturbance_force(spec, 0.1 * k) != disturbance_force(other, 0.1 * k);
        CHECK(any_diff);
    }

    SUBCASE("sinusoidal part is the exact two-tone sum") {
        auto noiseless = spec;
        noiseless.noise_std = 0.0;
        for (int k = 0; k < 500; ++k) {
            const double t = 0.013 * k;
            const double expect = 20.0 * std::sin(2.0 * kPi * 0.3 * t) +
                                  20.0 * std::sin(2.0 * kPi * 5.0 * t);
            CHECK(disturbance_force(noiseless, t) ==
                  doctest::Approx(expect).epsilon(1e-12));
            CHECK(std::abs(expect) <= 40.0 + 1e-12);
        }
    }

    SUBCASE("noise is held constant across one controller period") {
        auto det = spec;
        det.noise_std = 0.0;
        const double n1 = disturbance_force(spec, 0.301) - disturbance_force(det, 0.301);
        const double n2 = disturbance_force(spec, 0.399) - disturbance_force(det, 0.399);
        const double n3 = disturbance_force(spec, 0.401) - disturbance_force(det, 0.401);
        CHECK(n1 == doctest::Approx(n2).epsilon(1e-12));
        CHECK(n1 != n3);
    }

    SUBCASE("period boundaries bucket consistently under roundoff") {
        auto det = spec;
        det.noise_std = 0.0;
        // 7 * 0.1 is not exactly 0.7 in binary; the draw must still come from
        // bucket 7.
        const double t7 = 7 * 0.1;
        const double b7 = disturbance_force(spec, 0.75) - disturbance_force(det, 0.75);
        const double at7 = disturbance_force(spec, t7) - disturbance_force(det, t7);
        CHECK(at7 == doctest::Approx(b7).epsilon(1e-12));
    }

    SUBCASE("validation") {
        auto bad = spec;
        bad.freq1 = 0.0;
        CHECK_THROWS_AS(bad.validate(), InvalidParams);
        bad = spec;
        bad.noise_std = -1.0;
        CHECK_THROWS_AS(bad.validate(), InvalidParams);
    }
}

TEST_CASE("smooth step reference") {
    const auto spec = ReferenceSpec::smooth_step(1.2, 20.0, 2.0);
    const auto at0 = reference(spec, 0.0);
    CHECK(at0.x_d == 0.0);
    CHECK(at0.x_d_dot == 0.0);

    for (double t : {2.0, 5.0, 19.9}) {
        const auto s = reference(spec, t);
        CHECK(s.x_d == doctest::Approx(1.2).epsilon(1e-12));
        CHECK(s.x_d_dot == 0.0);
    }

    // monotone rise within the blend
    double prev = -1.0;
    for (int k = 0; k <= 100; ++k) {
        const auto s = reference(spec, 0.02 * k);
        CHECK(s.x_d >= prev - 1e-12);
        prev = s.x_d;
    }
}

TEST_CASE("multi target reference") {
    const auto spec =
        ReferenceSpec::multi_target({{10.0, 1.0}, {20.0, 2.0}, {30.0, 3.0}}, 2.0);

    CHECK(reference(spec, 0.0).x_d == 0.0);
    CHECK(reference(spec, 9.5).x_d == doctest::Approx(1.0).epsilon(1e-12));
    const auto mid = reference(spec, 15.0);
    CHECK(mid.x_d == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(mid.x_d_dot == 0.0);
    CHECK(reference(spec, 29.9).x_d == doctest::Approx(3.0).epsilon(1e-12));

    SUBCASE("clamps beyond the last window and reports it") {
        bool oor = false;
        const auto s = reference(spec, 31.0, &oor);
        CHECK(oor);
        CHECK(s.x_d == 3.0);
        CHECK(s.x_d_dot == 0.0);
        reference(spec, 15.0, &oor);
        CHECK(!oor);
    }

    SUBCASE("velocity vanishes at every window boundary") {
        for (double t : {0.0, 10.0, 20.0, 30.0}) {
            CHECK(reference(spec, t).x_d_dot == 0.0);
        }
    }

    SUBCASE("position and velocity are continuous and consistent") {
        const double h = 1e-6;
        for (int k = 1; k < 3000; ++k) {
            const double t = 0.01 * k;
            const auto plus = reference(spec, t + h);
            const auto minus = reference(spec, t - h);
            const auto mid2 = reference(spec, t);
            CHECK(std::abs(plus.x_d - minus.x_d) < 3.0 * h + 1e-9);  // no jumps
            const double fd = (plus.x_d - minus.x_d) / (2.0 * h);
            CHECK(fd == doctest::Approx(mid2.x_d_dot).epsilon(1e-4));
        }
    }
}

TEST_CASE("reference validation") {
    ReferenceSpec bad;
    CHECK_THROWS_AS(bad.validate(), InvalidParams);  // no targets
    bad = ReferenceSpec::multi_target({{10.0, 1.0}, {5.0, 2.0}}, 2.0);
    CHECK_THROWS_AS(bad.validate(), InvalidParams);  // windows not increasing
    CHECK_THROWS_AS(reference(ReferenceSpec::smooth_step(1.0, 10.0, 2.0), -0.1),
                    InvalidParams);
}
