#include <doctest.h>

#include "guarding/core.hpp"
#include "guarding/rng.hpp"

using namespace guarding;

TEST_CASE("parameter validation") {
    SUBCASE("published parameter sets are valid") {
        CHECK_NOTHROW(make_params(0.6, 0.35, 1.0));
        CHECK_NOTHROW(make_params(0.7, 0.2, kInfiniteLength));
        CHECK_NOTHROW(make_params(0.7, 0.0, 1.0));  // static target
    }
    SUBCASE("outrun assumption is strict") {
        // 0.7 == 1 - 0.3 exactly: boundary rejected
        CHECK_THROWS_AS(make_params(0.7, 0.3, 1.0), InvalidParams);
        try {
            make_params(0.7, 0.3, 1.0);
        } catch (const InvalidParams& e) {
            CHECK(e.violation == InvalidParams::Violation::DefenderCannotOutrun);
        }
    }
    SUBCASE("attacker must outrun the target") {
        CHECK_THROWS_AS(make_params(0.2, 0.3, 1.0), InvalidParams);
        CHECK_THROWS_AS(make_params(0.3, 0.3, 1.0), InvalidParams);
    }
    SUBCASE("sign and length gates") {
        CHECK_THROWS_AS(make_params(-0.1, 0.05, 1.0), InvalidParams);
        CHECK_THROWS_AS(make_params(0.5, -0.05, 1.0), InvalidParams);
        CHECK_THROWS_AS(make_params(0.5, 0.2, 0.0), InvalidParams);
        CHECK_THROWS_AS(make_params(0.5, 0.2, -2.0), InvalidParams);
    }
    SUBCASE("valid parameters are fully ordered") {
        CounterRng rng(11);
        for (int i = 0; i < 200; ++i) {
            const double vt = rng.uniform(0.0, 0.49);
            const double va = vt + (1.0 - 2.0 * vt) * rng.uniform(0.01, 0.99);
            const GameParams p = make_params(va, vt, 1.0);
            CHECK(p.target_speed >= 0.0);
            CHECK(p.target_speed < p.attacker_speed);
            CHECK(p.attacker_speed < 1.0 - p.target_speed);
            CHECK(1.0 - p.target_speed <= 1.0);
        }
    }
}

TEST_CASE("frame transform") {
    SUBCASE("shift by the target position") {
        const MovingFrameState s = to_moving_frame({1.0, 0.0}, {0.5, -0.2}, {0.5, 0.0});
        CHECK(s.defender_x == doctest::Approx(0.5));
        CHECK(s.attacker_x == doctest::Approx(0.0));
        CHECK(s.attacker_y == doctest::Approx(-0.2));
    }
    SUBCASE("zero target offset is the identity") {
        const MovingFrameState s = to_moving_frame({0.3, 0.0}, {-0.1, -0.7}, {0.0, 0.0});
        CHECK(s.defender_x == 0.3);
        CHECK(s.attacker_x == -0.1);
        CHECK(s.attacker_y == -0.7);
    }
    SUBCASE("defender off the target line is rejected") {
        CHECK_THROWS_AS(to_moving_frame({0.5, 0.1}, {0.0, -0.2}, {0.0, 0.0}), InconsistentState);
    }
    SUBCASE("round trip recovers the inertial inputs") {
        CounterRng rng(5);
        for (int i = 0; i < 200; ++i) {
            const InertialPoint target{rng.uniform(-3, 3), rng.uniform(-3, 3)};
            const InertialPoint d{rng.uniform(-3, 3), target.y};
            const InertialPoint a{rng.uniform(-3, 3), rng.uniform(-3, 3)};
            const auto [d2, a2] = from_moving_frame(to_moving_frame(d, a, target), target);
            CHECK(std::abs(d2.x - d.x) <= 1e-12);
            CHECK(std::abs(d2.y - d.y) <= 1e-12);
            CHECK(std::abs(a2.x - a.x) <= 1e-12);
            CHECK(std::abs(a2.y - a.y) <= 1e-12);
        }
    }
}

TEST_CASE("side classification") {
    SUBCASE("attacker ahead") {
        CHECK(side_of({0.5, 0.75, -0.2}) == Side::AttackerAhead);
        CHECK(side_sign(Side::AttackerAhead) == 1.0);
    }
    SUBCASE("defender ahead") {
        CHECK(side_of({0.5, 0.0, -0.15}) == Side::DefenderAhead);
        CHECK(side_sign(Side::DefenderAhead) == -1.0);
    }
    SUBCASE("capture surface is rejected") {
        CHECK_THROWS_AS(side_of({0.5, 0.5, -0.2}), AtCaptureSurface);
        CHECK_THROWS_AS(side_of({0.5, 0.5 + 1e-10, -0.2}), AtCaptureSurface);
    }
    SUBCASE("negating the separation flips the side") {
        CounterRng rng(7);
        for (int i = 0; i < 200; ++i) {
            const double xd = rng.uniform(-1, 1);
            const double dx = rng.uniform(0.01, 2.0);
            const double y = rng.uniform(-1, -0.01);
            CHECK(side_of({xd, xd + dx, y}) == Side::AttackerAhead);
            CHECK(side_of({xd, xd - dx, y}) == Side::DefenderAhead);
        }
    }
}

TEST_CASE("mirror reduction") {
    SUBCASE("above the line mirrors") {
        const auto [s, mirrored] = mirror_to_canonical({0.5, 0.0, 0.15});
        CHECK(mirrored);
        CHECK(s.attacker_y == -0.15);
    }
    SUBCASE("below the line is untouched") {
        const auto [s, mirrored] = mirror_to_canonical({0.5, 0.3, -0.2});
        CHECK_FALSE(mirrored);
        CHECK(s.attacker_y == -0.2);
    }
    SUBCASE("on the line is untouched, flag false") {
        const auto [s, mirrored] = mirror_to_canonical({0.5, 0.3, 0.0});
        CHECK_FALSE(mirrored);
        CHECK(s.attacker_y == 0.0);
    }
    SUBCASE("involution is bit exact") {
        CounterRng rng(13);
        for (int i = 0; i < 200; ++i) {
            const MovingFrameState s{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
            MovingFrameState twice{s.defender_x, s.attacker_x, -(-s.attacker_y)};
            CHECK(twice.attacker_y == s.attacker_y);
            // heading un-mirror applied twice is also the identity
            const UnitHeading h{0.6, 0.8};
            const UnitHeading back = unmirror_heading(unmirror_heading(h, true), true);
            CHECK(back.sin_phi == h.sin_phi);
        }
    }
}
