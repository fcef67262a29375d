#include <doctest.h>

#include "guarding/finite.hpp"
#include "guarding/rng.hpp"
#include "oracles.hpp"

using namespace guarding;

namespace {
const GameParams kParams = make_params(0.6, 0.35, 1.0);
const MovingFrameState kAttackerWin{0.5, 0.0, -0.15};  // canonical form of scenario 1
const MovingFrameState kDefenderWin{0.5, 0.75, -0.2};  // scenario 2
}  // namespace

TEST_CASE("aim point of the infinite-form line") {
    SUBCASE("frozen values for both scenarios") {
        const AimPoint a2 = aim_point(kDefenderWin, kParams, Side::AttackerAhead);
        CHECK(a2.slope == doctest::Approx(2.015565).epsilon(1e-6));
        CHECK(a2.x_intercept == doctest::Approx(0.849228).epsilon(1e-6));

        const AimPoint a1 = aim_point(kAttackerWin, kParams, Side::DefenderAhead);
        CHECK(a1.slope == doctest::Approx(-0.416667).epsilon(1e-6));
        CHECK(a1.x_intercept == doctest::Approx(-0.36).epsilon(1e-9));
    }
    SUBCASE("slope is the tangent of the equilibrium heading") {
        for (Side side : {Side::AttackerAhead, Side::DefenderAhead}) {
            const UnitHeading h = infinite_heading(kParams, side);
            const AimPoint a = aim_point(side == Side::AttackerAhead ? kDefenderWin : kAttackerWin,
                                         kParams, side);
            CHECK(a.slope == doctest::Approx(h.sin_phi / h.cos_phi).epsilon(1e-12));
        }
    }
    SUBCASE("intercept approaches the attacker position near the target line") {
        const MovingFrameState near{0.5, 0.3, -1e-9};
        const AimPoint a = aim_point(near, kParams, Side::DefenderAhead);
        CHECK(a.x_intercept == doctest::Approx(0.3).epsilon(1e-8));
    }
    SUBCASE("capture surface rejected") {
        CHECK_THROWS_AS(aim_point({0.5, 0.5, -0.2}, kParams, Side::AttackerAhead), AtCaptureSurface);
    }
}

TEST_CASE("infinite-form validity window") {
    CHECK(infinite_form_valid(AimPoint{2.015565, 0.849228}, 1.0));
    CHECK_FALSE(infinite_form_valid(AimPoint{-0.416667, -0.36}, 1.0));
    CHECK(infinite_form_valid(AimPoint{1.0, 0.0}, 1.0));
    CHECK(infinite_form_valid(AimPoint{1.0, 1.0}, 1.0));
    CHECK_FALSE(infinite_form_valid(AimPoint{1.0, 1.0 + 1e-12}, 1.0));
}

TEST_CASE("moving-frame landing of the infinite-form ray") {
    SUBCASE("matches the marched ray") {
        for (const MovingFrameState& s : {kAttackerWin, kDefenderWin}) {
            const Side side = side_of(s);
            const double landing = infinite_form_landing_x(s, kParams, side);
            const double marched =
                oracles::moving_ray_crossing(s, kParams, infinite_heading(kParams, side));
            CHECK(std::abs(landing - marched) <= 1e-5);
        }
    }
    SUBCASE("frozen values") {
        CHECK(infinite_form_landing_x(kAttackerWin, kParams, Side::DefenderAhead) ==
              doctest::Approx(-0.5875).epsilon(1e-9));
        CHECK(infinite_form_landing_x(kDefenderWin, kParams, Side::AttackerAhead) ==
              doctest::Approx(0.718991).epsilon(1e-6));
    }
    SUBCASE("landing sits left of the inertial intercept for a moving target") {
        CounterRng rng(23);
        for (int i = 0; i < 200; ++i) {
            const MovingFrameState s{rng.uniform(0, 1), rng.uniform(-1, 2), rng.uniform(-1.5, -0.05)};
            if (std::abs(s.attacker_x - s.defender_x) < 1e-3) continue;
            const Side side = side_of(s);
            CHECK(infinite_form_landing_x(s, kParams, side) <
                  aim_point(s, kParams, side).x_intercept + 1e-12);
        }
    }
}

TEST_CASE("endpoint aiming geometry") {
    SUBCASE("frozen scenario-1 geometry") {
        const EndpointGeometry g = endpoint_heading(kAttackerWin, kParams, Side::DefenderAhead);
        CHECK(g.endpoint_x == 0.0);
        CHECK(g.cos_hat == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(g.sin_hat == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(g.moving_speed == doctest::Approx(0.487340).epsilon(1e-6));
        CHECK(g.moving_speed ==
              doctest::Approx(oracles::speed_quadratic_root(0.6, 0.35, 0.0)).epsilon(1e-12));
    }
    SUBCASE("static target resolves to the inertial speed") {
        const GameParams st = make_params(0.7, 0.0, 1.0);
        const EndpointGeometry g = endpoint_heading({0.5, 1.4, -0.3}, st, Side::AttackerAhead);
        CHECK(g.moving_speed == doctest::Approx(0.7).epsilon(1e-14));
    }
    SUBCASE("perpendicular approach") {
        const EndpointGeometry g = endpoint_heading({0.7, 1.0, -0.4}, kParams, Side::AttackerAhead);
        CHECK(g.endpoint_x == 1.0);
        CHECK(g.cos_hat == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(g.sin_hat == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(g.moving_speed == doctest::Approx(std::sqrt(0.36 - 0.1225)).epsilon(1e-14));
    }
    SUBCASE("attacker at the endpoint is degenerate") {
        CHECK_THROWS_AS(aim_geometry({0.5, 0.0, 0.0}, kParams, 0.0), DegenerateGeometry);
    }
    SUBCASE("velocity-triangle identity holds everywhere") {
        CounterRng rng(29);
        for (int i = 0; i < 10000; ++i) {
            const MovingFrameState s{rng.uniform(0, 1), rng.uniform(-1, 2), rng.uniform(-1.5, -0.01)};
            if (std::abs(s.attacker_x - s.defender_x) < 1e-3) continue;
            const EndpointGeometry g = endpoint_heading(s, kParams, side_of(s));
            const double lhs = kParams.target_speed * kParams.target_speed +
                               g.moving_speed * g.moving_speed +
                               2.0 * kParams.target_speed * g.moving_speed * g.cos_hat;
            CHECK(std::abs(lhs - kParams.attacker_speed * kParams.attacker_speed) <= 1e-12);
        }
    }
}

TEST_CASE("finite-target decision") {
    SUBCASE("published attacker-win scenario") {
        const EquilibriumDecision d = decide_finite(kAttackerWin, kParams);
        CHECK(d.regime == Regime::EndpointAim);
        CHECK(d.heading.cos_phi == doctest::Approx(0.583333).epsilon(1e-6));
        CHECK(d.heading.sin_phi == doctest::Approx(0.812233).epsilon(1e-6));
        CHECK(d.defender_w == -1.0);
        CHECK(d.slope == doctest::Approx(0.487340).epsilon(1e-6));
        CHECK(d.value == doctest::Approx(0.192206).epsilon(1e-6));
    }
    SUBCASE("published defender-win scenario") {
        const EquilibriumDecision d = decide_finite(kDefenderWin, kParams);
        CHECK(d.regime == Regime::InfiniteForm);
        CHECK(d.value == doctest::Approx(-0.153113).epsilon(1e-6));
        CHECK(d.defender_w == 1.0);
    }
    SUBCASE("mirrored entry point reports the mirrored heading") {
        const EquilibriumDecision d = decide({0.5, 0.0, 0.15}, kParams);
        CHECK(d.mirrored);
        CHECK(d.regime == Regime::EndpointAim);
        CHECK(d.value == doctest::Approx(0.192206).epsilon(1e-6));
        CHECK(d.heading.sin_phi == doctest::Approx(-0.812233).epsilon(1e-6));
    }
    SUBCASE("endpoint headings are unit norm") {
        CounterRng rng(31);
        for (int i = 0; i < 10000; ++i) {
            const MovingFrameState s{rng.uniform(0, 1), rng.uniform(-1.5, 2.5), rng.uniform(-2, -0.01)};
            if (std::abs(s.attacker_x - s.defender_x) < 1e-3) continue;
            CHECK(decide_finite(s, kParams).heading.norm_error() <= 1e-12);
        }
    }
    SUBCASE("infinite length always selects the infinite form") {
        const GameParams inf = make_params(0.6, 0.35, kInfiniteLength);
        const EquilibriumDecision d = decide_finite(kAttackerWin, inf);
        CHECK(d.regime == Regime::InfiniteForm);
        CHECK(d.value == doctest::Approx(0.4375).epsilon(1e-12));
    }
}

TEST_CASE("regime continuity at the validity seam") {
    // Place the attacker so the infinite-form flight lands exactly on an
    // endpoint; the two regime branches must produce the same heading.
    CounterRng rng(37);
    for (int i = 0; i < 200; ++i) {
        const Side side = (i % 2 == 0) ? Side::DefenderAhead : Side::AttackerAhead;
        const double endpoint = side == Side::DefenderAhead ? 0.0 : kParams.length;
        const double y = -rng.uniform(0.05, 1.0);
        const UnitHeading h = infinite_heading(kParams, side);
        const double vx = kParams.attacker_speed * h.cos_phi - kParams.target_speed;
        const double vy = kParams.attacker_speed * h.sin_phi;
        const double xa = endpoint + y * vx / vy;  // landing lands exactly on the endpoint
        const double xd = side == Side::DefenderAhead ? rng.uniform(xa + 0.05, 2.0)
                                                      : rng.uniform(-1.0, xa - 0.05);
        if (xd < 0.0 || xd > kParams.length) continue;
        const MovingFrameState seam{xd, xa, y};

        const EquilibriumDecision inf_branch = decide_infinite(seam, kParams);
        const EndpointGeometry g = endpoint_heading(seam, kParams, side);
        const UnitHeading end_heading =
            detail::inertial_heading_from_moving(kParams, g.moving_speed, g.cos_hat, g.sin_hat);
        CHECK(std::abs(inf_branch.heading.cos_phi - end_heading.cos_phi) <= 1e-9);
        CHECK(std::abs(inf_branch.heading.sin_phi - end_heading.sin_phi) <= 1e-9);
    }
}

TEST_CASE("static-target symmetry") {
    const GameParams st = make_params(0.7, 0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i <= 50; ++i) {
        const double xa = -0.5 + 2.0 * i / 50.0;
        for (int j = 0; j < 30; ++j) {
            const double y = -1.0 + 0.95 * j / 29.0;
            const MovingFrameState a{0.5, xa, y};
            const MovingFrameState b{0.5, 1.0 - xa, y};
            if (std::abs(a.attacker_x - 0.5) < 1e-6) continue;
            worst = std::max(worst, std::abs(decide(a, st).value - decide(b, st).value));
        }
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("finite value never exceeds the infinite value") {
    const GameParams inf = make_params(0.6, 0.35, kInfiniteLength);
    CounterRng rng(41);
    for (int i = 0; i < 2000; ++i) {
        const MovingFrameState s{rng.uniform(0, 1), rng.uniform(-1.5, 2.5), rng.uniform(-2, -0.01)};
        if (std::abs(s.attacker_x - s.defender_x) < 1e-3) continue;
        CHECK(decide_finite(s, kParams).value <= decide_infinite(s, inf).value + 1e-12);
    }
}
