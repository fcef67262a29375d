#pragma once
/// @file finite.hpp
/// @brief Equilibrium strategies and Value for the finite-length target:
/// validity test of the infinite-form heading, endpoint-aiming fallback, and
/// the mirror-aware public entry point decide().

#include <cmath>

#include "guarding/core.hpp"
#include "guarding/infinite.hpp"

namespace guarding {

/// X-axis intercept of the attacker's inertial straight-line path under the
/// infinite-form heading, together with that line's slope tan(phi*).
/// slope = sqrt(rho^2 - v_A^2) / (lambda v_A).
struct AimPoint {
    double slope = 0.0;
    double x_intercept = 0.0;
};

/// Requires canonical orientation (attacker_y < 0) and a defined side.
inline AimPoint aim_point(const MovingFrameState& s, const GameParams& p, Side side) {
    (void)side_of(s);  // reject capture-surface queries
    const double lambda = side_sign(side);
    const double va = p.attacker_speed;
    const double rho = 1.0 + lambda * p.target_speed;
    const double slope = std::sqrt(rho * rho - va * va) / (lambda * va);
    return AimPoint{slope, s.attacker_x - s.attacker_y / slope};
}

/// Closed-interval containment test of the aim intercept in [0, L]; the
/// boundary counts as valid so the two regimes agree at the seam.
inline bool infinite_form_valid(const AimPoint& aim, double length) {
    return aim.x_intercept >= 0.0 && aim.x_intercept <= length;
}

/// Point on the target line that the attacker actually reaches in the moving
/// frame when flying the infinite-form heading: the target's own motion
/// drags the landing point left of the inertial intercept, and this is the
/// quantity the regime decision and the aim-point oracle agree on.
/// Requires canonical orientation (attacker_y <= 0).
inline double infinite_form_landing_x(const MovingFrameState& s, const GameParams& p, Side side) {
    const UnitHeading h = infinite_heading(p, side);
    const double vx = p.attacker_speed * h.cos_phi - p.target_speed;
    const double vy = p.attacker_speed * h.sin_phi;  // strictly positive
    return s.attacker_x - s.attacker_y * vx / vy;
}

/// Endpoint-aiming geometry: the moving-frame unit heading toward the target
/// endpoint E on the attacker's side, and the moving-frame speed the attacker
/// attains on that heading.
struct EndpointGeometry {
    double endpoint_x = 0.0;      ///< (1 + lambda) L / 2, i.e. 0 or L
    double distance = 0.0;        ///< attacker-to-endpoint distance
    double cos_hat = 0.0;         ///< moving-frame heading cosine toward E
    double sin_hat = 0.0;         ///< moving-frame heading sine toward E
    double moving_speed = 0.0;    ///< resolved moving-frame speed
};

namespace detail {

/// Moving-frame speed attainable on a fixed moving-frame unit heading
/// (cos_hat, sin_hat): the positive root of
/// v_A^2 = v_T^2 + v^2 + 2 v_T v cos_hat (triangle of inertial, target and
/// moving-frame velocities).
inline double moving_speed_on_heading(const GameParams& p, double cos_hat, double sin_hat) {
    const double vt = p.target_speed;
    const double va = p.attacker_speed;
    return -vt * cos_hat + std::sqrt(va * va - vt * vt * sin_hat * sin_hat);
}

/// Inertial heading realizing a straight moving-frame flight at moving_speed
/// along (cos_hat, sin_hat); unit norm by the velocity-triangle identity.
inline UnitHeading inertial_heading_from_moving(const GameParams& p, double moving_speed,
                                                double cos_hat, double sin_hat) {
    return UnitHeading{(moving_speed * cos_hat + p.target_speed) / p.attacker_speed,
                       moving_speed * sin_hat / p.attacker_speed};
}

}  // namespace detail

/// Geometry of flying straight (in the moving frame) to an arbitrary point
/// (aim_x, 0) on the target line. Works in either orientation.
inline EndpointGeometry aim_geometry(const MovingFrameState& s, const GameParams& p, double aim_x) {
    const double dx = aim_x - s.attacker_x;
    const double d = std::hypot(dx, s.attacker_y);
    if (d < 1e-12) {
        throw DegenerateGeometry("attacker is already at the aim point");
    }
    EndpointGeometry g;
    g.endpoint_x = aim_x;
    g.distance = d;
    g.cos_hat = dx / d;
    g.sin_hat = -s.attacker_y / d + 0.0;  // +0.0 normalizes the signed zero on the line
    g.moving_speed = detail::moving_speed_on_heading(p, g.cos_hat, g.sin_hat);
    return g;
}

/// Endpoint-aiming geometry toward E = 0 or L chosen by the side.
/// Requires the attacker away from E and canonical orientation.
inline EndpointGeometry endpoint_heading(const MovingFrameState& s, const GameParams& p, Side side) {
    const double endpoint_x = (1.0 + side_sign(side)) * p.length / 2.0;
    return aim_geometry(s, p, endpoint_x);
}

/// Equilibrium decision for the finite-length target.
///
/// If the infinite-form flight lands on the segment it stays optimal;
/// otherwise the attacker concedes separation and aims at the segment
/// endpoint on its own side. Requires canonical orientation.
inline EquilibriumDecision decide_finite(const MovingFrameState& s, const GameParams& p) {
    const Side side = side_of(s);
    const double lambda = side_sign(side);

    if (!p.finite()) {
        return decide_infinite(s, p);
    }
    const double landing_x = infinite_form_landing_x(s, p, side);
    if (landing_x >= 0.0 && landing_x <= p.length) {
        return decide_infinite(s, p);
    }

    const EndpointGeometry g = endpoint_heading(s, p, side);
    const UnitHeading h = detail::inertial_heading_from_moving(p, g.moving_speed, g.cos_hat, g.sin_hat);
    const double w = defender_control(side);
    const double flight_time = g.distance / g.moving_speed;

    EquilibriumDecision d;
    d.heading = h;
    d.defender_w = w;
    d.slope = relative_slope(p, h, w);
    d.value = detail::plan_value(lambda, g.endpoint_x, flight_time, s.defender_x);
    d.regime = Regime::EndpointAim;
    d.side = side;
    return d;
}

/// Public entry point: mirrors the state to canonical orientation, solves,
/// and reports the heading for the original orientation.
inline EquilibriumDecision decide(const MovingFrameState& s, const GameParams& p) {
    const MirrorResult m = mirror_to_canonical(s);
    EquilibriumDecision d = decide_finite(m.state, p);
    d.heading = unmirror_heading(d.heading, m.mirrored);
    d.mirrored = m.mirrored;
    return d;
}

/// The point on the target line the equilibrium attacker flies to from this
/// (canonical-orientation) state: the infinite-form landing when it lies on
/// the segment, the side endpoint otherwise.
inline double equilibrium_aim_x(const MovingFrameState& s, const GameParams& p) {
    const Side side = side_of(s);
    const double landing_x = infinite_form_landing_x(s, p, side);
    if (!p.finite() || (landing_x >= 0.0 && landing_x <= p.length)) {
        return landing_x;
    }
    return (1.0 + side_sign(side)) * p.length / 2.0;
}

}  // namespace guarding
