#pragma once
/// @file infinite.hpp
/// @brief Closed-form equilibrium strategies and Value for a target spanning
/// the whole x-axis, plus the adjoint/coefficient bundle reused everywhere.
///
/// All functions here assume the canonical orientation (attacker_y <= 0);
/// mirror reduction happens at the public decide() boundary in finite.hpp.

#include <cmath>

#include "guarding/core.hpp"

namespace guarding {

/// Per-side coefficient bundle.
///
/// lambda is +1/-1 for attacker/defender ahead, rho = 1 + lambda * v_T is the
/// defender's relevant closing speed, and eta is the positive multiplier the
/// terminal-constraint adjoint takes on an equilibrium trajectory.
struct InfiniteCoefficients {
    Side side;
    double lambda;
    double rho;
    double alpha;  ///< 1 + v_T
    double beta;   ///< 1 - v_T
    double eta;
};

/// Positive adjoint multiplier eta = sqrt(rho^2 - v_A^2) / v_A.
/// Real and positive for every valid parameter set.
inline double adjoint_eta(const GameParams& p, Side side) {
    const double rho = 1.0 + side_sign(side) * p.target_speed;
    return std::sqrt(rho * rho - p.attacker_speed * p.attacker_speed) / p.attacker_speed;
}

inline InfiniteCoefficients coefficients(const GameParams& p, Side side) {
    const double lambda = side_sign(side);
    return InfiniteCoefficients{side,
                                lambda,
                                1.0 + lambda * p.target_speed,
                                1.0 + p.target_speed,
                                1.0 - p.target_speed,
                                adjoint_eta(p, side)};
}

/// Constant adjoint vector along an equilibrium trajectory: (-lambda, lambda, eta).
struct AdjointVector {
    double sigma_defender_x;
    double sigma_attacker_x;
    double sigma_attacker_y;
};

inline AdjointVector equilibrium_adjoints(const GameParams& p, Side side) {
    const double lambda = side_sign(side);
    return AdjointVector{-lambda, lambda, adjoint_eta(p, side)};
}

/// Equilibrium attacker heading against an infinite target:
/// cos = lambda * v_A / rho, sin = sqrt(rho^2 - v_A^2) / rho.
/// The sin component is strictly positive (attacker climbs toward the target).
inline UnitHeading infinite_heading(const GameParams& p, Side side) {
    const double lambda = side_sign(side);
    const double rho = 1.0 + lambda * p.target_speed;
    const double va = p.attacker_speed;
    return UnitHeading{lambda * va / rho, std::sqrt(rho * rho - va * va) / rho};
}

/// Bang-bang defender control: drive at full speed toward the attacker's side.
inline double defender_control(Side side) { return side_sign(side); }

/// Slope of the relative-position (X, Y) trajectory under constant controls:
/// m = v_A sin / (v_A cos - w - v_T). Throws DegenerateSlope when the relative
/// horizontal speed vanishes (cannot happen for equilibrium inputs).
inline double relative_slope(const GameParams& p, const UnitHeading& h, double defender_w) {
    const double den = p.attacker_speed * h.cos_phi - defender_w - p.target_speed;
    if (std::abs(den) < 1e-12) {
        throw DegenerateSlope("relative horizontal speed vanishes; XY slope undefined");
    }
    return p.attacker_speed * h.sin_phi / den;
}

/// Equilibrium relative slope in closed form:
/// m1 = v_A sqrt(rho^2 - v_A^2) / (lambda v_A^2 - rho (lambda + v_T)).
/// Equals relative_slope on the equilibrium heading and control.
inline double equilibrium_relative_slope(const GameParams& p, Side side) {
    const double lambda = side_sign(side);
    const double va = p.attacker_speed;
    const double rho = 1.0 + lambda * p.target_speed;
    return va * std::sqrt(rho * rho - va * va) / (lambda * va * va - rho * (lambda + p.target_speed));
}

/// Which branch of the finite-target solution produced a decision.
enum class Regime { InfiniteForm, EndpointAim };

/// Complete equilibrium answer for one state: attacker heading (inertial
/// frame, already un-mirrored), defender control, relative-trajectory slope,
/// Value, and the regime that produced it.
///
/// A negative value means the defender wins; its magnitude is reported as-is
/// as a threat level rather than a realizable miss distance.
struct EquilibriumDecision {
    UnitHeading heading;
    double defender_w = 0.0;
    double slope = 0.0;
    double value = 0.0;
    Regime regime = Regime::InfiniteForm;
    Side side = Side::AttackerAhead;
    bool mirrored = false;
};

namespace detail {

/// Value of a straight-line attacker plan that reaches the target line at
/// x = landing_x after flight_time, against the bang-bang defender w = lambda:
/// the relative separation at arrival, signed so that positive means the
/// attacker is clear of the defender.
inline double plan_value(double lambda, double landing_x, double flight_time, double defender_x) {
    return lambda * (landing_x - defender_x) - flight_time;
}

}  // namespace detail

/// Equilibrium decision and Value for the infinite-length target.
/// Requires canonical orientation (attacker_y <= 0).
inline EquilibriumDecision decide_infinite(const MovingFrameState& s, const GameParams& p) {
    const Side side = side_of(s);
    const double lambda = side_sign(side);
    const UnitHeading h = infinite_heading(p, side);
    const double w = defender_control(side);

    // Straight moving-frame flight to the target line; vertical speed is
    // strictly positive so the terminal-line case attacker_y = 0 degrades
    // gracefully to flight_time = 0 and value = |X|.
    const double vx = p.attacker_speed * h.cos_phi - p.target_speed;
    const double vy = p.attacker_speed * h.sin_phi;
    const double flight_time = -s.attacker_y / vy;
    const double landing_x = s.attacker_x + vx * flight_time;

    EquilibriumDecision d;
    d.heading = h;
    d.defender_w = w;
    d.slope = relative_slope(p, h, w);
    d.value = detail::plan_value(lambda, landing_x, flight_time, s.defender_x);
    d.regime = Regime::InfiniteForm;
    d.side = side;
    return d;
}

/// Hamiltonian of the game for given adjoints and controls:
/// sigma_xD * w + sigma_xA * (v_A cos - v_T) + sigma_yA * v_A sin.
/// Identically zero along equilibrium play with equilibrium adjoints.
inline double hamiltonian(const GameParams& p, const AdjointVector& sigma, double defender_w,
                          const UnitHeading& h) {
    return sigma.sigma_defender_x * defender_w +
           sigma.sigma_attacker_x * (p.attacker_speed * h.cos_phi - p.target_speed) +
           sigma.sigma_attacker_y * p.attacker_speed * h.sin_phi;
}

/// Closed-form retrograde equilibrium velocities of the attacker in the
/// moving frame (time running backward from the terminal surface). The
/// forward velocities are their componentwise negation.
inline std::pair<double, double> retrograde_attacker_velocity(const GameParams& p, Side side) {
    const double lambda = side_sign(side);
    const double va = p.attacker_speed;
    const double rho = 1.0 + lambda * p.target_speed;
    const double ratio = va / rho;
    return {p.target_speed - lambda * va * va / rho, -va * std::sqrt(1.0 - ratio * ratio)};
}

}  // namespace guarding
