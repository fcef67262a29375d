#pragma once
/// @file core.hpp
/// @brief Domain types for the segment-guarding game: parameters, the
/// target-fixed ("moving") frame, side classification and mirror reduction.
///
/// Everything downstream works in the moving frame attached to the target
/// segment: the segment occupies [0, L] on the x-axis, the defender rides the
/// segment, the attacker moves freely in the plane. Speeds are normalized so
/// the defender's speed along the segment is 1.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace guarding {

/// Half-width of the capture surface |x_A - x_D| below which the side of the
/// attacker (and hence the whole strategy structure) is undefined.
inline constexpr double kEpsCapture = 1e-9;

/// Maximum distance the defender may be off the target line before the
/// inertial-to-moving-frame transform refuses the state.
inline constexpr double kDefenderLineTol = 1e-9;

/// Distinguished length value for a target spanning the entire x-axis.
inline constexpr double kInfiniteLength = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A speed/length combination violating the problem assumptions.
struct InvalidParams : Error {
    enum class Violation { PositiveSpeeds, AttackerSlowerThanTarget, DefenderCannotOutrun, NonPositiveLength };
    Violation violation;
    InvalidParams(Violation v, const std::string& msg) : Error(msg), violation(v) {}
};

/// Defender not on the target line in the inertial frame.
struct InconsistentState : Error {
    using Error::Error;
};

/// Query made exactly on the capture surface x_A = x_D, where the side
/// (and the feedback strategies) are undefined.
struct AtCaptureSurface : Error {
    using Error::Error;
};

/// Trajectory slope requested for controls with no horizontal relative motion.
struct DegenerateSlope : Error {
    using Error::Error;
};

/// Aim geometry degenerates (attacker sitting on its aim point).
struct DegenerateGeometry : Error {
    using Error::Error;
};

/// Barrier extraction found no sign change in the requested window.
struct NoBarrier : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

/// Validated game parameters.
///
/// attacker_speed (v_A) and target_speed (v_T) are fractions of the
/// defender's unit speed along the segment; length is the segment length or
/// kInfiniteLength. Valid parameters satisfy 0 <= v_T < v_A < 1 - v_T, so the
/// attacker outruns the target (it can catch up from behind) and the defender
/// outruns the attacker along the x-axis. v_T = 0 is the static-target
/// degenerate case.
struct GameParams {
    double attacker_speed = 0.0;
    double target_speed = 0.0;
    double length = kInfiniteLength;

    [[nodiscard]] bool finite() const { return std::isfinite(length); }
};

/// Validates and constructs GameParams. Throws InvalidParams naming the
/// violated assumption.
inline GameParams make_params(double attacker_speed, double target_speed, double length) {
    using V = InvalidParams::Violation;
    if (!(attacker_speed > 0.0) || !(target_speed >= 0.0)) {
        throw InvalidParams(V::PositiveSpeeds,
                            "attacker speed must be positive and target speed non-negative");
    }
    if (!(attacker_speed > target_speed)) {
        throw InvalidParams(V::AttackerSlowerThanTarget,
                            "attacker must be faster than the target (v_A > v_T)");
    }
    if (!(attacker_speed < 1.0 - target_speed)) {
        throw InvalidParams(V::DefenderCannotOutrun,
                            "defender must be able to outrun the attacker (v_A < 1 - v_T)");
    }
    if (!(length > 0.0)) {
        throw InvalidParams(V::NonPositiveLength, "target length must be positive");
    }
    return GameParams{attacker_speed, target_speed, length};
}

// ---------------------------------------------------------------------------
// State
// ---------------------------------------------------------------------------

/// Full game state in the moving frame: defender coordinate on the target
/// axis and attacker position. The defender's y-coordinate is identically 0.
struct MovingFrameState {
    double defender_x = 0.0;
    double attacker_x = 0.0;
    double attacker_y = 0.0;
};

/// Attacker position relative to the defender; the plane in which the
/// equilibrium trajectories are straight lines.
struct RelativeState {
    double x = 0.0;  ///< attacker_x - defender_x
    double y = 0.0;  ///< attacker_y

    static RelativeState of(const MovingFrameState& s) {
        return {s.attacker_x - s.defender_x, s.attacker_y};
    }
};

/// Which side of the defender the attacker is on. Selects the strategy
/// regime; never constructed on the capture surface itself.
enum class Side { AttackerAhead, DefenderAhead };

/// Sign convention attached to Side: +1 when the attacker is ahead.
inline constexpr double side_sign(Side s) {
    return s == Side::AttackerAhead ? 1.0 : -1.0;
}

inline Side side_of(const MovingFrameState& s, double eps_capture = kEpsCapture) {
    const double dx = s.attacker_x - s.defender_x;
    if (std::abs(dx) < eps_capture) {
        throw AtCaptureSurface("attacker and defender share an x-coordinate; side undefined");
    }
    return dx > 0.0 ? Side::AttackerAhead : Side::DefenderAhead;
}

/// Attacker heading direction in the inertial frame, stored as the cosine and
/// sine of the heading angle. Unit norm by construction.
struct UnitHeading {
    double cos_phi = 1.0;
    double sin_phi = 0.0;

    [[nodiscard]] double norm_error() const {
        return std::abs(cos_phi * cos_phi + sin_phi * sin_phi - 1.0);
    }
};

// ---------------------------------------------------------------------------
// Frame transforms
// ---------------------------------------------------------------------------

/// A point in the inertial frame.
struct InertialPoint {
    double x = 0.0;
    double y = 0.0;
};

/// Shifts inertial defender/attacker positions into the frame attached to the
/// target reference point. The defender must lie on the target line.
inline MovingFrameState to_moving_frame(const InertialPoint& defender,
                                        const InertialPoint& attacker,
                                        const InertialPoint& target) {
    if (std::abs(defender.y - target.y) > kDefenderLineTol) {
        throw InconsistentState("defender is not on the target line");
    }
    return MovingFrameState{defender.x - target.x, attacker.x - target.x, attacker.y - target.y};
}

/// Inverse of to_moving_frame for a given target reference point.
inline std::pair<InertialPoint, InertialPoint> from_moving_frame(const MovingFrameState& s,
                                                                 const InertialPoint& target) {
    return {InertialPoint{s.defender_x + target.x, target.y},
            InertialPoint{s.attacker_x + target.x, s.attacker_y + target.y}};
}

// ---------------------------------------------------------------------------
// Mirror reduction
// ---------------------------------------------------------------------------

/// Canonical analysis orientation has the attacker below the target line
/// (attacker_y < 0). States above are solved on their mirror image; heading
/// outputs must have their sin component negated before being reported for
/// the original state.
struct MirrorResult {
    MovingFrameState state;
    bool mirrored = false;
};

inline MirrorResult mirror_to_canonical(const MovingFrameState& s) {
    if (s.attacker_y > 0.0) {
        return {MovingFrameState{s.defender_x, s.attacker_x, -s.attacker_y}, true};
    }
    return {s, false};
}

/// Maps a heading computed for the canonical (mirrored) state back to the
/// original orientation.
inline UnitHeading unmirror_heading(const UnitHeading& h, bool mirrored) {
    return mirrored ? UnitHeading{h.cos_phi, -h.sin_phi} : h;
}

}  // namespace guarding
