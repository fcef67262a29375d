#pragma once
/// @file simulate.hpp
/// @brief Closed-loop simulation of the guarding game under pluggable
/// state-feedback strategies, with bisection-refined terminal events.
///
/// The integrator is fixed-step classical RK4 with sampled-data feedback:
/// strategies are re-evaluated once per step and the controls held constant
/// across the step. Under equilibrium play the controls are constant anyway,
/// so accuracy is governed by event localization, which is refined to
/// event_tol by bisection on the in-step advance map.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "guarding/core.hpp"
#include "guarding/finite.hpp"
#include "guarding/io.hpp"

namespace guarding {

enum class TargetMode { Finite, Infinite };

struct SimConfig {
    double dt = 1e-3;
    double max_time = 100.0;
    double event_tol = 1e-9;       ///< terminal-time localization tolerance
    TargetMode mode = TargetMode::Finite;
    double breach_margin = 1e-6;   ///< slack when testing x_A against [0, L] at breach
    double eps_capture = kEpsCapture;

    static SimConfig for_params(const GameParams& p) {
        SimConfig c;
        c.mode = p.finite() ? TargetMode::Finite : TargetMode::Infinite;
        return c;
    }
};

using AttackerStrategy = std::function<UnitHeading(const MovingFrameState&)>;
using DefenderStrategy = std::function<double(const MovingFrameState&)>;

struct StrategyPair {
    AttackerStrategy attacker;
    DefenderStrategy defender;
};

// ---- Built-in strategies ----------------------------------------------------

inline AttackerStrategy equilibrium_attacker(const GameParams& p) {
    return [p](const MovingFrameState& s) { return decide(s, p).heading; };
}

inline DefenderStrategy equilibrium_defender(const GameParams& p) {
    (void)p;
    return [](const MovingFrameState& s) { return defender_control(side_of(s)); };
}

inline StrategyPair equilibrium_strategies(const GameParams& p) {
    return {equilibrium_attacker(p), equilibrium_defender(p)};
}

inline AttackerStrategy constant_heading(double phi) {
    const UnitHeading h{std::cos(phi), std::sin(phi)};
    return [h](const MovingFrameState&) { return h; };
}

inline AttackerStrategy constant_heading(const UnitHeading& h) {
    return [h](const MovingFrameState&) { return h; };
}

/// Fly straight (in the moving frame) toward the point (aim_x, 0).
inline AttackerStrategy aim_at(const GameParams& p, double aim_x) {
    return [p, aim_x](const MovingFrameState& s) {
        const EndpointGeometry g = aim_geometry(s, p, aim_x);
        return detail::inertial_heading_from_moving(p, g.moving_speed, g.cos_hat, g.sin_hat);
    };
}

inline DefenderStrategy constant_w(double w) {
    const double clamped = std::clamp(w, -1.0, 1.0);
    return [clamped](const MovingFrameState&) { return clamped; };
}

// ---- Outcome ----------------------------------------------------------------

enum class OutcomeKind { AttackerBreach, Capture, OffTargetCrossing, Truncated };

struct Sample {
    double t = 0.0;
    MovingFrameState state;
    double defender_w = 0.0;
    UnitHeading heading;
};

struct Outcome {
    OutcomeKind kind = OutcomeKind::Truncated;
    double t_final = 0.0;
    MovingFrameState final_state;
    double miss = 0.0;  ///< |x_A - x_D| at breach; meaningful for AttackerBreach only
    std::vector<Sample> trajectory;
};

/// Miss distance on attacker breach; no payoff is defined for the other
/// terminal kinds.
inline std::optional<double> payoff(const Outcome& o) {
    if (o.kind == OutcomeKind::AttackerBreach) return o.miss;
    return std::nullopt;
}

namespace detail {

struct Controls {
    UnitHeading heading;
    double w = 0.0;
};

struct Derivs {
    double dxd, dxa, dya;
};

inline Derivs dynamics(const GameParams& p, const Controls& c) {
    return {c.w, p.attacker_speed * c.heading.cos_phi - p.target_speed,
            p.attacker_speed * c.heading.sin_phi};
}

/// One RK4 step with frozen controls, followed by the defender track clamp in
/// finite mode.
inline MovingFrameState advance(const MovingFrameState& s, const GameParams& p, const Controls& c,
                                double h, const SimConfig& cfg) {
    const auto f = [&](const MovingFrameState& x) {
        (void)x;
        return dynamics(p, c);
    };
    const Derivs k1 = f(s);
    const MovingFrameState s2{s.defender_x + 0.5 * h * k1.dxd, s.attacker_x + 0.5 * h * k1.dxa,
                              s.attacker_y + 0.5 * h * k1.dya};
    const Derivs k2 = f(s2);
    const MovingFrameState s3{s.defender_x + 0.5 * h * k2.dxd, s.attacker_x + 0.5 * h * k2.dxa,
                              s.attacker_y + 0.5 * h * k2.dya};
    const Derivs k3 = f(s3);
    const MovingFrameState s4{s.defender_x + h * k3.dxd, s.attacker_x + h * k3.dxa,
                              s.attacker_y + h * k3.dya};
    const Derivs k4 = f(s4);
    MovingFrameState out{
        s.defender_x + h / 6.0 * (k1.dxd + 2.0 * k2.dxd + 2.0 * k3.dxd + k4.dxd),
        s.attacker_x + h / 6.0 * (k1.dxa + 2.0 * k2.dxa + 2.0 * k3.dxa + k4.dxa),
        s.attacker_y + h / 6.0 * (k1.dya + 2.0 * k2.dya + 2.0 * k3.dya + k4.dya)};
    if (cfg.mode == TargetMode::Finite) {
        out.defender_x = std::clamp(out.defender_x, 0.0, p.length);
    }
    return out;
}

/// Earliest in-step time at which `hit` becomes true, refined by bisection to
/// tol. Assumes hit(0) == false and hit(h) == true.
template <class Hit>
double refine_event(const Hit& hit, double h, double tol) {
    double lo = 0.0, hi = h;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (hit(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

inline bool on_segment(double x, const GameParams& p, const SimConfig& cfg) {
    return x >= -cfg.breach_margin && x <= p.length + cfg.breach_margin;
}

}  // namespace detail

/// Forward-integrates the closed-loop game until a terminal surface is hit or
/// max_time elapses. The first event within a step wins; exact ties resolve
/// to capture, matching the terminal-condition precedence of the game.
inline Outcome simulate(const MovingFrameState& initial, const GameParams& p,
                        const StrategyPair& strategies, const SimConfig& cfg) {
    if (!(cfg.dt > 0.0) || !(cfg.event_tol > 0.0) || cfg.event_tol >= cfg.dt) {
        throw Error("simulation config requires 0 < event_tol < dt");
    }

    Outcome out;
    MovingFrameState s = initial;
    double t = 0.0;

    const auto record = [&](const detail::Controls& c) {
        out.trajectory.push_back(Sample{t, s, c.w, c.heading});
    };
    const auto finish = [&](OutcomeKind kind, const detail::Controls& c) {
        out.kind = kind;
        out.t_final = t;
        out.final_state = s;
        if (kind == OutcomeKind::AttackerBreach) {
            out.miss = std::abs(s.attacker_x - s.defender_x);
        }
        record(c);
        return out;
    };
    const auto eval = [&](const MovingFrameState& st) {
        detail::Controls c;
        c.heading = strategies.attacker(st);
        c.w = std::clamp(strategies.defender(st), -1.0, 1.0);
        return c;
    };

    // Initial-state terminal checks. Capture takes precedence; a start on the
    // target line but off the segment is non-terminal.
    if (std::abs(s.attacker_x - s.defender_x) <= cfg.eps_capture) {
        return finish(OutcomeKind::Capture, detail::Controls{});
    }
    if (s.attacker_y == 0.0 &&
        (cfg.mode == TargetMode::Infinite || detail::on_segment(s.attacker_x, p, cfg))) {
        return finish(OutcomeKind::AttackerBreach, detail::Controls{});
    }

    while (t < cfg.max_time) {
        const double h = std::min(cfg.dt, cfg.max_time - t);
        if (!(h > 1e-15)) break;  // remaining time below time resolution
        const detail::Controls c = eval(s);
        const MovingFrameState next = detail::advance(s, p, c, h, cfg);

        const double y0 = s.attacker_y;
        const double x0 = s.attacker_x - s.defender_x;
        const auto rel_x = [&](double th) {
            const MovingFrameState m = detail::advance(s, p, c, th, cfg);
            return m.attacker_x - m.defender_x;
        };
        const auto breach_hit = [&](double th) {
            if (y0 == 0.0) return false;  // non-terminal start on the line, moving away
            const MovingFrameState m = detail::advance(s, p, c, th, cfg);
            return m.attacker_y == 0.0 || (m.attacker_y < 0.0) != (y0 < 0.0);
        };
        const auto capture_hit = [&](double th) {
            const double x = rel_x(th);
            return std::abs(x) <= cfg.eps_capture || (x < 0.0) != (x0 < 0.0);
        };

        double t_breach = std::numeric_limits<double>::infinity();
        double t_capture = std::numeric_limits<double>::infinity();
        if (breach_hit(h)) t_breach = detail::refine_event(breach_hit, h, cfg.event_tol);
        if (capture_hit(h)) t_capture = detail::refine_event(capture_hit, h, cfg.event_tol);

        if (std::isfinite(t_breach) || std::isfinite(t_capture)) {
            const bool capture_first = t_capture <= t_breach + cfg.event_tol;
            const double te = capture_first ? t_capture : t_breach;
            s = detail::advance(s, p, c, te, cfg);
            t += te;
            if (capture_first) {
                return finish(OutcomeKind::Capture, c);
            }
            if (cfg.mode == TargetMode::Finite && !detail::on_segment(s.attacker_x, p, cfg)) {
                return finish(OutcomeKind::OffTargetCrossing, c);
            }
            return finish(OutcomeKind::AttackerBreach, c);
        }

        record(c);
        s = next;
        t += h;
    }

    return finish(OutcomeKind::Truncated, eval(s));
}

// ---- Flow field --------------------------------------------------------------

/// One simulated equilibrium trajectory in the relative (X, Y) plane.
struct FlowLine {
    RelativeState seed;
    OutcomeKind kind = OutcomeKind::Truncated;
    std::vector<RelativeState> points;
};

/// Terminal-event label used in the CSV exports.
inline const char* event_name(OutcomeKind k) {
    switch (k) {
        case OutcomeKind::AttackerBreach: return "breach";
        case OutcomeKind::Capture: return "capture";
        case OutcomeKind::OffTargetCrossing: return "offtarget";
        case OutcomeKind::Truncated: return "truncated";
    }
    return "?";
}

/// Trajectory CSV: one row per sample with the applied controls; the terminal
/// row carries the event label in the trailing column.
inline std::string trajectory_csv(const Outcome& o) {
    std::string out = "t,x_D,x_A,y_A,w,cos_phi,sin_phi,event\n";
    for (size_t i = 0; i < o.trajectory.size(); ++i) {
        const Sample& s = o.trajectory[i];
        out += fmt(s.t);
        out += ',';
        out += fmt(s.state.defender_x);
        out += ',';
        out += fmt(s.state.attacker_x);
        out += ',';
        out += fmt(s.state.attacker_y);
        out += ',';
        out += fmt(s.defender_w);
        out += ',';
        out += fmt(s.heading.cos_phi);
        out += ',';
        out += fmt(s.heading.sin_phi);
        out += ',';
        if (i + 1 == o.trajectory.size()) out += event_name(o.kind);
        out += '\n';
    }
    return out;
}

/// Simulates equilibrium play from each relative-state seed against an
/// infinite target. Seeds on the capture surface are rejected.
inline std::vector<FlowLine> flow_field(const GameParams& p, const std::vector<RelativeState>& seeds,
                                        const SimConfig& cfg_in) {
    SimConfig cfg = cfg_in;
    cfg.mode = TargetMode::Infinite;
    std::vector<FlowLine> lines;
    lines.reserve(seeds.size());
    for (const RelativeState& seed : seeds) {
        if (std::abs(seed.x) < cfg.eps_capture) {
            throw AtCaptureSurface("flow-field seed lies on the capture surface");
        }
        const MovingFrameState s0{0.0, seed.x, seed.y};
        const Outcome o = simulate(s0, p, equilibrium_strategies(p), cfg);
        FlowLine line;
        line.seed = seed;
        line.kind = o.kind;
        line.points.reserve(o.trajectory.size());
        for (const Sample& smp : o.trajectory) {
            line.points.push_back(RelativeState::of(smp.state));
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

/// Flow-field CSV: one row per polyline vertex, keyed by seed index, with the
/// terminal event on every row of its line.
inline std::string flow_field_csv(const std::vector<FlowLine>& lines) {
    std::string out = "seed,t_index,X,Y,event\n";
    for (size_t k = 0; k < lines.size(); ++k) {
        const FlowLine& line = lines[k];
        for (size_t i = 0; i < line.points.size(); ++i) {
            out += std::to_string(k);
            out += ',';
            out += std::to_string(i);
            out += ',';
            out += fmt(line.points[i].x);
            out += ',';
            out += fmt(line.points[i].y);
            out += ',';
            out += event_name(line.kind);
            out += '\n';
        }
    }
    return out;
}

/// SVG rendering of a simulated trajectory in the moving frame: attacker
/// path, defender track and the target segment.
inline std::string trajectory_svg(const Outcome& o, const GameParams& p, int width = 640) {
    double x_lo = 0.0, x_hi = p.finite() ? p.length : 1.0, y_lo = -0.1, y_hi = 0.1;
    for (const Sample& s : o.trajectory) {
        x_lo = std::min({x_lo, s.state.attacker_x, s.state.defender_x});
        x_hi = std::max({x_hi, s.state.attacker_x, s.state.defender_x});
        y_lo = std::min(y_lo, s.state.attacker_y);
        y_hi = std::max(y_hi, s.state.attacker_y);
    }
    const double pad = 0.05 * std::max(x_hi - x_lo, y_hi - y_lo);
    x_lo -= pad, x_hi += pad, y_lo -= pad, y_hi += pad;
    const double sx = width / (x_hi - x_lo);
    const int height = std::max(64, static_cast<int>((y_hi - y_lo) * sx));
    const double sy = height / (y_hi - y_lo);
    const auto px = [&](double x) { return (x - x_lo) * sx; };
    const auto py = [&](double y) { return (y_hi - y) * sy; };

    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
                      "\" height=\"" + std::to_string(height) + "\">\n";
    if (p.finite()) {
        out += "<line x1=\"" + fmt(px(0.0)) + "\" y1=\"" + fmt(py(0.0)) + "\" x2=\"" +
               fmt(px(p.length)) + "\" y2=\"" + fmt(py(0.0)) +
               "\" stroke=\"#006600\" stroke-width=\"3\"/>\n";
    } else {
        out += "<line x1=\"0\" y1=\"" + fmt(py(0.0)) + "\" x2=\"" + std::to_string(width) +
               "\" y2=\"" + fmt(py(0.0)) + "\" stroke=\"#006600\" stroke-width=\"1\"/>\n";
    }
    const auto path = [&](auto get, const char* stroke) {
        std::string s = "<polyline fill=\"none\" stroke=\"";
        s += stroke;
        s += "\" stroke-width=\"1.5\" points=\"";
        for (const Sample& smp : o.trajectory) {
            const auto [x, y] = get(smp);
            s += fmt(px(x));
            s += ',';
            s += fmt(py(y));
            s += ' ';
        }
        s += "\"/>\n";
        return s;
    };
    out += path([](const Sample& s) { return std::pair(s.state.attacker_x, s.state.attacker_y); },
                "#cc0000");
    out += path([](const Sample& s) { return std::pair(s.state.defender_x, 0.0); }, "#0044cc");
    out += "</svg>\n";
    return out;
}

}  // namespace guarding
