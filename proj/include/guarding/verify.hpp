#pragma once
/// @file verify.hpp
/// @brief Numerical certification of the optimality claims: Hamiltonian
/// residuals, the Isaacs minimax exchange, saddle-point inequalities probed
/// by simulation, and an independent brute-force aim-point oracle for the
/// Value.
///
/// The aim-point oracle never touches the closed-form Value: it prices every
/// straight moving-frame flight to a point on the segment against a defender
/// that runs toward that point, and takes the best margin. Where the
/// committed-aim abstraction is faithful (the aim stays on the attacker's
/// side of the defender) this equals the closed form; elsewhere the
/// comparison is reported but not asserted.

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "guarding/barrier.hpp"
#include "guarding/finite.hpp"
#include "guarding/rng.hpp"
#include "guarding/simulate.hpp"

namespace guarding {

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct CaseRecord {
    std::string label;
    double observed = 0.0;  ///< residual or margin, suite-specific
    double bound = 0.0;
    bool pass = true;
};

struct SuiteReport {
    std::string suite;
    std::uint64_t seed = 0;
    int n = 0;
    bool pass = true;
    std::vector<CaseRecord> cases;
    std::vector<std::string> notes;  ///< unasserted observations

    void check(std::string label, double observed, double bound) {
        const bool ok = std::abs(observed) <= bound;
        cases.push_back(CaseRecord{std::move(label), observed, bound, ok});
        pass = pass && ok;
    }
    void require(std::string label, bool ok, double observed = 0.0, double bound = 0.0) {
        cases.push_back(CaseRecord{std::move(label), observed, bound, ok});
        pass = pass && ok;
    }
};

inline nlohmann::json to_json(const SuiteReport& r) {
    nlohmann::json cases = nlohmann::json::array();
    for (const CaseRecord& c : r.cases) {
        cases.push_back({{"label", c.label}, {"observed", c.observed}, {"bound", c.bound}, {"pass", c.pass}});
    }
    return nlohmann::json{{"suite", r.suite}, {"seed", r.seed},   {"n", r.n},
                          {"pass", r.pass},   {"cases", cases},   {"notes", r.notes}};
}

inline nlohmann::json to_json(const std::vector<SuiteReport>& rs) {
    bool pass = true;
    nlohmann::json suites = nlohmann::json::array();
    for (const SuiteReport& r : rs) {
        suites.push_back(to_json(r));
        pass = pass && r.pass;
    }
    return nlohmann::json{{"pass", pass}, {"suites", suites}};
}

// ---------------------------------------------------------------------------
// Isaacs condition
// ---------------------------------------------------------------------------

struct IsaacsReport {
    double minmax = 0.0;      ///< min over w of max over phi of H
    double maxmin = 0.0;      ///< max over phi of min over w of H
    double grid_bound = 0.0;  ///< allowed distance of either ordering from 0
    bool pass = false;
};

/// Exhaustive grid minimax of the Hamiltonian with equilibrium adjoints. The
/// two orderings must coincide and both must sit at 0 within the grid
/// resolution bound.
inline IsaacsReport isaacs_check(const GameParams& p, Side side, int heading_grid_n, int w_grid_n) {
    if (heading_grid_n < 101 || w_grid_n < 101) {
        throw Error("isaacs_check requires at least 101 grid points per control");
    }
    const AdjointVector sigma = equilibrium_adjoints(p, side);
    const double pi = std::acos(-1.0);

    const auto heading_at = [&](int i) {
        const double phi = -pi + 2.0 * pi * static_cast<double>(i) / (heading_grid_n - 1);
        return UnitHeading{std::cos(phi), std::sin(phi)};
    };
    const auto w_at = [&](int j) {
        return -1.0 + 2.0 * static_cast<double>(j) / (w_grid_n - 1);
    };

    double minmax = std::numeric_limits<double>::infinity();
    for (int j = 0; j < w_grid_n; ++j) {
        double inner = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < heading_grid_n; ++i) {
            inner = std::max(inner, hamiltonian(p, sigma, w_at(j), heading_at(i)));
        }
        minmax = std::min(minmax, inner);
    }
    double maxmin = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < heading_grid_n; ++i) {
        double inner = std::numeric_limits<double>::infinity();
        const UnitHeading h = heading_at(i);
        for (int j = 0; j < w_grid_n; ++j) {
            inner = std::min(inner, hamiltonian(p, sigma, w_at(j), h));
        }
        maxmin = std::max(maxmin, inner);
    }

    IsaacsReport r;
    r.minmax = minmax;
    r.maxmin = maxmin;
    r.grid_bound = pi / heading_grid_n * p.attacker_speed + 2.0 / w_grid_n;
    r.pass = std::abs(minmax - maxmin) <= 1e-12 && std::abs(minmax) <= r.grid_bound;
    return r;
}

// ---------------------------------------------------------------------------
// Aim-point oracle
// ---------------------------------------------------------------------------

struct OracleResult {
    double value = 0.0;       ///< best margin over the aim grid
    double best_aim = 0.0;    ///< maximizing aim point
    double margin_slope = 0.0;  ///< max |d margin / d aim| observed on the grid
};

/// Margin of committing to the aim point (aim_x, 0): the defender's distance
/// to the aim point minus the distance it covers during the attacker's
/// flight. Positive means the attacker arrives clear of the defender.
inline double aim_margin(const MovingFrameState& s, const GameParams& p, double aim_x) {
    const double dx = aim_x - s.attacker_x;
    const double d = std::hypot(dx, s.attacker_y);
    double flight_time = 0.0;
    if (d >= 1e-12) {
        const double c = dx / d;
        const double sh = -s.attacker_y / d;
        flight_time = d / detail::moving_speed_on_heading(p, c, sh);
    }
    return std::abs(aim_x - s.defender_x) - flight_time;
}

/// Brute-force best margin over a uniform aim grid on [0, L] (both endpoints
/// are grid nodes). Requires canonical orientation and a finite target.
inline OracleResult oracle_value(const MovingFrameState& s, const GameParams& p, int aim_grid_n) {
    OracleResult r;
    r.value = -std::numeric_limits<double>::infinity();
    double prev = 0.0;
    for (int i = 0; i < aim_grid_n; ++i) {
        const double aim = aim_grid_n == 1
                               ? 0.0
                               : p.length * static_cast<double>(i) / (aim_grid_n - 1);
        const double m = aim_margin(s, p, aim);
        if (m > r.value) {
            r.value = m;
            r.best_aim = aim;
        }
        if (i > 0) {
            const double step = p.length / (aim_grid_n - 1);
            r.margin_slope = std::max(r.margin_slope, std::abs(m - prev) / step);
        }
        prev = m;
    }
    return r;
}

// ---------------------------------------------------------------------------
// State sampling
// ---------------------------------------------------------------------------

/// Sampling window for random canonical states, in units of the target
/// length.
struct SampleWindow {
    double defender_lo = 0.05, defender_hi = 0.95;
    double attacker_x_lo = -0.5, attacker_x_hi = 1.5;
    double attacker_y_lo = -1.0, attacker_y_hi = -0.05;
};

inline MovingFrameState sample_state(CounterRng& rng, const GameParams& p,
                                     const SampleWindow& w = {}) {
    const double L = p.finite() ? p.length : 1.0;
    return MovingFrameState{rng.uniform(w.defender_lo * L, w.defender_hi * L),
                            rng.uniform(w.attacker_x_lo * L, w.attacker_x_hi * L),
                            rng.uniform(w.attacker_y_lo * L, w.attacker_y_hi * L)};
}

/// Compact state label used in case records so any case can be replayed.
inline std::string state_label(const MovingFrameState& s) {
    return "(" + fmt(s.defender_x) + "," + fmt(s.attacker_x) + "," + fmt(s.attacker_y) + ")";
}

/// True when the equilibrium aim point lies on the attacker's side of the
/// defender, the domain on which the committed-aim oracle is a faithful
/// independent check of the Value.
inline bool aim_side_consistent(const MovingFrameState& s, const GameParams& p) {
    const Side side = side_of(s);
    const double aim = equilibrium_aim_x(s, p);
    return side_sign(side) * (aim - s.defender_x) > 0.0;
}

/// Draws a random valid parameter set (all three assumptions strict).
inline GameParams sample_params(CounterRng& rng, double length = 1.0) {
    const double vt = rng.uniform(0.05, 0.45);
    const double span = 1.0 - 2.0 * vt;
    const double va = vt + span * rng.uniform(0.05, 0.95);
    return make_params(va, vt, length);
}

// ---------------------------------------------------------------------------
// Saddle-point sampling
// ---------------------------------------------------------------------------

struct SaddleReport {
    double value = 0.0;
    double tol = 0.0;
    int attacker_cases = 0;
    int defender_cases = 0;
    int violations = 0;
    double worst_attacker_excess = -std::numeric_limits<double>::infinity();
    double worst_defender_deficit = -std::numeric_limits<double>::infinity();
    bool pass = false;
};

namespace detail {

inline UnitHeading rotate(const UnitHeading& h, double delta) {
    const double c = std::cos(delta), s = std::sin(delta);
    return UnitHeading{h.cos_phi * c - h.sin_phi * s, h.sin_phi * c + h.cos_phi * s};
}

/// Defender that fights the equilibrium sign for the first `delay_steps`
/// feedback evaluations, then reverts to equilibrium play.
inline DefenderStrategy delayed_switch_defender(int delay_steps) {
    auto counter = std::make_shared<int>(0);
    return [counter, delay_steps](const MovingFrameState& s) {
        const double w = defender_control(side_of(s));
        return (*counter)++ < delay_steps ? -w : w;
    };
}

}  // namespace detail

/// Simulates n random attacker deviations against the equilibrium defender
/// and n random defender deviations against the equilibrium attacker, and
/// checks the saddle inequalities J(w*, phi) <= V + tol and
/// J(w, phi*) >= V - tol. A deviation that forfeits the breach (capture or
/// off-target crossing) satisfies the attacker-side inequality by definition
/// and violates the defender-side one.
inline SaddleReport saddle_sample(const MovingFrameState& s, const GameParams& p, int n_perturbations,
                                  std::uint64_t seed, const SimConfig& cfg_in = {}) {
    SimConfig cfg = cfg_in;
    cfg.mode = p.finite() ? TargetMode::Finite : TargetMode::Infinite;

    SaddleReport rep;
    rep.value = decide(s, p).value;
    rep.tol = std::max(5e-3, 10.0 * cfg.dt);
    if (!(rep.value > 0.02)) {
        throw Error("saddle_sample requires a strict attacker-win state (V > 0.02)");
    }

    CounterRng rng(seed);
    const UnitHeading h0 = decide(s, p).heading;
    const double aim0 = equilibrium_aim_x(s, p);
    const StrategyPair eq = equilibrium_strategies(p);

    for (int i = 0; i < n_perturbations; ++i) {
        AttackerStrategy dev;
        if (i % 2 == 0) {
            dev = constant_heading(detail::rotate(h0, rng.uniform(-0.5, 0.5)));
        } else {
            const double aim = std::clamp(aim0 + rng.uniform(-0.5, 0.5) * p.length, 0.0, p.length);
            dev = aim_at(p, aim);
        }
        const Outcome o = simulate(s, p, StrategyPair{dev, eq.defender}, cfg);
        const double j = payoff(o).value_or(-std::numeric_limits<double>::infinity());
        rep.attacker_cases++;
        rep.worst_attacker_excess = std::max(rep.worst_attacker_excess, j - rep.value);
        if (j > rep.value + rep.tol) rep.violations++;
    }

    for (int i = 0; i < n_perturbations; ++i) {
        DefenderStrategy dev;
        switch (i % 3) {
            case 0: dev = constant_w(rng.uniform(-1.0, 1.0)); break;
            case 1: dev = constant_w(-decide(s, p).defender_w); break;
            default:
                dev = detail::delayed_switch_defender(static_cast<int>(rng.uniform(0.0, 0.3) / cfg.dt));
        }
        const Outcome o = simulate(s, p, StrategyPair{eq.attacker, dev}, cfg);
        const double j = payoff(o).value_or(-std::numeric_limits<double>::infinity());
        rep.defender_cases++;
        rep.worst_defender_deficit = std::max(rep.worst_defender_deficit, rep.value - j);
        if (j < rep.value - rep.tol) rep.violations++;
    }

    rep.pass = rep.violations == 0;
    return rep;
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

/// Hamiltonian identity: |H| at equilibrium controls and adjoints over a
/// sweep of valid parameters, both sides.
inline SuiteReport suite_hamiltonian(int grid_n = 50) {
    SuiteReport r;
    r.suite = "hamiltonian";
    r.n = grid_n;
    double worst = 0.0;
    for (int i = 0; i < grid_n; ++i) {
        const double vt = 0.01 + (0.49 - 0.01) * static_cast<double>(i) / (grid_n - 1);
        for (int j = 0; j < grid_n; ++j) {
            const double va = vt + (1.0 - 2.0 * vt) * (static_cast<double>(j) + 0.5) / grid_n;
            const GameParams p = make_params(va, vt, 1.0);
            for (Side side : {Side::AttackerAhead, Side::DefenderAhead}) {
                const double h = hamiltonian(p, equilibrium_adjoints(p, side),
                                             defender_control(side), infinite_heading(p, side));
                worst = std::max(worst, std::abs(h));
            }
        }
    }
    r.check("max |H| over parameter sweep", worst, 1e-12);
    return r;
}

/// Isaacs condition on random parameter draws.
inline SuiteReport suite_isaacs(int n_draws, std::uint64_t seed, int heading_grid_n = 721,
                                int w_grid_n = 201) {
    SuiteReport r;
    r.suite = "isaacs";
    r.seed = seed;
    r.n = n_draws;
    CounterRng rng(seed);
    for (int i = 0; i < n_draws; ++i) {
        const GameParams p = sample_params(rng);
        for (Side side : {Side::AttackerAhead, Side::DefenderAhead}) {
            const IsaacsReport ir = isaacs_check(p, side, heading_grid_n, w_grid_n);
            r.check("draw " + std::to_string(i) + (side == Side::AttackerAhead ? " X>0" : " X<0") +
                        " |minmax-maxmin|",
                    ir.minmax - ir.maxmin, 1e-12);
            r.check("draw " + std::to_string(i) + (side == Side::AttackerAhead ? " X>0" : " X<0") +
                        " |minmax|",
                    ir.minmax, ir.grid_bound);
        }
    }
    return r;
}

/// eta from a scalar root find on the terminal Hamiltonian, against the
/// closed form.
inline SuiteReport suite_eta(int grid_n = 25) {
    SuiteReport r;
    r.suite = "eta";
    r.n = grid_n;
    double worst = 0.0;
    for (int i = 0; i < grid_n; ++i) {
        const double vt = 0.02 + (0.47 - 0.02) * static_cast<double>(i) / (grid_n - 1);
        for (int j = 0; j < grid_n; ++j) {
            const double va = vt + (1.0 - 2.0 * vt) * (static_cast<double>(j) + 0.5) / grid_n;
            const GameParams p = make_params(va, vt, 1.0);
            for (Side side : {Side::AttackerAhead, Side::DefenderAhead}) {
                const double lambda = side_sign(side);
                // Terminal Hamiltonian as written, a function of eta alone.
                const auto h_term = [&](double eta) {
                    const double root = std::sqrt(eta * eta + 1.0);
                    return -lambda * lambda + lambda * va * (lambda / root) - lambda * vt +
                           eta * va * (eta / root);
                };
                double lo = 0.0, hi = 1e3;
                for (int it = 0; it < 200; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (h_term(mid) < 0.0) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                worst = std::max(worst, std::abs(0.5 * (lo + hi) - adjoint_eta(p, side)));
            }
        }
    }
    r.check("max |eta_root - eta_closed| over sweep", worst, 1e-12);
    return r;
}

/// Oracle equivalence on random states. Asserted on the domain where the
/// committed-aim abstraction is faithful; cross-aim states are compared in
/// notes only.
inline SuiteReport suite_oracle(int n_states, std::uint64_t seed, int aim_grid_n = 4001,
                                const GameParams& p = make_params(0.6, 0.35, 1.0)) {
    SuiteReport r;
    r.suite = "oracle";
    r.seed = seed;
    r.n = n_states;
    CounterRng rng(seed);
    int accepted = 0, positive = 0, negative = 0, cross_reported = 0;
    while (accepted < n_states) {
        MovingFrameState s = sample_state(rng, p);
        if (std::abs(s.attacker_x - s.defender_x) < 1e-3) continue;
        const double v = decide(s, p).value;
        if (std::abs(v) < 1e-3) continue;
        const OracleResult o = oracle_value(s, p, aim_grid_n);
        if (!aim_side_consistent(s, p) ||
            side_sign(side_of(s)) * (o.best_aim - s.defender_x) <= 0.0) {
            // Committed-aim abstraction unfaithful here (defender-win states
            // whose best aim crosses the defender); report, do not assert.
            if (cross_reported < 10) {
                r.notes.push_back("cross-aim state (" + fmt(s.defender_x) + "," + fmt(s.attacker_x) +
                                  "," + fmt(s.attacker_y) + "): V=" + fmt(v) +
                                  " oracle=" + fmt(o.value) + " (unasserted)");
            }
            cross_reported++;
            continue;
        }
        const double bound = std::max(p.length / (aim_grid_n - 1) * o.margin_slope, 1e-10);
        r.check("state " + std::to_string(accepted) + " " + state_label(s) + " |oracle - V|",
                o.value - v, bound);
        (v > 0 ? positive : negative)++;
        accepted++;
    }
    r.notes.push_back("signs: " + std::to_string(positive) + " positive, " + std::to_string(negative) +
                      " negative; " + std::to_string(cross_reported) + " cross-aim states unasserted");
    return r;
}

/// Saddle inequalities on random attacker-win states.
inline SuiteReport suite_saddle(int n_states, int n_perturbations, std::uint64_t seed,
                                const GameParams& p = make_params(0.6, 0.35, 1.0)) {
    SuiteReport r;
    r.suite = "saddle";
    r.seed = seed;
    r.n = n_perturbations;
    CounterRng rng(seed);
    int accepted = 0;
    while (accepted < n_states) {
        const MovingFrameState s = sample_state(rng, p);
        if (std::abs(s.attacker_x - s.defender_x) < 1e-3) continue;
        if (!(decide(s, p).value > 0.02)) continue;
        const SaddleReport sr = saddle_sample(s, p, n_perturbations, rng.next_u64());
        r.require("state " + std::to_string(accepted) + " " + state_label(s) + " saddle inequalities",
                  sr.pass,
                  std::max(sr.worst_attacker_excess, sr.worst_defender_deficit), sr.tol);
        accepted++;
    }
    return r;
}

/// Adjoint constancy: the Hamiltonian with the (constant) equilibrium
/// adjoints stays at zero along simulated equilibrium trajectories of the
/// infinite-target game, whose necessary conditions the adjoints solve.
inline SuiteReport suite_adjoint(int n_states, std::uint64_t seed,
                                 const GameParams& p = make_params(0.6, 0.35, kInfiniteLength)) {
    SuiteReport r;
    r.suite = "adjoint";
    r.seed = seed;
    r.n = n_states;
    CounterRng rng(seed);
    SimConfig cfg = SimConfig::for_params(p);
    int accepted = 0;
    while (accepted < n_states) {
        const MovingFrameState s = sample_state(rng, p);
        if (std::abs(s.attacker_x - s.defender_x) < 1e-3) continue;
        if (!(decide(s, p).value > 0.02)) continue;
        const AdjointVector sigma = equilibrium_adjoints(p, side_of(s));
        const Outcome o = simulate(s, p, equilibrium_strategies(p), cfg);
        double worst = 0.0;
        for (const Sample& smp : o.trajectory) {
            worst = std::max(worst, std::abs(hamiltonian(p, sigma, smp.defender_w, smp.heading)));
        }
        r.check("state " + std::to_string(accepted) + " " + state_label(s) + " max |H| along trajectory",
                worst, 1e-10);
        accepted++;
    }
    return r;
}

/// Forward-simulated equilibrium velocities against the negated retrograde
/// closed forms.
inline SuiteReport suite_retrograde(int grid_n = 10) {
    SuiteReport r;
    r.suite = "retrograde";
    r.n = grid_n;
    double worst = 0.0;
    for (int i = 0; i < grid_n; ++i) {
        const double vt = 0.05 + (0.4 - 0.05) * static_cast<double>(i) / (grid_n - 1);
        for (int j = 0; j < grid_n; ++j) {
            const double va = vt + (1.0 - 2.0 * vt) * (static_cast<double>(j) + 0.5) / grid_n;
            const GameParams p = make_params(va, vt, kInfiniteLength);
            SimConfig cfg = SimConfig::for_params(p);
            for (Side side : {Side::AttackerAhead, Side::DefenderAhead}) {
                const double lambda = side_sign(side);
                const MovingFrameState s0{0.0, lambda * 0.4, -0.5};
                const Outcome o = simulate(s0, p, equilibrium_strategies(p), cfg);
                const auto [rx, ry] = retrograde_attacker_velocity(p, side);
                for (size_t k = 1; k < std::min<size_t>(o.trajectory.size(), 50); ++k) {
                    const Sample& a = o.trajectory[k - 1];
                    const Sample& b = o.trajectory[k];
                    const double dt = b.t - a.t;
                    worst = std::max(worst,
                                     std::abs((b.state.attacker_x - a.state.attacker_x) / dt - (-rx)));
                    worst = std::max(worst,
                                     std::abs((b.state.attacker_y - a.state.attacker_y) / dt - (-ry)));
                }
            }
        }
    }
    r.check("max |forward - (-retrograde)| over sweep", worst, 1e-12);
    return r;
}

inline std::vector<SuiteReport> run_all_suites(std::uint64_t seed, int n) {
    return {suite_hamiltonian(),
            suite_isaacs(std::max(1, n / 20), seed),
            suite_eta(),
            suite_oracle(std::max(10, n), seed),
            suite_saddle(5, std::max(10, n / 2), seed),
            suite_adjoint(5, seed),
            suite_retrograde()};
}

}  // namespace guarding
