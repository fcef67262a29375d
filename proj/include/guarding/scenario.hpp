#pragma once
/// @file scenario.hpp
/// @brief Scenario JSON files: parameters, initial state, simulation knobs
/// and optional strategy overrides. Parse failures carry the offending field
/// path so CLI errors point at the exact key.

#include <optional>
#include <string>

#include <json.hpp>

#include "guarding/simulate.hpp"

namespace guarding {

struct ScenarioError : Error {
    std::string field;
    ScenarioError(std::string field_path, const std::string& msg)
        : Error(field_path + ": " + msg), field(std::move(field_path)) {}
};

struct Scenario {
    GameParams params;
    MovingFrameState state;
    SimConfig sim;
    std::string attacker_override = "equilibrium";
    std::string defender_override = "equilibrium";

    /// Strategies with any overrides applied.
    [[nodiscard]] StrategyPair strategies() const;
};

namespace detail {

inline const nlohmann::json& need(const nlohmann::json& j, const std::string& path,
                                  const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw ScenarioError(path + key, "missing field");
    }
    return j.at(key);
}

inline double need_number(const nlohmann::json& j, const std::string& path, const char* key) {
    const nlohmann::json& v = need(j, path, key);
    if (!v.is_number()) {
        throw ScenarioError(path + key, "expected a number");
    }
    return v.get<double>();
}

inline double opt_number(const nlohmann::json& j, const std::string& path, const char* key,
                         double fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    const nlohmann::json& v = j.at(key);
    if (!v.is_number()) {
        throw ScenarioError(path + key, "expected a number");
    }
    return v.get<double>();
}

inline double parse_suffix_number(const std::string& text, const std::string& prefix,
                                  const std::string& field) {
    const std::string raw = text.substr(prefix.size());
    try {
        size_t used = 0;
        const double v = std::stod(raw, &used);
        if (used != raw.size()) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        throw ScenarioError(field, "cannot parse number in '" + text + "'");
    }
}

}  // namespace detail

inline Scenario parse_scenario(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ScenarioError("(document)", e.what());
    }

    Scenario sc;
    const nlohmann::json& jp = detail::need(j, "", "params");
    const double va = detail::need_number(jp, "params.", "v_A");
    const double vt = detail::need_number(jp, "params.", "v_T");
    const nlohmann::json& jl = detail::need(jp, "params.", "L");
    double length = kInfiniteLength;
    if (jl.is_number()) {
        length = jl.get<double>();
    } else if (!(jl.is_string() && jl.get<std::string>() == "infinite")) {
        throw ScenarioError("params.L", "expected a positive number or \"infinite\"");
    }
    sc.params = make_params(va, vt, length);

    const nlohmann::json& js = detail::need(j, "", "state");
    sc.state.defender_x = detail::need_number(js, "state.", "x_D");
    sc.state.attacker_x = detail::need_number(js, "state.", "x_A");
    sc.state.attacker_y = detail::need_number(js, "state.", "y_A");

    sc.sim = SimConfig::for_params(sc.params);
    if (j.contains("sim")) {
        const nlohmann::json& jsim = j.at("sim");
        sc.sim.dt = detail::opt_number(jsim, "sim.", "dt", sc.sim.dt);
        sc.sim.max_time = detail::opt_number(jsim, "sim.", "max_time", sc.sim.max_time);
        sc.sim.event_tol = detail::opt_number(jsim, "sim.", "event_tol", sc.sim.event_tol);
        if (!(sc.sim.dt > 0.0)) throw ScenarioError("sim.dt", "must be positive");
        if (!(sc.sim.event_tol > 0.0 && sc.sim.event_tol < sc.sim.dt)) {
            throw ScenarioError("sim.event_tol", "must satisfy 0 < event_tol < dt");
        }
    }

    if (j.contains("strategy")) {
        const nlohmann::json& jst = j.at("strategy");
        if (jst.contains("attacker")) {
            if (!jst.at("attacker").is_string()) {
                throw ScenarioError("strategy.attacker", "expected a string");
            }
            sc.attacker_override = jst.at("attacker").get<std::string>();
        }
        if (jst.contains("defender")) {
            if (!jst.at("defender").is_string()) {
                throw ScenarioError("strategy.defender", "expected a string");
            }
            sc.defender_override = jst.at("defender").get<std::string>();
        }
    }
    // Validate override syntax eagerly so malformed files fail at parse time.
    (void)sc.strategies();
    return sc;
}

inline StrategyPair Scenario::strategies() const {
    StrategyPair sp;
    if (attacker_override == "equilibrium") {
        sp.attacker = equilibrium_attacker(params);
    } else if (attacker_override.rfind("aim:", 0) == 0) {
        sp.attacker = aim_at(params, detail::parse_suffix_number(attacker_override, "aim:",
                                                                 "strategy.attacker"));
    } else if (attacker_override.rfind("heading:", 0) == 0) {
        sp.attacker = constant_heading(detail::parse_suffix_number(attacker_override, "heading:",
                                                                   "strategy.attacker"));
    } else {
        throw ScenarioError("strategy.attacker",
                            "expected \"equilibrium\", \"aim:<x>\" or \"heading:<radians>\"");
    }
    if (defender_override == "equilibrium") {
        sp.defender = equilibrium_defender(params);
    } else if (defender_override.rfind("const:", 0) == 0) {
        sp.defender = constant_w(detail::parse_suffix_number(defender_override, "const:",
                                                             "strategy.defender"));
    } else {
        throw ScenarioError("strategy.defender", "expected \"equilibrium\" or \"const:<w>\"");
    }
    return sp;
}

/// Decision rendered as the JSON object printed by the value/strategy
/// commands.
inline nlohmann::json decision_json(const EquilibriumDecision& d) {
    return nlohmann::json{
        {"V", d.value},
        {"heading", {{"cos_phi", d.heading.cos_phi}, {"sin_phi", d.heading.sin_phi}}},
        {"m", d.slope},
        {"mirrored", d.mirrored},
        {"regime", d.regime == Regime::InfiniteForm ? "infinite_form" : "endpoint_aim"},
        {"side", d.side == Side::AttackerAhead ? "attacker_ahead" : "defender_ahead"},
        {"w_D", d.defender_w}};
}

}  // namespace guarding
