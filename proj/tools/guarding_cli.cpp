// Command-line frontend for the moving-target guarding game: closed-form
// values and strategies, closed-loop simulation, level-set/barrier artifacts
// and the numerical verification suites.
//
// Exit codes: 0 success, 2 usage/validation errors, 3 capture-surface
// queries, 4 I/O failures, 5 empty results (e.g. no barrier in the window).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "guarding/barrier.hpp"
#include "guarding/scenario.hpp"
#include "guarding/verify.hpp"

namespace {

using namespace guarding;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitCapture = 3;
constexpr int kExitIo = 4;
constexpr int kExitEmpty = 5;

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open scenario file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        atomic_write(out_path, content);
    }
}

int cmd_value(const std::string& scenario_path, const std::string& out_path) {
    const Scenario sc = load_scenario(scenario_path);
    const EquilibriumDecision d = decide(sc.state, sc.params);
    emit(decision_json(d).dump(2) + "\n", out_path);
    return kExitOk;
}

int cmd_strategy(const std::string& scenario_path, const std::string& out_path) {
    const Scenario sc = load_scenario(scenario_path);
    const EquilibriumDecision d = decide(sc.state, sc.params);
    const MirrorResult m = mirror_to_canonical(sc.state);
    const Side side = side_of(m.state);
    const InfiniteCoefficients co = coefficients(sc.params, side);
    const AdjointVector sig = equilibrium_adjoints(sc.params, side);
    const AimPoint aim = aim_point(m.state, sc.params, side);

    nlohmann::json j = decision_json(d);
    j["coefficients"] = {{"lambda", co.lambda}, {"rho", co.rho},   {"alpha", co.alpha},
                         {"beta", co.beta},     {"eta", co.eta}};
    j["adjoints"] = {{"sigma_x_D", sig.sigma_defender_x},
                     {"sigma_x_A", sig.sigma_attacker_x},
                     {"sigma_y_A", sig.sigma_attacker_y}};
    j["aim"] = {{"inertial_slope", aim.slope},
                {"inertial_intercept", aim.x_intercept},
                {"landing_x", infinite_form_landing_x(m.state, sc.params, side)},
                {"aim_x", equilibrium_aim_x(m.state, sc.params)}};
    emit(j.dump(2) + "\n", out_path);
    return kExitOk;
}

int cmd_simulate(const std::string& scenario_path, const std::string& out_path,
                 const std::string& svg_path, double dt_override, double max_time_override) {
    const Scenario sc = load_scenario(scenario_path);
    SimConfig cfg = sc.sim;
    if (dt_override > 0.0) cfg.dt = dt_override;
    if (max_time_override > 0.0) cfg.max_time = max_time_override;
    const Outcome o = simulate(sc.state, sc.params, sc.strategies(), cfg);

    if (!out_path.empty()) atomic_write(out_path, trajectory_csv(o));
    if (!svg_path.empty()) atomic_write(svg_path, trajectory_svg(o, sc.params));

    nlohmann::json j{{"event", event_name(o.kind)},
                     {"t_final", o.t_final},
                     {"final_state",
                      {{"x_D", o.final_state.defender_x},
                       {"x_A", o.final_state.attacker_x},
                       {"y_A", o.final_state.attacker_y}}},
                     {"samples", o.trajectory.size()}};
    if (const auto miss = payoff(o)) {
        j["payoff"] = *miss;
    } else {
        j["payoff"] = nullptr;
    }
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

struct WindowFlags {
    GridSpec spec;
    double xd = std::numeric_limits<double>::quiet_NaN();
    unsigned threads = 1;
};

LevelSetGrid grid_from_flags(const Scenario& sc, const WindowFlags& w) {
    const double xd = std::isnan(w.xd) ? sc.state.defender_x : w.xd;
    return value_grid(sc.params, xd, w.spec, w.threads);
}

int cmd_levelset(const std::string& scenario_path, const WindowFlags& w, const std::string& out_path,
                 const std::string& svg_path) {
    const Scenario sc = load_scenario(scenario_path);
    const LevelSetGrid g = grid_from_flags(sc, w);
    emit(levelset_csv(g), out_path);
    if (!svg_path.empty()) {
        BarrierCurve curve;
        const BarrierCurve* curve_ptr = nullptr;
        try {
            curve = extract_barrier(g);
            curve_ptr = &curve;
        } catch (const NoBarrier&) {
        }
        atomic_write(svg_path, levelset_svg(g, curve_ptr));
    }
    return kExitOk;
}

int cmd_barrier(const std::string& scenario_path, const WindowFlags& w, const std::string& out_path,
                const std::string& svg_path) {
    const Scenario sc = load_scenario(scenario_path);
    const LevelSetGrid g = grid_from_flags(sc, w);
    const BarrierCurve curve = extract_barrier(g);
    emit(barrier_csv(curve), out_path);
    if (!svg_path.empty()) atomic_write(svg_path, levelset_svg(g, &curve));
    return kExitOk;
}

int cmd_flowfield(const std::string& scenario_path, double y0, double x_min, double x_max, int nx,
                  const std::string& out_path) {
    const Scenario sc = load_scenario(scenario_path);
    if (sc.params.finite()) {
        throw ScenarioError("params.L", "flowfield requires an infinite target");
    }
    std::vector<RelativeState> seeds;
    int skipped = 0;
    for (int i = 0; i < nx; ++i) {
        const double x = nx == 1 ? x_min : x_min + (x_max - x_min) * static_cast<double>(i) / (nx - 1);
        if (std::abs(x) < kEpsCapture) {
            ++skipped;  // seed on the capture surface
            continue;
        }
        seeds.push_back(RelativeState{x, y0});
    }
    if (seeds.empty()) {
        throw NoBarrier("no usable flow-field seeds in the requested range");
    }
    if (skipped > 0) {
        std::cerr << "note: skipped " << skipped << " seed(s) on the capture surface\n";
    }
    const auto lines = flow_field(sc.params, seeds, sc.sim);
    emit(flow_field_csv(lines), out_path);
    return kExitOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, int n, const std::string& out_path) {
    std::vector<SuiteReport> reports;
    if (suite == "hamiltonian") {
        reports.push_back(suite_hamiltonian());
    } else if (suite == "isaacs") {
        reports.push_back(suite_isaacs(n > 0 ? n : 20, seed));
    } else if (suite == "eta") {
        reports.push_back(suite_eta());
    } else if (suite == "oracle") {
        reports.push_back(suite_oracle(n > 0 ? n : 100, seed));
    } else if (suite == "saddle") {
        reports.push_back(suite_saddle(5, n > 0 ? n : 50, seed));
    } else if (suite == "adjoint") {
        reports.push_back(suite_adjoint(5, seed));
    } else if (suite == "retrograde") {
        reports.push_back(suite_retrograde());
    } else if (suite == "all") {
        reports = run_all_suites(seed, n > 0 ? n : 100);
    } else {
        std::cerr << "error: unknown suite '" << suite
                  << "' (expected hamiltonian|isaacs|eta|oracle|saddle|adjoint|retrograde|all)\n";
        return kExitUsage;
    }
    const nlohmann::json j = to_json(reports);
    emit(j.dump(2) + "\n", out_path);
    if (!out_path.empty()) std::cout << (j.at("pass").get<bool>() ? "pass" : "FAIL") << "\n";
    return j.at("pass").get<bool>() ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"moving-target guarding game toolkit"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, svg_path;
    double dt_override = -1.0, max_time_override = -1.0;

    auto* value = app.add_subcommand("value", "equilibrium Value and decision for a scenario");
    value->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    value->add_option("--out", out_path, "write the decision JSON here instead of stdout");

    auto* strategy = app.add_subcommand("strategy", "decision with coefficients and aim diagnostics");
    strategy->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    strategy->add_option("--out", out_path, "write the JSON here instead of stdout");

    auto* sim = app.add_subcommand("simulate", "integrate the closed-loop game");
    sim->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    sim->add_option("--out", out_path, "trajectory CSV path");
    sim->add_option("--svg", svg_path, "trajectory SVG path");
    sim->add_option("--dt", dt_override, "override integration step");
    sim->add_option("--max-time", max_time_override, "override truncation time");

    WindowFlags wf;
    auto add_window = [&wf](CLI::App* cmd) {
        cmd->add_option("--xd", wf.xd, "defender position (default: scenario state x_D)");
        cmd->add_option("--xmin", wf.spec.x_min, "window minimum attacker x");
        cmd->add_option("--xmax", wf.spec.x_max, "window maximum attacker x");
        cmd->add_option("--ymin", wf.spec.y_min, "window minimum attacker y");
        cmd->add_option("--ymax", wf.spec.y_max, "window maximum attacker y");
        cmd->add_option("--nx", wf.spec.nx, "grid nodes along x")->check(CLI::PositiveNumber);
        cmd->add_option("--ny", wf.spec.ny, "grid nodes along y")->check(CLI::PositiveNumber);
        cmd->add_option("--threads", wf.threads, "worker threads for grid evaluation");
    };

    auto* levelset = app.add_subcommand("levelset", "sample the Value over an attacker grid");
    levelset->add_option("--scenario", scenario_path, "scenario JSON file (params + default xd)")
        ->required();
    levelset->add_option("--out", out_path, "level-set CSV path (stdout if omitted)");
    levelset->add_option("--svg", svg_path, "region plot SVG path");
    add_window(levelset);

    auto* barrier = app.add_subcommand("barrier", "extract the zero level set of the Value");
    barrier->add_option("--scenario", scenario_path, "scenario JSON file (params + default xd)")
        ->required();
    barrier->add_option("--out", out_path, "barrier CSV path (stdout if omitted)");
    barrier->add_option("--svg", svg_path, "region plot SVG path");
    add_window(barrier);

    double ff_y0 = -0.5, ff_xmin = -1.0, ff_xmax = 1.0;
    int ff_nx = 21;
    auto* flowfield = app.add_subcommand("flowfield", "equilibrium trajectories in the relative plane");
    flowfield->add_option("--scenario", scenario_path, "scenario JSON file (infinite-target params)")
        ->required();
    flowfield->add_option("--y0", ff_y0, "seed line Y coordinate");
    flowfield->add_option("--xmin", ff_xmin, "seed minimum X");
    flowfield->add_option("--xmax", ff_xmax, "seed maximum X");
    flowfield->add_option("--nx", ff_nx, "seed count")->check(CLI::PositiveNumber);
    flowfield->add_option("--out", out_path, "flow-field CSV path (stdout if omitted)");

    std::string suite;
    std::uint64_t seed = 0;
    int n = -1;
    auto* verify = app.add_subcommand("verify", "run a numerical verification suite");
    verify->add_option("--suite", suite,
                       "hamiltonian|isaacs|eta|oracle|saddle|adjoint|retrograde|all")
        ->required();
    verify->add_option("--seed", seed, "RNG seed recorded in the report");
    verify->add_option("--n", n, "suite size (draws/states/perturbations)");
    verify->add_option("--out", out_path, "write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (value->parsed()) return cmd_value(scenario_path, out_path);
        if (strategy->parsed()) return cmd_strategy(scenario_path, out_path);
        if (sim->parsed()) {
            return cmd_simulate(scenario_path, out_path, svg_path, dt_override, max_time_override);
        }
        if (levelset->parsed()) return cmd_levelset(scenario_path, wf, out_path, svg_path);
        if (barrier->parsed()) return cmd_barrier(scenario_path, wf, out_path, svg_path);
        if (flowfield->parsed()) {
            return cmd_flowfield(scenario_path, ff_y0, ff_xmin, ff_xmax, ff_nx, out_path);
        }
        if (verify->parsed()) return cmd_verify(suite, seed, n, out_path);
    } catch (const AtCaptureSurface& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCapture;
    } catch (const NoBarrier& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEmpty;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
