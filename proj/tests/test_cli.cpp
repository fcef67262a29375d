// End-to-end tests of the command-line tool: exit codes, output formats and
// determinism. The binary path comes from the build system.

#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#ifndef GUARDING_CLI_PATH
#error "GUARDING_CLI_PATH must be defined by the build"
#endif

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(GUARDING_CLI_PATH) + " " + args + " 2>/dev/null";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        r.out.append(buf.data(), got);
    }
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path write_temp(const std::string& name, const std::string& content) {
    const fs::path dir = fs::temp_directory_path() / "guarding_cli_tests";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream(p, std::ios::trunc) << content;
    return p;
}

const char* kScenario1 = R"({
  "params": {"v_A": 0.6, "v_T": 0.35, "L": 1.0},
  "state": {"x_D": 0.5, "x_A": 0.0, "y_A": 0.15}
})";

const char* kScenario2 = R"({
  "params": {"v_A": 0.6, "v_T": 0.35, "L": 1.0},
  "state": {"x_D": 0.5, "x_A": 0.75, "y_A": -0.2}
})";

}  // namespace

TEST_CASE("value command") {
    const fs::path s1 = write_temp("s1.json", kScenario1);
    const fs::path s2 = write_temp("s2.json", kScenario2);

    SUBCASE("published values with the right regimes") {
        const RunResult r1 = run("value --scenario " + s1.string());
        REQUIRE(r1.exit_code == 0);
        const nlohmann::json j1 = nlohmann::json::parse(r1.out);
        CHECK(std::abs(j1.at("V").get<double>() - 0.1922) <= 1e-3);
        CHECK(j1.at("regime") == "endpoint_aim");
        CHECK(j1.at("mirrored").get<bool>());

        const RunResult r2 = run("value --scenario " + s2.string());
        REQUIRE(r2.exit_code == 0);
        const nlohmann::json j2 = nlohmann::json::parse(r2.out);
        CHECK(std::abs(j2.at("V").get<double>() + 0.1531) <= 1e-3);
        CHECK(j2.at("regime") == "infinite_form");
    }
    SUBCASE("byte-identical across invocations") {
        const RunResult a = run("value --scenario " + s1.string());
        const RunResult b = run("value --scenario " + s1.string());
        CHECK(a.out == b.out);
    }
    SUBCASE("malformed json exits 2") {
        const fs::path bad = write_temp("bad.json", "{\"params\": {\"v_A\": 0.6");
        CHECK(run("value --scenario " + bad.string()).exit_code == 2);
    }
    SUBCASE("missing field exits 2") {
        const fs::path bad = write_temp("missing.json",
                                        R"({"params": {"v_A": 0.6, "v_T": 0.35, "L": 1},
                                            "state": {"x_D": 0.5, "x_A": 0.0}})");
        CHECK(run("value --scenario " + bad.string()).exit_code == 2);
    }
    SUBCASE("invalid assumptions exit 2") {
        const fs::path bad = write_temp("a2.json",
                                        R"({"params": {"v_A": 0.7, "v_T": 0.3, "L": 1},
                                            "state": {"x_D": 0.5, "x_A": 0.0, "y_A": -0.2}})");
        CHECK(run("value --scenario " + bad.string()).exit_code == 2);
    }
    SUBCASE("capture-surface state exits 3") {
        const fs::path cap = write_temp("cap.json",
                                        R"({"params": {"v_A": 0.6, "v_T": 0.35, "L": 1},
                                            "state": {"x_D": 0.5, "x_A": 0.5, "y_A": -0.2}})");
        CHECK(run("value --scenario " + cap.string()).exit_code == 3);
    }
    SUBCASE("missing scenario file exits 4") {
        CHECK(run("value --scenario /nonexistent/s.json").exit_code == 4);
    }
}

TEST_CASE("strategy command carries diagnostics") {
    const fs::path s1 = write_temp("s1.json", kScenario1);
    const RunResult r = run("strategy --scenario " + s1.string());
    REQUIRE(r.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j.contains("coefficients"));
    CHECK(j.contains("adjoints"));
    CHECK(j.at("aim").contains("landing_x"));
    CHECK(j.at("coefficients").at("eta").get<double>() > 0.0);
}

TEST_CASE("simulate command") {
    const fs::path s1 = write_temp("s1.json", kScenario1);
    const fs::path s2 = write_temp("s2.json", kScenario2);
    const fs::path dir = fs::temp_directory_path() / "guarding_cli_tests";

    SUBCASE("attacker-winning scenario writes the trajectory") {
        const fs::path csv = dir / "traj1.csv";
        const RunResult r = run("simulate --scenario " + s1.string() + " --out " + csv.string());
        REQUIRE(r.exit_code == 0);
        const nlohmann::json j = nlohmann::json::parse(r.out);
        CHECK(j.at("event") == "breach");
        CHECK(std::abs(j.at("payoff").get<double>() - 0.1922) <= 5e-3);
        std::ifstream in(csv);
        REQUIRE(in.good());
        std::string header;
        std::getline(in, header);
        CHECK(header == "t,x_D,x_A,y_A,w,cos_phi,sin_phi,event");
    }
    SUBCASE("defender-winning scenario is a capture") {
        const RunResult r = run("simulate --scenario " + s2.string());
        REQUIRE(r.exit_code == 0);
        const nlohmann::json j = nlohmann::json::parse(r.out);
        CHECK(j.at("event") == "capture");
        CHECK(j.at("payoff").is_null());
    }
    SUBCASE("attacker override changes the outcome") {
        const fs::path ov = write_temp("s1_aim_far.json",
                                       R"({"params": {"v_A": 0.6, "v_T": 0.35, "L": 1.0},
                                           "state": {"x_D": 0.5, "x_A": 0.0, "y_A": 0.15},
                                           "strategy": {"attacker": "aim:1.0"}})");
        const RunResult r = run("simulate --scenario " + ov.string());
        REQUIRE(r.exit_code == 0);
        const nlohmann::json j = nlohmann::json::parse(r.out);
        // Aiming across the defender at the far endpoint forfeits the win.
        CHECK(j.at("event") == "capture");
    }
    SUBCASE("svg artifact is written") {
        const fs::path svg = dir / "traj1.svg";
        const RunResult r = run("simulate --scenario " + s1.string() + " --svg " + svg.string());
        REQUIRE(r.exit_code == 0);
        std::ifstream in(svg);
        REQUIRE(in.good());
        std::string first;
        std::getline(in, first);
        CHECK(first.rfind("<svg", 0) == 0);
    }
}

TEST_CASE("levelset and barrier commands") {
    const fs::path s1 = write_temp("s1.json", kScenario1);
    const fs::path dir = fs::temp_directory_path() / "guarding_cli_tests";

    SUBCASE("levelset emits both regions") {
        const fs::path csv = dir / "ls.csv";
        const RunResult r = run("levelset --scenario " + s1.string() +
                                " --xd 0.5 --nx 41 --ny 21 --out " + csv.string());
        REQUIRE(r.exit_code == 0);
        std::ifstream in(csv);
        std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        CHECK(content.rfind("x_A,y_A,V,region\n", 0) == 0);
        CHECK(content.find("attacker_win") != std::string::npos);
        CHECK(content.find("defender_win") != std::string::npos);
    }
    SUBCASE("barrier csv and svg") {
        const fs::path csv = dir / "barrier.csv";
        const fs::path svg = dir / "barrier.svg";
        const RunResult r = run("barrier --scenario " + s1.string() + " --nx 41 --ny 41 --out " +
                                csv.string() + " --svg " + svg.string());
        REQUIRE(r.exit_code == 0);
        std::ifstream in(csv);
        std::string header;
        std::getline(in, header);
        CHECK(header == "regime,x_A,y_A");
        CHECK(fs::exists(svg));
    }
    SUBCASE("window without a sign change exits 5") {
        const RunResult r = run("barrier --scenario " + s1.string() +
                                " --xd 0.2 --xmin 0.7 --xmax 0.9 --ymin -0.04 --ymax -0.01"
                                " --nx 9 --ny 9");
        CHECK(r.exit_code == 5);
    }
}

TEST_CASE("flowfield command") {
    const fs::path inf = write_temp("inf.json",
                                    R"({"params": {"v_A": 0.7, "v_T": 0.2, "L": "infinite"},
                                        "state": {"x_D": 0.0, "x_A": 0.4, "y_A": -0.5}})");
    SUBCASE("writes polylines") {
        const RunResult r = run("flowfield --scenario " + inf.string() + " --nx 8");
        REQUIRE(r.exit_code == 0);
        CHECK(r.out.rfind("seed,t_index,X,Y,event", 0) == 0);
    }
    SUBCASE("finite target is rejected") {
        const fs::path fin = write_temp("fin.json", kScenario1);
        CHECK(run("flowfield --scenario " + fin.string()).exit_code == 2);
    }
}

TEST_CASE("verify command") {
    SUBCASE("hamiltonian suite passes") {
        const RunResult r = run("verify --suite hamiltonian");
        CHECK(r.exit_code == 0);
        const nlohmann::json j = nlohmann::json::parse(r.out);
        CHECK(j.at("pass").get<bool>());
    }
    SUBCASE("oracle suite with explicit seed") {
        const RunResult r = run("verify --suite oracle --n 30 --seed 1");
        CHECK(r.exit_code == 0);
        const nlohmann::json j = nlohmann::json::parse(r.out);
        CHECK(j.at("suites").at(0).at("seed").get<std::uint64_t>() == 1);
    }
    SUBCASE("seeded runs are byte identical") {
        const RunResult a = run("verify --suite oracle --n 25 --seed 9");
        const RunResult b = run("verify --suite oracle --n 25 --seed 9");
        CHECK(a.out == b.out);
    }
    SUBCASE("unknown suite exits 2") {
        CHECK(run("verify --suite bogus").exit_code == 2);
    }
}

TEST_CASE("usage errors") {
    CHECK(run("--help").exit_code == 0);
    CHECK(run("value --scenario a.json --bogus-flag").exit_code == 2);
    CHECK(run("").exit_code == 2);
    const auto help = run("simulate --help");
    CHECK(help.exit_code == 0);
    CHECK(help.out.find("--dt") != std::string::npos);
    CHECK(help.out.find("--svg") != std::string::npos);
}
