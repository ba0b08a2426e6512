#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qclock/cli/runner.hpp"

using namespace qclock;
using namespace qclock::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("qclock_test_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("config: minimal document gets defaults") {
    const auto cfg = parse_config(R"({"schema_version": 1, "scenario": "twin-velocity"})");
    CHECK(cfg.kind == ScenarioKind::TwinVelocity);
    CHECK(cfg.params["boost"].get<double>() == 0.01);
    CHECK(cfg.tolerances.at("identity") == 1e-12);
}

TEST_CASE("config: errors name the offending field or line") {
    CHECK_THROWS_AS(parse_config(R"({"scenario": "swp"})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"schema_version": 2, "scenario": "swp"})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"schema_version": 1, "scenario": "warp"})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"schema_version": 1, "scenario": "swp", "params": {"bogus": 1}})"), ConfigError);
    try {
        parse_config("{\n  \"schema_version\": 1,\n  \"scenario\": \"swp\",\n  oops\n}");
        FAIL("expected a parse error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
    try {
        parse_config(R"({"schema_version": 1, "scenario": "swp", "params": {"dimension": "eight"}})");
        FAIL("expected a type error");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "params.dimension");
    }
    CHECK_THROWS_AS(parse_config(R"({"schema_version": 1, "scenario": "swp",
        "sweeps": [{"parameter": "nope", "start": 0, "stop": 1, "count": 3}]})"),
                    ConfigError);
}

TEST_CASE("config: out-of-regime boost is rejected naming the guard") {
    try {
        parse_config(R"({"schema_version": 1, "scenario": "twin-velocity", "params": {"boost": 0.5}})");
        FAIL("expected a regime error");
    } catch (const RegimeError& e) {
        CHECK(e.guard() == "kappa_max");
    }
    try {
        parse_config(R"({"schema_version": 1, "scenario": "twin-momentum", "params": {"epsilons": [0, 0.5]}})");
        FAIL("expected a regime error");
    } catch (const RegimeError& e) {
        CHECK(e.guard() == "epsilon_max");
    }
}

TEST_CASE("config: SI inputs are converted and echoed") {
    const auto cfg = parse_config(R"({"schema_version": 1, "scenario": "twin-velocity",
        "si": {"velocity_m_s": 2997924.58}})");
    CHECK(cfg.params["boost"].get<double>() == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(cfg.converted["boost"].get<double>() == doctest::Approx(0.01).epsilon(1e-12));

    // A real ion: the ratios are hopelessly small, which is the point.
    const auto ion = parse_config(R"({"schema_version": 1, "scenario": "ion-spectroscopy",
        "si": {"mass_kg": 4.48e-26, "transition_frequency_hz": 1.121e15, "trap_frequency_hz": 1e6},
        "params": {"rabi": 1e-30}})");
    CHECK(ion.converted["transition"].get<double>() < 1e-9);
}

TEST_CASE("overrides") {
    const auto cfg = config_from_overrides(ScenarioKind::Swp, {"dimension=16", "profile=none"});
    CHECK(cfg.params["dimension"].get<int>() == 16);
    CHECK(cfg.params["profile"].get<std::string>() == "none");
    auto c2 = cfg;
    apply_tolerance_overrides(c2, {"tick_variance=1e-18"});
    CHECK(c2.tolerances.at("tick_variance") == 1e-18);
    CHECK_THROWS_AS(apply_tolerance_overrides(c2, {"nope=1"}), ConfigError);
    CHECK_THROWS_AS(config_from_overrides(ScenarioKind::Swp, {"dimension"}), ConfigError);
}

TEST_CASE("twin-velocity report carries the 0.99995 factor") {
    const auto report = run_config(config_from_overrides(ScenarioKind::TwinVelocity, {}));
    CHECK(report.passed());
    const auto& run = report.runs.at(0);
    CHECK(run["internal_factors"][1].get<double>() == doctest::Approx(0.99995).epsilon(1e-12));
    const auto s = report.summary();
    CHECK(s["checks"][0]["tolerance"].get<double>() == 1e-12);
    CHECK(s["config"]["tolerances"]["identity"].get<double>() == 1e-12);
    CHECK(s.contains("library_version"));
}

TEST_CASE("observer twin checks the global phase sign") {
    const auto report = run_config(config_from_overrides(ScenarioKind::TwinObserver, {}));
    bool seen = false;
    for (const auto& c : report.checks)
        if (c.name == "global_phase_sign") {
            seen = true;
            CHECK(c.passed);
            CHECK(c.value < 0.0);
        }
    CHECK(seen);
}

TEST_CASE("a ten-point boost sweep gives ten monotone rows") {
    const auto cfg = parse_config(R"({"schema_version": 1, "scenario": "twin-momentum",
        "sweeps": [{"parameter": "boost", "start": 0.01, "stop": 0.1, "count": 10}]})");
    const auto report = run_config(cfg, {4});
    REQUIRE(report.runs.size() == 10);
    CHECK(report.passed());
    double previous = 2.0;
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(report.runs[i]["point"].get<std::size_t>() == i);
        const double f = report.runs[i]["internal_factors"][1].get<double>();
        CHECK(f < previous);
        previous = f;
    }
    const auto& factors = report.tables.front().second;
    CHECK(factors.columns.front() == "point");
    CHECK(factors.rows.size() == 20);
}

TEST_CASE("SWP series schema") {
    const auto report = run_config(config_from_overrides(ScenarioKind::Swp, {"points=11"}));
    const auto& [name, table] = report.tables.front();
    CHECK(name == "series");
    CHECK(table.columns == std::vector<std::string>{"t", "mean", "variance", "circular_variance"});
    CHECK(table.rows.size() == 11);
}

TEST_CASE("tolerance failures are reported, not hidden") {
    auto cfg = config_from_overrides(ScenarioKind::TwinVelocity, {});
    apply_tolerance_overrides(cfg, {"identity=0"});
    const auto report = run_config(cfg);
    CHECK_FALSE(report.passed());
}

TEST_CASE("shortest round-trip number formatting") {
    for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e-6, 123456789.0}) CHECK(std::stod(format_double(x)) == x);
    CHECK(format_double(0.1) == "0.1");
    CHECK(to_csv(Table{{"a", "b"}, {{1.0, 0.5}}}) == "a,b\n1,0.5\n");
}

TEST_CASE("emitted outputs are deterministic and round-trip") {
    const auto cfg = parse_config(R"({"schema_version": 1, "scenario": "twin-momentum",
        "sweeps": [{"parameter": "time", "start": 0.5, "stop": 10, "count": 4}]})");
    const auto a = scratch("det_a"), b = scratch("det_b");
    const auto fa = emit_results(run_config(cfg, {1}), a, "run", OutputFormat::Both);
    const auto fb = emit_results(run_config(cfg, {3}), b, "run", OutputFormat::Both);
    REQUIRE(fa.size() == fb.size());
    for (std::size_t i = 0; i < fa.size(); ++i) {
        CHECK(fa[i].filename() == fb[i].filename());
        CHECK(slurp(fa[i]) == slurp(fb[i]));
    }

    const auto text = slurp(a / "run.json");
    const auto parsed = json::parse(text);
    CHECK(parsed.dump(2) + "\n" == text);
    // The config echo parses back into the same configuration.
    const auto again = parse_config(parsed["config"].dump());
    CHECK(to_json(again) == parsed["config"]);

    CHECK_THROWS_AS(emit_results(run_config(cfg), "/proc/qclock_no_such_dir", "x", OutputFormat::Json), Error);
    CHECK_THROWS_AS(parse_output_format("xml"), ConfigError);
}

TEST_CASE("config echo with SI inputs parses back") {
    const auto cfg = parse_config(R"({"schema_version": 1, "scenario": "twin-velocity",
        "si": {"velocity_m_s": 2997924.58}})");
    const auto echo = to_json(cfg);
    CHECK(echo.contains("converted"));
    CHECK(to_json(parse_config(echo.dump())) == echo);
}
