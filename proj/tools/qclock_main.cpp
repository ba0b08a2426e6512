// qclock: command-line front end for the scenario runner.
//
// Exit codes: 0 all checks passed, 1 a check failed, 2 bad configuration,
// 3 engine error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qclock/cli/runner.hpp"
#include "qclock/version.hpp"

namespace {

using namespace qclock;
using namespace qclock::cli;

struct Common {
    std::string out_dir;
    std::string format = "both";
    std::string stem;
    bool strict = false;
    std::size_t threads = 1;
    std::vector<std::string> tolerances;
    bool quiet = false;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--out-dir", c.out_dir, "Output directory (overrides the config)");
    app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json", "both"}));
    app->add_option("--stem", c.stem, "Output file stem (default: scenario name)");
    app->add_flag("--strict-regime", c.strict, "Treat regime-guard warnings as errors");
    app->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
    app->add_option("--tolerance", c.tolerances, "Override a pass/fail tolerance, name=value");
    app->add_flag("-q,--quiet", c.quiet, "Only print the verdict");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path, "cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// --set overrides on top of a config file: patch the document and re-parse
// so every override goes through the same validation.
ScenarioConfig load_with_overrides(const std::string& path, ScenarioKind kind, const std::vector<std::string>& sets) {
    if (sets.empty()) {
        auto cfg = parse_config(read_file(path), path);
        if (cfg.kind != kind)
            throw ConfigError("scenario", "config is for '" + std::string(to_string(cfg.kind)) + "', not '" +
                                              std::string(to_string(kind)) + "'");
        return cfg;
    }
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error&) {
        return parse_config(read_file(path), path);  // reports the line
    }
    const auto patch = config_from_overrides(kind, sets);
    if (!doc.contains("params") || !doc["params"].is_object()) doc["params"] = json::object();
    for (const auto& a : sets) {
        const std::string key = a.substr(0, a.find('='));
        doc["params"][key] = patch.params.at(key);
    }
    auto cfg = parse_config(doc.dump(), path);
    if (cfg.kind != kind) throw ConfigError("scenario", "config is for a different scenario");
    return cfg;
}

void print_report(const RunReport& r, bool quiet) {
    if (!quiet) {
        for (const auto& c : r.checks) {
            if (c.relation == "in")
                std::printf("%s  %-40s %s in [%s, %s]\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                            format_double(c.value).c_str(), format_double(c.lower).c_str(),
                            format_double(c.tolerance).c_str());
            else
                std::printf("%s  %-40s %s %s %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                            format_double(c.value).c_str(), c.relation.c_str(), format_double(c.tolerance).c_str());
        }
        for (std::size_t i = 0; i < r.timings.size(); ++i) std::printf("timing  point %zu  %.3f s\n", i, r.timings[i]);
        std::printf("timing  total  %.3f s\n", r.total_seconds);
    }
    std::printf("%s\n", r.passed() ? "all checks passed" : "some checks FAILED");
}

int execute(ScenarioConfig cfg, const Common& c) {
    if (c.strict) cfg.regime.strict_regime = true;
    apply_tolerance_overrides(cfg, c.tolerances);
    if (!c.out_dir.empty()) cfg.out_dir = c.out_dir;
    if (!c.stem.empty()) cfg.stem = c.stem;
    if (cfg.stem.empty()) cfg.stem = std::string(to_string(cfg.kind));
    const auto format = parse_output_format(c.format);

    RunReport report;
    try {
        report = run_config(cfg, RunOptions{c.threads});
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    try {
        for (const auto& p : emit_results(report, cfg.out_dir, cfg.stem, format))
            if (!c.quiet) std::printf("wrote   %s\n", p.string().c_str());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    print_report(report, c.quiet);
    return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum clock time-dilation scenarios"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    Common common;
    std::string config_path;
    auto* run = app.add_subcommand("run", "Run a scenario described by a JSON config file");
    run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    add_common(run, common);

    std::vector<std::string> sets;
    std::string kind_config;
    std::vector<std::pair<CLI::App*, ScenarioKind>> kinds;
    for (const auto kind : all_scenario_kinds()) {
        auto* sub = app.add_subcommand(std::string(to_string(kind)), "Run the " + std::string(to_string(kind)) +
                                                                         " scenario (defaults unless overridden)");
        sub->add_option("--config", kind_config, "Config file to start from");
        sub->add_option("--set", sets, "Parameter override, key=value (value parsed as JSON)");
        add_common(sub, common);
        kinds.emplace_back(sub, kind);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    ScenarioConfig cfg;
    try {
        if (run->parsed()) {
            cfg = load_config(config_path);
        } else {
            for (const auto& [sub, kind] : kinds) {
                if (!sub->parsed()) continue;
                cfg = kind_config.empty() ? config_from_overrides(kind, sets)
                                          : load_with_overrides(kind_config, kind, sets);
            }
        }
    } catch (const Error& e) {  // ConfigError, RegimeError, ValidationError at config stage
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }

    try {
        return execute(std::move(cfg), common);
    } catch (const Error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
}
