#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "qclock/cli/config.hpp"

namespace qclock::cli {

/// Column-major-free numeric table; emitted as CSV with a header row.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// One pass/fail comparison. relation is "<", "<=", ">" or "in".
struct Check {
    std::string name;
    double value = 0.0;
    double lower = 0.0;  ///< only for "in"
    double tolerance = 0.0;
    std::string relation;
    bool passed = false;
};

struct RunReport {
    json config;                                       ///< effective configuration echo
    std::vector<json> runs;                            ///< one summary per sweep point
    std::vector<Check> checks;
    std::vector<std::pair<std::string, Table>> tables; ///< named CSV outputs, in emission order
    std::vector<double> timings;                       ///< wall-clock seconds per sweep point
    double total_seconds = 0.0;
    std::string version;

    bool passed() const;
    /// Deterministic JSON summary. Timings are left out so that identical
    /// configs give byte-identical files.
    json summary() const;
};

struct RunOptions {
    std::size_t threads = 1;
};

RunReport run_config(const ScenarioConfig& config, const RunOptions& options = {});
RunReport run_config(const std::filesystem::path& path, const RunOptions& options = {});

enum class OutputFormat { Csv, Json, Both };
OutputFormat parse_output_format(std::string_view name);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);
std::string to_csv(const Table& table);

/// Writes <stem>.json and/or <stem>_<table>.csv into dir (created if
/// missing). Returns the written paths. Throws Error when a path is not
/// writable.
std::vector<std::filesystem::path> emit_results(const RunReport& report, const std::filesystem::path& dir,
                                                const std::string& stem, OutputFormat format);

}  // namespace qclock::cli
