#include <charconv>
#include <fstream>
#include <system_error>

#include "qclock/cli/runner.hpp"

namespace qclock::cli {

OutputFormat parse_output_format(std::string_view name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    if (name == "both") return OutputFormat::Both;
    throw ConfigError("--format", "expected csv, json or both");
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + path.string());
    f << content;
    if (!f) throw Error("write failed for " + path.string());
}

}  // namespace

std::vector<std::filesystem::path> emit_results(const RunReport& report, const std::filesystem::path& dir,
                                                const std::string& stem, OutputFormat format) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());

    std::vector<std::filesystem::path> written;
    if (format != OutputFormat::Csv) {
        const auto path = dir / (stem + ".json");
        write_file(path, report.summary().dump(2) + "\n");
        written.push_back(path);
    }
    if (format != OutputFormat::Json) {
        for (const auto& [name, table] : report.tables) {
            const auto path = dir / (stem + "_" + name + ".csv");
            write_file(path, to_csv(table));
            written.push_back(path);
        }
    }
    return written;
}

}  // namespace qclock::cli
