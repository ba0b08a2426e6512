#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qclock/errors.hpp"
#include "qclock/units.hpp"

namespace qclock::cli {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Malformed or out-of-contract configuration. `field` names the offending
/// entry ("params.boost", "line 4") when known.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

enum class ScenarioKind {
    TwinMomentum,
    TwinVelocity,
    TwinObserver,
    Swp,
    IonSpectroscopy,
    TrotterAccel,
    ImpulseBoost,
    EntanglementDemo,
};

std::string_view to_string(ScenarioKind kind);
ScenarioKind parse_scenario_kind(std::string_view name);
const std::vector<ScenarioKind>& all_scenario_kinds();

/// Linearly spaced values of one scalar parameter; several sweeps form a
/// Cartesian product in declaration order (last varies fastest).
struct Sweep {
    std::string parameter;
    double start = 0.0;
    double stop = 0.0;
    std::size_t count = 1;

    std::vector<double> values() const;
};

struct ScenarioConfig {
    int schema_version = kSchemaVersion;
    ScenarioKind kind = ScenarioKind::TwinVelocity;
    json params = json::object();         ///< complete parameter block, defaults filled in
    json si = json::object();             ///< optional SI-unit inputs, already folded into params
    json converted = json::object();      ///< ratios derived from the SI block
    std::vector<Sweep> sweeps;
    std::filesystem::path out_dir = ".";
    std::string stem;
    std::map<std::string, double> tolerances;  ///< complete set, defaults filled in
    ModelParams regime{};
};

/// Default parameter block of a scenario kind.
json default_params(ScenarioKind kind);

/// Default tolerances of a scenario kind.
std::map<std::string, double> default_tolerances(ScenarioKind kind);

/// Parses a JSON config document. `origin` prefixes error messages.
ScenarioConfig parse_config(std::string_view text, std::string_view origin = "config");
ScenarioConfig load_config(const std::filesystem::path& path);

/// Config for a bare subcommand: defaults plus `key=value` overrides, where
/// value is parsed as JSON (falling back to a string).
ScenarioConfig config_from_overrides(ScenarioKind kind, const std::vector<std::string>& assignments);

/// Applies `name=value` tolerance overrides; unknown names are rejected.
void apply_tolerance_overrides(ScenarioConfig& config, const std::vector<std::string>& assignments);

/// Parameter block for one sweep point.
json params_at(const ScenarioConfig& config, const std::vector<double>& sweep_values);

/// All sweep points in emission order (one empty point when there are no sweeps).
std::vector<std::vector<double>> sweep_points(const ScenarioConfig& config);

/// Rejects parameter blocks that would leave the regime guard, naming the guard.
void validate_regime(const ScenarioConfig& config, const json& params);

/// Echo of the effective configuration, suitable for reports.
json to_json(const ScenarioConfig& config);

}  // namespace qclock::cli
