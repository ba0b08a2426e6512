#include "qclock/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "qclock/spectrum.hpp"

namespace qclock::cli {

namespace {

constexpr double kSpeedOfLight = 299792458.0;      // m/s
constexpr double kPlanck = 6.62607015e-34;         // J s

struct KindName {
    ScenarioKind kind;
    std::string_view name;
};

constexpr KindName kKinds[] = {
    {ScenarioKind::TwinMomentum, "twin-momentum"},
    {ScenarioKind::TwinVelocity, "twin-velocity"},
    {ScenarioKind::TwinObserver, "twin-observer"},
    {ScenarioKind::Swp, "swp"},
    {ScenarioKind::IonSpectroscopy, "ion-spectroscopy"},
    {ScenarioKind::TrotterAccel, "trotter-accel"},
    {ScenarioKind::ImpulseBoost, "impulse-boost"},
    {ScenarioKind::EntanglementDemo, "entanglement-demo"},
};

std::size_t line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

double number_at(const json& obj, const std::string& key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(path + key, "missing");
    if (!it->is_number()) throw ConfigError(path + key, "expected a number");
    const double v = it->get<double>();
    if (!std::isfinite(v)) throw ConfigError(path + key, "must be finite");
    return v;
}

std::vector<double> numbers_at(const json& obj, const std::string& key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end() || !it->is_array()) throw ConfigError(path + key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : *it) {
        if (!v.is_number()) throw ConfigError(path + key, "expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

// Overlays user params onto defaults, rejecting unknown keys and type changes.
// Counts (dimensions, grid sizes, step schedules) must be non-negative
// integers; silently truncating 3.5 to 3 would hide a config mistake.
bool is_count(const json& v) { return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0); }

void check_counts(const std::string& key, const json& def, const json& value, const std::string& path) {
    if (def.is_number_integer() && !is_count(value)) throw ConfigError(path, "expected a non-negative integer");
    if (def.is_array()) {
        const bool counts = key == "steps" || key == "study_dimensions";
        for (const auto& v : value) {
            if (counts && !is_count(v)) throw ConfigError(path, "expected non-negative integers");
            if (!counts && !v.is_number()) throw ConfigError(path, "expected numbers");
        }
    }
}

json merge_params(const json& defaults, const json& user, const std::string& path) {
    if (!user.is_object()) throw ConfigError(path, "expected an object");
    json out = defaults;
    for (const auto& [key, value] : user.items()) {
        if (!defaults.contains(key)) throw ConfigError(path + "." + key, "unknown parameter");
        const json& def = defaults.at(key);
        const bool compatible = (def.is_number() && value.is_number()) ||
                                (def.is_boolean() && value.is_boolean()) ||
                                (def.is_string() && value.is_string()) ||
                                (def.is_array() && value.is_array());
        if (!compatible) throw ConfigError(path + "." + key, "wrong type");
        check_counts(key, def, value, path + "." + key);
        out[key] = value;
    }
    return out;
}

void require_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError(path.empty() ? key : path + "." + key, "unknown field");
    }
}

void fold_si(ScenarioConfig& cfg) {
    if (cfg.si.empty()) return;
    const std::string path = "si.";
    switch (cfg.kind) {
        case ScenarioKind::IonSpectroscopy: {
            require_keys(cfg.si, {"mass_kg", "transition_frequency_hz", "trap_frequency_hz"}, "si");
            const double mass = number_at(cfg.si, "mass_kg", path);
            if (!(mass > 0.0)) throw ConfigError("si.mass_kg", "must be positive");
            const double rest = mass * kSpeedOfLight * kSpeedOfLight;
            if (cfg.si.contains("transition_frequency_hz"))
                cfg.converted["transition"] = kPlanck * number_at(cfg.si, "transition_frequency_hz", path) / rest;
            if (cfg.si.contains("trap_frequency_hz"))
                cfg.converted["trap"] = kPlanck * number_at(cfg.si, "trap_frequency_hz", path) / rest;
            break;
        }
        case ScenarioKind::TwinVelocity:
        case ScenarioKind::TwinObserver:
            require_keys(cfg.si, {"velocity_m_s"}, "si");
            cfg.converted["boost"] = number_at(cfg.si, "velocity_m_s", path) / kSpeedOfLight;
            break;
        case ScenarioKind::EntanglementDemo:
            require_keys(cfg.si, {"velocity_m_s"}, "si");
            cfg.converted["velocity"] = number_at(cfg.si, "velocity_m_s", path) / kSpeedOfLight;
            break;
        case ScenarioKind::TwinMomentum: {
            require_keys(cfg.si, {"mass_kg", "momentum_kg_m_s"}, "si");
            const double mass = number_at(cfg.si, "mass_kg", path);
            if (!(mass > 0.0)) throw ConfigError("si.mass_kg", "must be positive");
            cfg.converted["boost"] = number_at(cfg.si, "momentum_kg_m_s", path) / (mass * kSpeedOfLight);
            break;
        }
        default: throw ConfigError("si", "this scenario has no SI-unit inputs");
    }
    for (const auto& [key, value] : cfg.converted.items()) cfg.params[key] = value;
}

void validate_sweeps(const ScenarioConfig& cfg) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < cfg.sweeps.size(); ++i) {
        const auto& s = cfg.sweeps[i];
        const std::string path = "sweeps[" + std::to_string(i) + "]";
        if (!cfg.params.contains(s.parameter) || !cfg.params.at(s.parameter).is_number())
            throw ConfigError(path + ".parameter", "'" + s.parameter + "' is not a numeric parameter");
        if (!seen.insert(s.parameter).second) throw ConfigError(path + ".parameter", "swept twice");
        if (s.count == 0) throw ConfigError(path + ".count", "must be at least 1");
        if (!std::isfinite(s.start) || !std::isfinite(s.stop)) throw ConfigError(path, "range must be finite");
    }
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
    for (const auto& k : kKinds)
        if (k.kind == kind) return k.name;
    return "unknown";
}

ScenarioKind parse_scenario_kind(std::string_view name) {
    for (const auto& k : kKinds)
        if (k.name == name) return k.kind;
    throw ConfigError("scenario", "unknown scenario kind '" + std::string(name) + "'");
}

const std::vector<ScenarioKind>& all_scenario_kinds() {
    static const std::vector<ScenarioKind> kinds = [] {
        std::vector<ScenarioKind> v;
        for (const auto& k : kKinds) v.push_back(k.kind);
        return v;
    }();
    return kinds;
}

std::vector<double> Sweep::values() const {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = count == 1 ? start
                            : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    return out;
}

json default_params(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::TwinMomentum:
            return {{"epsilons", {0.0, 0.1}}, {"boost", 0.1}, {"time", 2.0}, {"probe_momenta", {0.0, 0.05}},
                    {"centering", "bare-mass"}, {"centering_level", 0}};
        case ScenarioKind::TwinVelocity:
        case ScenarioKind::TwinObserver:
            return {{"epsilons", {0.0, 0.1}}, {"boost", 0.01}, {"time", 2.0}, {"probe_momenta", {0.0, 0.05}}};
        case ScenarioKind::Swp:
            return {{"dimension", 8},        {"level_spacing", 0.01}, {"profile", "momentum-nonclassical"},
                    {"boost", 0.1},          {"t_begin_ticks", 0.5},  {"t_end_ticks", 10.5},
                    {"points", 1001},        {"tick_resolution", 0.02}, {"study_dimensions", json::array()}};
        case ScenarioKind::IonSpectroscopy:
            return {{"transition", 1e-3}, {"trap", 1e-5},       {"lamb_dicke", 0.05},
                    {"rabi", 1e-7},       {"pulse_duration", 0.0}, {"fock_cutoff", 0},
                    {"fock_index", 0},    {"points", 81},       {"span_in_rabi", 0.5}};
        case ScenarioKind::TrotterAccel:
            return {{"epsilons", {0.0, 0.1}}, {"acceleration", 0.02}, {"time", 2.0}, {"points", 256},
                    {"length", 40.0},         {"width", 2.0},         {"center", 0.0}, {"momentum", 0.0},
                    {"steps", {32, 64, 128, 256, 512}}};
        case ScenarioKind::ImpulseBoost:
            return {{"epsilons", {0.0, 0.1}}, {"velocity", 0.05}, {"points", 256}, {"length", 40.0},
                    {"width", 2.0},           {"durations", {0.1, 0.01, 0.001, 0.0001}},
                    {"internal_coupled", true}};
        case ScenarioKind::EntanglementDemo:
            return {{"epsilons", {0.0, 0.1}}, {"momentum", 0.0}, {"velocity", 0.01}, {"levels", 2}};
    }
    return json::object();
}

std::map<std::string, double> default_tolerances(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::TwinMomentum:
        case ScenarioKind::TwinVelocity:
        case ScenarioKind::TwinObserver: return {{"identity", 1e-12}, {"factor_relative", 1e-12}};
        case ScenarioKind::Swp: return {{"tick_variance", 1e-20}, {"tick_spacing_relative", 1e-9}};
        case ScenarioKind::IonSpectroscopy: return {{"oracle_relative", 0.01}, {"first_order_relative", 1e-3}};
        case ScenarioKind::TrotterAccel: return {{"ratio_min", 1.6}, {"ratio_max", 2.4}, {"terminal_error", 1e-4}};
        case ScenarioKind::ImpulseBoost: return {{"ratio_min", 8.0}, {"ratio_max", 12.0}};
        case ScenarioKind::EntanglementDemo: return {{"entropy_abs", 1e-10}};
    }
    return {};
}

ScenarioConfig parse_config(std::string_view text, std::string_view origin) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string(origin) + ": line " + std::to_string(line_of(text, e.byte)),
                          "parse error: " + std::string(e.what()));
    }
    if (!doc.is_object()) throw ConfigError(std::string(origin), "top level must be an object");
    // "converted" appears in report echoes; it is recomputed from "si", so accept and ignore it.
    require_keys(doc, {"schema_version", "scenario", "params", "sweeps", "output", "tolerances", "si", "regime", "converted"},
                 "");

    ScenarioConfig cfg;
    if (!doc.contains("schema_version")) throw ConfigError("schema_version", "missing (mandatory)");
    if (!doc["schema_version"].is_number_integer()) throw ConfigError("schema_version", "expected an integer");
    cfg.schema_version = doc["schema_version"].get<int>();
    if (cfg.schema_version != kSchemaVersion)
        throw ConfigError("schema_version", "unsupported version " + std::to_string(cfg.schema_version));

    if (!doc.contains("scenario") || !doc["scenario"].is_string()) throw ConfigError("scenario", "expected a string");
    cfg.kind = parse_scenario_kind(doc["scenario"].get<std::string>());
    cfg.stem = std::string(to_string(cfg.kind));

    cfg.params = merge_params(default_params(cfg.kind), doc.value("params", json::object()), "params");

    if (doc.contains("regime")) {
        const json& r = doc["regime"];
        if (!r.is_object()) throw ConfigError("regime", "expected an object");
        require_keys(r, {"epsilon_max", "kappa_max", "strict"}, "regime");
        if (r.contains("epsilon_max")) cfg.regime.epsilon_max = number_at(r, "epsilon_max", "regime.");
        if (r.contains("kappa_max")) cfg.regime.kappa_max = number_at(r, "kappa_max", "regime.");
        if (r.contains("strict")) {
            if (!r["strict"].is_boolean()) throw ConfigError("regime.strict", "expected a boolean");
            cfg.regime.strict_regime = r["strict"].get<bool>();
        }
    }

    if (doc.contains("si")) {
        if (!doc["si"].is_object()) throw ConfigError("si", "expected an object");
        cfg.si = doc["si"];
        fold_si(cfg);
    }

    if (doc.contains("sweeps")) {
        const json& sw = doc["sweeps"];
        if (!sw.is_array()) throw ConfigError("sweeps", "expected an array");
        for (std::size_t i = 0; i < sw.size(); ++i) {
            const std::string path = "sweeps[" + std::to_string(i) + "]";
            const json& s = sw[i];
            if (!s.is_object()) throw ConfigError(path, "expected an object");
            require_keys(s, {"parameter", "start", "stop", "count"}, path);
            if (!s.contains("parameter") || !s["parameter"].is_string())
                throw ConfigError(path + ".parameter", "expected a string");
            if (!s.contains("count") || !s["count"].is_number_integer() || s["count"].get<long long>() < 1)
                throw ConfigError(path + ".count", "expected a positive integer");
            cfg.sweeps.push_back({s["parameter"].get<std::string>(), number_at(s, "start", path + "."),
                                  number_at(s, "stop", path + "."), s["count"].get<std::size_t>()});
        }
    }
    validate_sweeps(cfg);

    if (doc.contains("output")) {
        const json& o = doc["output"];
        if (!o.is_object()) throw ConfigError("output", "expected an object");
        require_keys(o, {"dir", "stem"}, "output");
        if (o.contains("dir")) {
            if (!o["dir"].is_string()) throw ConfigError("output.dir", "expected a string");
            cfg.out_dir = o["dir"].get<std::string>();
        }
        if (o.contains("stem")) {
            if (!o["stem"].is_string() || o["stem"].get<std::string>().empty())
                throw ConfigError("output.stem", "expected a non-empty string");
            cfg.stem = o["stem"].get<std::string>();
        }
    }

    cfg.tolerances = default_tolerances(cfg.kind);
    if (doc.contains("tolerances")) {
        const json& t = doc["tolerances"];
        if (!t.is_object()) throw ConfigError("tolerances", "expected an object");
        for (const auto& [key, value] : t.items()) {
            if (!cfg.tolerances.count(key)) throw ConfigError("tolerances." + key, "unknown tolerance");
            if (!value.is_number()) throw ConfigError("tolerances." + key, "expected a number");
            cfg.tolerances[key] = value.get<double>();
        }
    }

    for (const auto& point : sweep_points(cfg)) validate_regime(cfg, params_at(cfg, point));
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string(), "cannot read config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

ScenarioConfig config_from_overrides(ScenarioKind kind, const std::vector<std::string>& assignments) {
    json doc = {{"schema_version", kSchemaVersion}, {"scenario", std::string(to_string(kind))}};
    json params = json::object();
    for (const auto& a : assignments) {
        const auto eq = a.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("--set " + a, "expected key=value");
        const std::string key = a.substr(0, eq);
        const std::string value = a.substr(eq + 1);
        try {
            params[key] = json::parse(value);
        } catch (const json::parse_error&) {
            params[key] = value;
        }
    }
    doc["params"] = params;
    return parse_config(doc.dump(), "--set");
}

void apply_tolerance_overrides(ScenarioConfig& config, const std::vector<std::string>& assignments) {
    for (const auto& a : assignments) {
        const auto eq = a.find('=');
        if (eq == std::string::npos) throw ConfigError("--tolerance " + a, "expected name=value");
        const std::string name = a.substr(0, eq);
        if (!config.tolerances.count(name)) throw ConfigError("--tolerance " + name, "unknown tolerance");
        try {
            std::size_t used = 0;
            const double v = std::stod(a.substr(eq + 1), &used);
            if (used != a.size() - eq - 1) throw std::invalid_argument(a);
            config.tolerances[name] = v;
        } catch (const std::exception&) {
            throw ConfigError("--tolerance " + name, "expected a number");
        }
    }
}

std::vector<std::vector<double>> sweep_points(const ScenarioConfig& config) {
    std::vector<std::vector<double>> points{{}};
    for (const auto& s : config.sweeps) {
        std::vector<std::vector<double>> next;
        for (const auto& prefix : points)
            for (double v : s.values()) {
                auto p = prefix;
                p.push_back(v);
                next.push_back(std::move(p));
            }
        points = std::move(next);
    }
    return points;
}

json params_at(const ScenarioConfig& config, const std::vector<double>& sweep_values) {
    json p = config.params;
    for (std::size_t i = 0; i < config.sweeps.size() && i < sweep_values.size(); ++i) {
        const auto& name = config.sweeps[i].parameter;
        if (p[name].is_number_integer()) {
            p[name] = static_cast<long long>(std::llround(sweep_values[i]));
        } else {
            p[name] = sweep_values[i];
        }
    }
    return p;
}

void validate_regime(const ScenarioConfig& config, const json& params) {
    const ModelParams& R = config.regime;
    auto fail_kappa = [&](const std::string& field, double p) {
        throw RegimeError("kappa_max", "params." + field + " drives momentum " + std::to_string(p) +
                                           " mc past the regime guard kappa_max = " + std::to_string(R.kappa_max));
    };
    auto check_momentum = [&](const std::string& field, double p) {
        if (!(p * p < R.kappa_max)) fail_kappa(field, p);
    };
    double max_mass = 1.0;
    if (params.contains("epsilons")) {
        const auto eps = numbers_at(params, "epsilons", "params.");
        try {
            (void)make_spectrum(eps);
        } catch (const ValidationError& e) {
            throw ConfigError("params.epsilons", e.what());
        }
        if (!(eps.back() < R.epsilon_max))
            throw RegimeError("epsilon_max", "params.epsilons reaches " + std::to_string(eps.back()) +
                                                 " mc^2, past the regime guard epsilon_max = " +
                                                 std::to_string(R.epsilon_max));
        max_mass = 1.0 + eps.back();
    }
    auto max_abs = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    };

    switch (config.kind) {
        case ScenarioKind::TwinMomentum: {
            const double b = std::abs(number_at(params, "boost", "params."));
            check_momentum("boost", max_abs(numbers_at(params, "probe_momenta", "params.")) + b);
            break;
        }
        case ScenarioKind::TwinVelocity:
        case ScenarioKind::TwinObserver: {
            const double v = std::abs(number_at(params, "boost", "params."));
            check_momentum("boost", max_abs(numbers_at(params, "probe_momenta", "params.")) + max_mass * v);
            break;
        }
        case ScenarioKind::EntanglementDemo:
            check_momentum("velocity", std::abs(number_at(params, "momentum", "params.")) +
                                           max_mass * std::abs(number_at(params, "velocity", "params.")));
            break;
        case ScenarioKind::TrotterAccel:
            check_momentum("acceleration", std::abs(number_at(params, "momentum", "params.")) +
                                               max_mass * std::abs(number_at(params, "acceleration", "params.") *
                                                                   number_at(params, "time", "params.")));
            break;
        case ScenarioKind::ImpulseBoost:
            check_momentum("velocity", max_mass * std::abs(number_at(params, "velocity", "params.")));
            break;
        case ScenarioKind::Swp: {
            const double n = number_at(params, "dimension", "params.");
            const double top = (n - 1.0) * number_at(params, "level_spacing", "params.");
            if (!(top < R.epsilon_max))
                throw RegimeError("epsilon_max", "params.level_spacing puts the top SWP level at " +
                                                     std::to_string(top) + " mc^2, past epsilon_max = " +
                                                     std::to_string(R.epsilon_max));
            check_momentum("boost", (1.0 + std::max(0.0, top)) * std::abs(number_at(params, "boost", "params.")));
            break;
        }
        case ScenarioKind::IonSpectroscopy: {
            const double u = number_at(params, "transition", "params.");
            if (!(u < R.epsilon_max))
                throw RegimeError("epsilon_max", "params.transition " + std::to_string(u) +
                                                     " mc^2 exceeds epsilon_max = " + std::to_string(R.epsilon_max));
            break;
        }
    }
}

json to_json(const ScenarioConfig& config) {
    json j;
    j["schema_version"] = config.schema_version;
    j["scenario"] = std::string(to_string(config.kind));
    j["params"] = config.params;
    if (!config.si.empty()) {
        j["si"] = config.si;
        j["converted"] = config.converted;
    }
    json sweeps = json::array();
    for (const auto& s : config.sweeps)
        sweeps.push_back({{"parameter", s.parameter}, {"start", s.start}, {"stop", s.stop}, {"count", s.count}});
    j["sweeps"] = sweeps;
    j["regime"] = {{"epsilon_max", config.regime.epsilon_max},
                   {"kappa_max", config.regime.kappa_max},
                   {"strict", config.regime.strict_regime}};
    j["output"] = {{"dir", config.out_dir.generic_string()}, {"stem", config.stem}};
    json tol = json::object();
    for (const auto& [k, v] : config.tolerances) tol[k] = v;
    j["tolerances"] = tol;
    return j;
}

}  // namespace qclock::cli
