#include "qclock/cli/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "qclock/grid_dynamics.hpp"
#include "qclock/ion_clock.hpp"
#include "qclock/scenarios.hpp"
#include "qclock/swp_clock.hpp"
#include "qclock/version.hpp"

namespace qclock::cli {

namespace {

struct PointResult {
    json summary = json::object();
    std::vector<std::pair<std::string, Table>> tables;
    std::vector<Check> checks;
};

Check less_than(std::string name, double value, double tolerance) {
    return {std::move(name), value, 0.0, tolerance, "<", value < tolerance};
}

Check within(std::string name, double value, double lo, double hi) {
    return {std::move(name), value, lo, hi, "in", value >= lo && value <= hi};
}

Table& table(PointResult& r, const std::string& name, std::vector<std::string> columns) {
    for (auto& [n, t] : r.tables)
        if (n == name) return t;
    r.tables.push_back({name, Table{std::move(columns), {}}});
    return r.tables.back().second;
}

std::vector<double> doubles(const json& p, const char* key) { return p.at(key).get<std::vector<double>>(); }

std::shared_ptr<const InternalSpectrum> spectrum_of(const json& p, const ModelParams& regime) {
    const auto eps = doubles(p, "epsilons");
    return std::make_shared<const InternalSpectrum>(make_spectrum(eps, regime));
}

std::vector<complex> equal_amplitudes(std::size_t levels) { return std::vector<complex>(levels, complex{1.0, 0.0}); }

// ---------------------------------------------------------------------------

PointResult run_twin(ScenarioKind kind, const json& p, const ScenarioConfig& cfg) {
    const auto spec = spectrum_of(p, cfg.regime);
    const SequenceKind seq = kind == ScenarioKind::TwinMomentum   ? SequenceKind::MomentumTwin
                             : kind == ScenarioKind::TwinVelocity ? SequenceKind::VelocityTwinClockMoves
                                                                  : SequenceKind::VelocityTwinObserverMoves;
    SequenceOptions opt;
    opt.params = cfg.regime;
    opt.tolerance = INFINITY;  // judged below against the configured tolerance
    if (kind == ScenarioKind::TwinMomentum) {
        const auto centering = p.at("centering").get<std::string>();
        if (centering == "bare-mass") opt.centering = TranslationCentering::BareMass;
        else if (centering == "level-mass") opt.centering = TranslationCentering::LevelMass;
        else if (centering == "state-dependent") opt.centering = TranslationCentering::StateDependent;
        else throw ConfigError("params.centering", "expected bare-mass, level-mass or state-dependent");
        opt.centering_level = p.at("centering_level").get<std::size_t>();
    }
    const double boost = p.at("boost").get<double>();
    const double t = p.at("time").get<double>();
    const auto momenta = doubles(p, "probe_momenta");
    const PlaneWaveState probe = default_probe(spec, momenta);
    const SequenceResult r = run_sequence(seq, boost, t, probe, opt);

    PointResult out;
    auto& s = out.summary;
    s["boost"] = boost;
    s["time"] = t;
    s["internal_factors"] = r.internal_factors;
    s["expected_internal_factors"] = r.expected_internal_factors;
    s["factor_measured"] = r.factor_measured;
    json pairs = json::array();
    for (Eigen::Index i = 0; i < r.pair_factors.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < r.pair_factors.cols(); ++j) row.push_back(r.pair_factors(i, j));
        pairs.push_back(row);
    }
    s["pair_factors"] = pairs;
    s["global_phase"] = r.global_phase;
    s["expected_global_phase"] = r.expected_global_phase;
    s["global_phase_measured"] = r.global_phase_measured;
    s["max_fidelity_deviation"] = r.max_fidelity_deviation;
    s["max_factor_relative_error"] = r.max_factor_relative_error;
    s["lorentz_gamma"] = r.lorentz_gamma;
    s["mean_gamma"] = r.mean_gamma;

    auto& f = table(out, "factors", {"boost", "time", "level", "energy", "mass", "internal_factor",
                                     "expected_factor", "measured", "lorentz_gamma"});
    for (std::size_t n = 0; n < spec->size(); ++n)
        f.rows.push_back({boost, t, static_cast<double>(n), spec->energy(n), spec->mass(n), r.internal_factors[n],
                          r.expected_internal_factors[n], r.factor_measured[n] ? 1.0 : 0.0, r.lorentz_gamma[n]});
    auto& c = table(out, "components", {"boost", "time", "level", "momentum", "fidelity_deviation"});
    for (const auto& comp : r.components)
        c.rows.push_back({boost, t, static_cast<double>(comp.level), comp.momentum, comp.fidelity_deviation});

    out.checks.push_back(less_than("identity", r.max_fidelity_deviation, cfg.tolerances.at("identity")));
    out.checks.push_back(
        less_than("factor_relative", r.max_factor_relative_error, cfg.tolerances.at("factor_relative")));
    if (kind == ScenarioKind::TwinObserver && boost != 0.0 && t > 0.0)
        out.checks.push_back(less_than("global_phase_sign", r.global_phase, 0.0));
    return out;
}

PointResult run_swp(const json& p, const ScenarioConfig& cfg) {
    const auto dim = p.at("dimension").get<std::size_t>();
    const double spacing = p.at("level_spacing").get<double>();
    const double boost = p.at("boost").get<double>();
    const auto profile_name = p.at("profile").get<std::string>();
    const SwpClock clock(dim, spacing);

    DilationProfile profile = DilationProfile::none(dim);
    if (profile_name == "none") {
    } else if (profile_name == "velocity-classical") {
        profile = DilationProfile::velocity_classical(dim, boost);
    } else if (profile_name == "observer-classical") {
        profile = DilationProfile::observer_classical(dim, boost);
    } else if (profile_name == "momentum-nonclassical") {
        profile = DilationProfile::momentum_nonclassical(boost, make_ladder_spectrum(dim, spacing, cfg.regime));
    } else {
        throw ConfigError("params.profile",
                          "expected none, velocity-classical, observer-classical or momentum-nonclassical");
    }

    const double tau = clock.tick();
    const double t0 = p.at("t_begin_ticks").get<double>() * tau;
    const double t1 = p.at("t_end_ticks").get<double>() * tau;
    const auto points = p.at("points").get<std::size_t>();
    if (points < 2) throw ConfigError("params.points", "need at least two time points");
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(points - 1);

    PointResult out;
    auto& series = table(out, "series", {"t", "mean", "variance", "circular_variance"});
    for (const auto& r : variance_timeseries(clock, profile, grid))
        series.rows.push_back({r.t, r.mean, r.variance, r.circular_variance});

    const TickSearch ticks =
        find_effective_ticks(clock, profile, t0, t1, p.at("tick_resolution").get<double>() * tau);
    auto& tt = table(out, "ticks", {"t", "variance"});
    double vmax = 0.0, vmin = INFINITY;
    for (const auto& t : ticks.ticks) {
        tt.rows.push_back({t.t, t.variance});
        vmax = std::max(vmax, t.variance / (tau * tau));
        vmin = std::min(vmin, t.variance / (tau * tau));
    }

    auto& s = out.summary;
    s["tau"] = tau;
    s["profile"] = profile.name();
    s["multipliers"] = std::vector<double>(profile.multipliers().begin(), profile.multipliers().end());
    s["tick_count"] = ticks.ticks.size();
    s["mean_spacing"] = ticks.mean_spacing;
    s["spacing_deviation"] = ticks.spacing_deviation;
    s["relative_spacing_deviation"] = ticks.mean_spacing / tau - 1.0;
    s["min_tick_variance_tau2"] = ticks.ticks.empty() ? 0.0 : vmin;
    s["max_tick_variance_tau2"] = vmax;
    if (!ticks.diagnostic.empty()) s["diagnostic"] = ticks.diagnostic;

    if (profile.uniform() && ticks.ticks.size() >= 2) {
        const double expected = tau / profile.multipliers()[0];
        out.checks.push_back(less_than("tick_spacing_relative", std::abs(ticks.mean_spacing / expected - 1.0),
                                       cfg.tolerances.at("tick_spacing_relative")));
    }
    if (profile_name == "none")
        out.checks.push_back(less_than("tick_variance", vmax, cfg.tolerances.at("tick_variance")));

    const auto study = p.at("study_dimensions").get<std::vector<std::size_t>>();
    if (!study.empty()) {
        auto& st = table(out, "tick_study", {"dimension", "tau", "mean_spacing", "relative_deviation",
                                             "mean_min_variance_tau2"});
        for (const auto& row : tick_spacing_study(study, boost, spacing, 4, cfg.regime))
            st.rows.push_back({static_cast<double>(row.dimension), row.tau, row.mean_spacing,
                               row.relative_deviation, row.mean_min_variance});
    }
    return out;
}

PointResult run_ion(const json& p, const ScenarioConfig& cfg, std::size_t threads) {
    TrapModel m;
    m.transition = p.at("transition").get<double>();
    m.trap = p.at("trap").get<double>();
    m.lamb_dicke = p.at("lamb_dicke").get<double>();
    m.rabi = p.at("rabi").get<double>();
    m.pulse_duration = p.at("pulse_duration").get<double>();
    m.fock_cutoff = p.at("fock_cutoff").get<std::size_t>();
    m.fock_index = p.at("fock_index").get<std::size_t>();
    m.validate(cfg.regime);

    const auto grid = default_detuning_grid(m, p.at("points").get<std::size_t>(), p.at("span_in_rabi").get<double>());
    const SpectroscopyResult r = spectroscopy_scan(m, grid, threads);
    const BranchOracle o = branch_spectrum_oracle(m);
    const ShiftExpansion c = compare_to_expansion(r, m);

    PointResult out;
    auto& scan = table(out, "scan", {"detuning", "population"});
    for (std::size_t i = 0; i < r.detunings.size(); ++i) scan.rows.push_back({r.detunings[i], r.populations[i]});

    auto& s = out.summary;
    s["ground_frequency"] = o.ground_frequency;
    s["excited_frequency"] = o.excited_frequency;
    s["oracle_carrier_shift"] = o.carrier_shift;
    s["peak_detuning"] = r.peak_detuning;
    s["peak_population"] = r.peak_population;
    s["fit_residual"] = r.fit_residual;
    s["relative_shift"] = r.relative_shift;
    s["oracle_relative_shift"] = r.oracle_relative_shift;
    s["expansion_first_order"] = c.first_order;
    s["expansion_second_order"] = c.second_order_term;
    s["first_order_ratio"] = c.first_order_ratio;
    s["residual_beyond_first_order"] = c.residual;
    s["oracle_second_order"] = c.oracle_second_order;
    s["red_shift"] = c.red_shift;
    s["max_step_halving_error"] = r.max_step_halving_error;
    s["max_norm_error"] = r.max_norm_error;

    if (m.transition > 0.0) {
        out.checks.push_back(less_than("oracle_relative", std::abs(r.relative_shift / r.oracle_relative_shift - 1.0),
                                       cfg.tolerances.at("oracle_relative")));
        out.checks.push_back(less_than("first_order_relative",
                                       std::abs(r.oracle_relative_shift / c.first_order - 1.0),
                                       cfg.tolerances.at("first_order_relative")));
    }
    return out;
}

GridState initial_grid(const json& p, const std::shared_ptr<const InternalSpectrum>& spec, double momentum,
                       double center) {
    return GridState::gaussian(spec, p.at("points").get<std::size_t>(), p.at("length").get<double>(), center,
                               p.at("width").get<double>(), momentum, equal_amplitudes(spec->size()));
}

PointResult run_trotter(const json& p, const ScenarioConfig& cfg) {
    const auto spec = spectrum_of(p, cfg.regime);
    const GridState g = initial_grid(p, spec, p.at("momentum").get<double>(), p.at("center").get<double>());
    const auto steps = p.at("steps").get<std::vector<std::size_t>>();
    const TrotterReport r =
        accelerated_frame_trotter(g, p.at("acceleration").get<double>(), p.at("time").get<double>(), steps);

    PointResult out;
    auto& t = table(out, "convergence", {"steps", "error"});
    for (std::size_t i = 0; i < r.steps.size(); ++i) t.rows.push_back({static_cast<double>(r.steps[i]), r.errors[i]});
    out.summary["steps"] = r.steps;
    out.summary["errors"] = r.errors;
    out.summary["reduction_ratios"] = r.reduction_ratios;
    for (std::size_t i = 0; i < r.reduction_ratios.size(); ++i)
        out.checks.push_back(within("reduction_ratio[" + std::to_string(r.steps[i]) + "]", r.reduction_ratios[i],
                                    cfg.tolerances.at("ratio_min"), cfg.tolerances.at("ratio_max")));
    if (!r.errors.empty())
        out.checks.push_back(less_than("terminal_error", r.errors.back(), cfg.tolerances.at("terminal_error")));
    return out;
}

PointResult run_impulse(const json& p, const ScenarioConfig& cfg) {
    const auto spec = spectrum_of(p, cfg.regime);
    const GridState g = initial_grid(p, spec, 0.0, 0.0);
    const auto durations = doubles(p, "durations");
    const bool coupled = p.at("internal_coupled").get<bool>();
    const ImpulseReport r = impulsive_boost_limit(g, p.at("velocity").get<double>(), durations, coupled);

    PointResult out;
    auto& t = table(out, "convergence", {"duration", "deviation_velocity_boost", "deviation_momentum_boost"});
    for (std::size_t i = 0; i < r.durations.size(); ++i)
        t.rows.push_back({r.durations[i], r.deviation_from_velocity_boost[i], r.deviation_from_momentum_boost[i]});
    out.summary["internal_coupled"] = coupled;
    out.summary["durations"] = r.durations;
    out.summary["deviation_velocity_boost"] = r.deviation_from_velocity_boost;
    out.summary["deviation_momentum_boost"] = r.deviation_from_momentum_boost;
    out.summary["reduction_ratios"] = r.reduction_ratios;
    out.summary["extrapolated_deviation"] = r.extrapolated_deviation;
    for (std::size_t i = 0; i < r.reduction_ratios.size(); ++i)
        out.checks.push_back(within("reduction_ratio[" + std::to_string(i) + "]", r.reduction_ratios[i],
                                    cfg.tolerances.at("ratio_min"), cfg.tolerances.at("ratio_max")));
    return out;
}

PointResult run_entanglement(const json& p, const ScenarioConfig& cfg) {
    const auto spec = spectrum_of(p, cfg.regime);
    const auto levels = p.at("levels").get<std::size_t>();
    const double v = p.at("velocity").get<double>();
    const EntanglementDemo d = entanglement_frame_demo(spec, p.at("momentum").get<double>(), v, levels, cfg.regime);
    // Distinct branch masses and v != 0 give orthogonal motional flags.
    const double expected_after = v != 0.0 ? std::log(static_cast<double>(levels)) : 0.0;

    PointResult out;
    out.summary["entropy_before"] = d.entropy_before;
    out.summary["entropy_after"] = d.entropy_after;
    out.summary["expected_after"] = expected_after;
    const double tol = cfg.tolerances.at("entropy_abs");
    out.checks.push_back(less_than("entropy_before", std::abs(d.entropy_before), tol));
    out.checks.push_back(less_than("entropy_after", std::abs(d.entropy_after - expected_after), tol));
    return out;
}

PointResult run_point(const ScenarioConfig& cfg, const json& p, std::size_t inner_threads) {
    switch (cfg.kind) {
        case ScenarioKind::TwinMomentum:
        case ScenarioKind::TwinVelocity:
        case ScenarioKind::TwinObserver: return run_twin(cfg.kind, p, cfg);
        case ScenarioKind::Swp: return run_swp(p, cfg);
        case ScenarioKind::IonSpectroscopy: return run_ion(p, cfg, inner_threads);
        case ScenarioKind::TrotterAccel: return run_trotter(p, cfg);
        case ScenarioKind::ImpulseBoost: return run_impulse(p, cfg);
        case ScenarioKind::EntanglementDemo: return run_entanglement(p, cfg);
    }
    throw ConfigError("scenario", "unhandled scenario kind");
}

}  // namespace

bool RunReport::passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

json RunReport::summary() const {
    json j;
    j["library_version"] = version;
    j["config"] = config;
    json runs_json = json::array();
    for (const auto& r : runs) runs_json.push_back(r);
    j["runs"] = runs_json;
    json checks_json = json::array();
    for (const auto& c : checks) {
        json cj = {{"name", c.name}, {"value", c.value}, {"relation", c.relation}};
        if (c.relation == "in") {
            cj["lower"] = c.lower;
            cj["upper"] = c.tolerance;
        } else {
            cj["tolerance"] = c.tolerance;
        }
        cj["passed"] = c.passed;
        checks_json.push_back(cj);
    }
    j["checks"] = checks_json;
    j["passed"] = passed();
    return j;
}

RunReport run_config(const ScenarioConfig& config, const RunOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const auto points = sweep_points(config);
    std::vector<PointResult> results(points.size());
    std::vector<double> timings(points.size());
    std::vector<std::exception_ptr> errors(points.size());

    const std::size_t pool = std::max<std::size_t>(1, std::min(options.threads, points.size()));
    const std::size_t inner = points.size() == 1 ? std::max<std::size_t>(1, options.threads) : 1;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            const auto t0 = std::chrono::steady_clock::now();
            try {
                results[i] = run_point(config, params_at(config, points[i]), inner);
            } catch (...) {
                errors[i] = std::current_exception();
            }
            timings[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
    };
    if (pool == 1) {
        worker();
    } else {
        std::vector<std::jthread> threads;
        for (std::size_t t = 0; t < pool; ++t) threads.emplace_back(worker);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    RunReport report;
    report.version = kVersion;
    report.config = to_json(config);
    report.timings = std::move(timings);
    const bool swept = !config.sweeps.empty();
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto& r = results[i];
        json run = json::object();
        if (swept) {
            json at = json::object();
            for (std::size_t k = 0; k < config.sweeps.size(); ++k) at[config.sweeps[k].parameter] = points[i][k];
            run["point"] = i;
            run["sweep"] = at;
        }
        for (const auto& [k, v] : r.summary.items()) run[k] = v;
        report.runs.push_back(run);

        for (auto& c : r.checks) {
            if (swept) c.name = "point " + std::to_string(i) + ": " + c.name;
            report.checks.push_back(c);
        }
        for (auto& [name, t] : r.tables) {
            if (swept) {
                t.columns.insert(t.columns.begin(), "point");
                for (auto& row : t.rows) row.insert(row.begin(), static_cast<double>(i));
            }
            auto it = std::find_if(report.tables.begin(), report.tables.end(),
                                   [&](const auto& named) { return named.first == name; });
            if (it == report.tables.end()) {
                report.tables.emplace_back(name, std::move(t));
            } else {
                for (auto& row : t.rows) it->second.rows.push_back(std::move(row));
            }
        }
    }
    report.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

RunReport run_config(const std::filesystem::path& path, const RunOptions& options) {
    return run_config(load_config(path), options);
}

}  // namespace qclock::cli
