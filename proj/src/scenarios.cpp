#include "qclock/scenarios.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace qclock {

std::string_view to_string(SequenceKind kind) {
    switch (kind) {
        case SequenceKind::MomentumTwin: return "twin-momentum";
        case SequenceKind::VelocityTwinClockMoves: return "twin-velocity";
        case SequenceKind::VelocityTwinObserverMoves: return "twin-observer";
    }
    return "unknown";
}

namespace {

bool is_momentum(SequenceKind kind) { return kind == SequenceKind::MomentumTwin; }

// Signed coefficient s in internal factor 1 + s * k^2 / 2 with k^2 = p_b^2 / M_n
// (momentum twins) or v_b^2 (velocity twins).
double internal_sign(SequenceKind kind, const SequenceOptions& options) {
    switch (kind) {
        case SequenceKind::MomentumTwin:
            return options.centering == TranslationCentering::StateDependent ? 1.0 : -1.0;
        case SequenceKind::VelocityTwinClockMoves: return -1.0;
        case SequenceKind::VelocityTwinObserverMoves: return 1.0;
    }
    return 0.0;
}

// Factor multiplying (E_n - E_m) in the relative internal phase of branches n, m.
double expected_pair_factor(SequenceKind kind, const InternalSpectrum& spec, double boost,
                            std::size_t n, std::size_t m, const SequenceOptions& options) {
    const double s = internal_sign(kind, options);
    if (is_momentum(kind)) return 1.0 + s * boost * boost / (2.0 * spec.mass(n) * spec.mass(m));
    return 1.0 + s * 0.5 * boost * boost;
}

PlaneWaveState run_chain(SequenceKind kind, double b, double t, const PlaneWaveState& s,
                         const SequenceOptions& options) {
    const auto& P = options.params;
    const auto& spec = s.spectrum();
    switch (kind) {
        case SequenceKind::MomentumTwin: {
            auto out = apply_momentum_boost(s, b, P);
            out = apply_free_evolution(out, t);
            if (options.centering == TranslationCentering::StateDependent) {
                std::vector<double> shift(spec.size());
                for (std::size_t n = 0; n < spec.size(); ++n) shift[n] = b * t / spec.mass(n);
                std::vector<double> back(shift);
                for (double& x : back) x = -x;
                out = apply_level_translation(out, back);
                out = apply_momentum_boost(out, -2.0 * b, P);
                out = apply_level_translation(out, shift);
            } else {
                const double mass = options.centering == TranslationCentering::LevelMass
                                        ? spec.mass(options.centering_level)
                                        : 1.0;
                const double shift = b * t / mass;
                out = apply_translation(out, -shift);
                out = apply_momentum_boost(out, -2.0 * b, P);
                out = apply_translation(out, shift);
            }
            out = apply_free_evolution(out, t);
            return apply_momentum_boost(out, b, P);
        }
        case SequenceKind::VelocityTwinClockMoves: {
            auto out = apply_velocity_boost(s, b, P);
            out = apply_free_evolution(out, t);
            out = apply_translation(out, -b * t);
            out = apply_velocity_boost(out, -2.0 * b, P);
            out = apply_translation(out, b * t);
            out = apply_free_evolution(out, t);
            return apply_velocity_boost(out, b, P);
        }
        case SequenceKind::VelocityTwinObserverMoves: {
            auto out = apply_velocity_boost(s, -b, P);
            out = apply_free_evolution(out, t);
            out = apply_velocity_boost(out, 2.0 * b, P);
            out = apply_free_evolution(out, t);
            return apply_velocity_boost(out, -b, P);
        }
    }
    throw ValidationError("unknown sequence kind");
}

}  // namespace

double expected_internal_factor(SequenceKind kind, const InternalSpectrum& spectrum, double boost,
                                std::size_t level, const SequenceOptions& options) {
    const double s = internal_sign(kind, options);
    if (is_momentum(kind)) return 1.0 + s * boost * boost / (2.0 * spectrum.mass(level));
    return 1.0 + s * 0.5 * boost * boost;
}

ClosedFormPhase closed_form_phase(SequenceKind kind, const InternalSpectrum& spectrum, double boost,
                                  double t, std::size_t level, double p, const SequenceOptions& options) {
    const double eps = spectrum.energy(level);
    const double p2 = p * p;
    const double b2 = boost * boost;
    const double s = internal_sign(kind, options);

    ClosedFormPhase out;
    out.motional = -t * (p2 - p2 * spectrum.inverse_mass_correction(level));
    // -2t E (1 + s k^2/2) with k^2 = p_b^2/M_n or v_b^2, expanded so the
    // dilation term is computed on its own.
    const double k2 = is_momentum(kind) ? b2 / spectrum.mass(level) : b2;
    out.internal = -2.0 * t * eps - s * t * eps * k2;

    switch (kind) {
        case SequenceKind::MomentumTwin:
            if (options.centering == TranslationCentering::LevelMass)
                out.global = -t * b2 + 2.0 * t * b2 / spectrum.mass(options.centering_level);
            else
                out.global = t * b2;
            break;
        case SequenceKind::VelocityTwinClockMoves: out.global = t * b2; break;
        case SequenceKind::VelocityTwinObserverMoves: out.global = -t * b2; break;
    }
    return out;
}

complex closed_form_rhs(SequenceKind kind, const InternalSpectrum& spectrum, double boost, double t,
                        std::size_t level, double p, const SequenceOptions& options) {
    return std::polar(1.0, closed_form_phase(kind, spectrum, boost, t, level, p, options).total());
}

PlaneWaveState default_probe(std::shared_ptr<const InternalSpectrum> spectrum, std::span<const double> momenta) {
    static constexpr double kDefaultMomenta[] = {0.0, 0.05};
    if (momenta.empty()) momenta = kDefaultMomenta;
    std::vector<Component> comps;
    for (std::size_t n = 0; n < spectrum->size(); ++n)
        for (double p : momenta) comps.push_back({n, p, complex{1.0, 0.0}});
    return PlaneWaveState::normalized(std::move(spectrum), std::move(comps));
}

SequenceResult run_sequence(SequenceKind kind, double boost, double t, const PlaneWaveState& probe,
                            const SequenceOptions& options) {
    const auto& spec = probe.spectrum();
    if (options.centering == TranslationCentering::LevelMass && options.centering_level >= spec.size())
        throw ValidationError("centering level outside the spectrum");
    if (!std::isfinite(boost) || !std::isfinite(t)) throw ValidationError("boost and time must be finite");

    const PlaneWaveState out = run_chain(kind, boost, t, probe, options);
    if (out.size() != probe.size())
        throw IdentityError("sequence changed the number of plane-wave components");

    SequenceResult r;
    r.kind = kind;
    r.boost = boost;
    r.time = t;

    const std::size_t levels = spec.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<complex> reduced(probe.size());  // ratio with the motional factor removed

    for (std::size_t i = 0; i < probe.size(); ++i) {
        const auto& in = probe[i];
        const auto& o = out[i];
        if (o.level != in.level || std::abs(o.momentum - in.momentum) > PlaneWaveState::kMergeTolerance)
            throw IdentityError("sequence did not return component (level " + std::to_string(in.level) +
                                ", p " + std::to_string(in.momentum) + ") to its initial momentum");
        ComponentOutcome c;
        c.level = in.level;
        c.momentum = in.momentum;
        c.ratio = o.amplitude / in.amplitude;
        c.rhs = closed_form_rhs(kind, spec, boost, t, in.level, in.momentum, options);
        c.fidelity_deviation = std::abs(std::conj(c.rhs) * c.ratio - 1.0);
        r.max_fidelity_deviation = std::max(r.max_fidelity_deviation, c.fidelity_deviation);
        const auto cf = closed_form_phase(kind, spec, boost, t, in.level, in.momentum, options);
        reduced[i] = c.ratio * std::polar(1.0, -cf.motional);
        r.components.push_back(c);
    }
    if (!(r.max_fidelity_deviation <= options.tolerance))
        throw IdentityError(std::string(to_string(kind)) + " identity violated: fidelity deviation " +
                            std::to_string(r.max_fidelity_deviation));

    // Global phase from the ground branch, whose internal phase vanishes.
    const double g_expected = closed_form_phase(kind, spec, boost, t, 0, 0.0, options).global;
    r.expected_global_phase = g_expected;
    r.global_phase = g_expected;
    for (std::size_t i = 0; i < probe.size(); ++i) {
        if (probe[i].level != 0) continue;
        const double g = g_expected + std::arg(reduced[i] * std::polar(1.0, -g_expected));
        if (!r.global_phase_measured) r.global_phase = g;
        r.global_phase_measured = true;
        r.max_global_phase_error = std::max(r.max_global_phase_error, std::abs(g - g_expected));
    }

    r.expected_internal_factors.resize(levels);
    r.internal_factors.assign(levels, nan);
    r.factor_measured.assign(levels, false);
    std::vector<double> sum(levels, 0.0);
    std::vector<std::size_t> count(levels, 0);
    for (std::size_t n = 0; n < levels; ++n)
        r.expected_internal_factors[n] = expected_internal_factor(kind, spec, boost, n, options);

    for (std::size_t i = 0; i < probe.size(); ++i) {
        const std::size_t n = probe[i].level;
        const double eps = spec.energy(n);
        if (eps == 0.0 || t == 0.0) continue;
        // exp(-2 i t E (d - 1)) after removing the global phase and the undilated clock phase.
        const complex z = reduced[i] * std::polar(1.0, -r.global_phase + 2.0 * t * eps);
        const double d = 1.0 - std::arg(z) / (2.0 * t * eps);
        sum[n] += d;
        ++count[n];
        const double expected = r.expected_internal_factors[n];
        r.max_factor_relative_error = std::max(r.max_factor_relative_error, std::abs(d - expected) / expected);
    }
    for (std::size_t n = 0; n < levels; ++n) {
        if (count[n] > 0) {
            r.internal_factors[n] = sum[n] / static_cast<double>(count[n]);
            r.factor_measured[n] = true;
        } else {
            r.internal_factors[n] = r.expected_internal_factors[n];
        }
        if (!(r.internal_factors[n] > 0.0 && r.internal_factors[n] < 2.0))
            throw IdentityError("dilation factor outside (0, 2)");
    }

    // E_n d_n is known for any branch with zero energy even without a measurement.
    auto known = [&](std::size_t n) { return r.factor_measured[n] || spec.energy(n) == 0.0; };
    r.pair_factors = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(levels),
                                               static_cast<Eigen::Index>(levels), nan);
    for (std::size_t n = 0; n < levels; ++n) {
        for (std::size_t m = 0; m < levels; ++m) {
            const auto i = static_cast<Eigen::Index>(n), j = static_cast<Eigen::Index>(m);
            if (n == m) {
                r.pair_factors(i, j) = expected_pair_factor(kind, spec, boost, n, n, options);
            } else if (known(n) && known(m)) {
                const double en = spec.energy(n) == 0.0 ? 0.0 : spec.energy(n) * r.internal_factors[n];
                const double em = spec.energy(m) == 0.0 ? 0.0 : spec.energy(m) * r.internal_factors[m];
                r.pair_factors(i, j) = (en - em) / (spec.energy(n) - spec.energy(m));
            }
        }
    }

    // Lorentz diagnostics for the kick each branch receives.
    r.lorentz_gamma.resize(levels);
    std::vector<double> population(levels, 0.0);
    for (const auto& c : probe.components()) population[c.level] += std::norm(c.amplitude);
    for (std::size_t n = 0; n < levels; ++n) {
        const double kick = is_momentum(kind) ? boost : spec.mass(n) * boost;
        const double ratio = kick / spec.mass(n);
        r.lorentz_gamma[n] = std::sqrt(1.0 + ratio * ratio);
        r.mean_gamma += population[n] * r.lorentz_gamma[n];
    }
    return r;
}

PairwiseDilation pairwise_dilation(const InternalSpectrum& spectrum, double p_b) {
    const auto levels = static_cast<Eigen::Index>(spectrum.size());
    PairwiseDilation out;
    out.factors.resize(levels, levels);
    out.single_branch.resize(spectrum.size());
    const double half_p2 = 0.5 * p_b * p_b;
    for (Eigen::Index n = 0; n < levels; ++n) {
        const double mn = spectrum.mass(static_cast<std::size_t>(n));
        out.single_branch[static_cast<std::size_t>(n)] = 1.0 - half_p2 / (mn * mn);
        for (Eigen::Index m = 0; m < levels; ++m)
            out.factors(n, m) = 1.0 - half_p2 / (mn * spectrum.mass(static_cast<std::size_t>(m)));
    }
    return out;
}

EntanglementDemo entanglement_frame_demo(std::shared_ptr<const InternalSpectrum> spectrum, double p,
                                         double v_b, std::size_t levels, const ModelParams& params) {
    if (levels < 2 || levels > spectrum->size())
        throw ValidationError("entanglement demo needs between 2 and N levels");
    std::vector<complex> amps(levels, complex{1.0, 0.0});
    const PlaneWaveState before = PlaneWaveState::product(std::move(spectrum), p, amps);
    const PlaneWaveState after = apply_velocity_boost(before, v_b, params);
    return {reduced_internal_entropy(before), reduced_internal_entropy(after)};
}

}  // namespace qclock
