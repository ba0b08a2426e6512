#include "qclock/operators.hpp"

#include <cmath>
#include <string>
#include <type_traits>

namespace qclock {

namespace {

template <class Shift>
PlaneWaveState shift_momenta(const PlaneWaveState& s, Shift&& shift, const ModelParams& params,
                             const char* guard_name) {
    std::vector<Component> out(s.components().begin(), s.components().end());
    bool ok = true;
    for (auto& c : out) {
        c.momentum += shift(c.level);
        ok = ok && momentum_in_regime(params, c.momentum);
    }
    const bool flagged = !regime_check(params, ok, "kappa_max",
                                       std::string(guard_name) + " drives a branch momentum past kappa_max");
    return PlaneWaveState(s.spectrum_ptr(), std::move(out)).with_regime_warning(s.regime_warning() || flagged);
}

PlaneWaveState rephase(const PlaneWaveState& s, std::vector<Component> out) {
    return PlaneWaveState(s.spectrum_ptr(), std::move(out)).with_regime_warning(s.regime_warning());
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void validate(const OperatorSpec& op) {
    const bool ok = std::visit(
        [](const auto& o) -> bool {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, MomentumBoost>) return finite(o.momentum);
            else if constexpr (std::is_same_v<T, VelocityBoost>) return finite(o.velocity);
            else if constexpr (std::is_same_v<T, Translation>) return finite(o.shift);
            else if constexpr (std::is_same_v<T, FreeEvolution>) return finite(o.time);
            else if constexpr (std::is_same_v<T, LinearPotentialEvolution>)
                return finite(o.strength) && finite(o.center) && finite(o.duration) && o.duration >= 0.0;
            else return finite(o.acceleration) && finite(o.time);
        },
        op);
    if (!ok) throw ValidationError("operator parameters must be finite");
}

PlaneWaveState apply_momentum_boost(const PlaneWaveState& s, double p_b, const ModelParams& params) {
    return shift_momenta(s, [p_b](std::size_t) { return p_b; }, params, "momentum boost");
}

PlaneWaveState apply_velocity_boost(const PlaneWaveState& s, double v_b, const ModelParams& params) {
    const auto& spec = s.spectrum();
    return shift_momenta(s, [&](std::size_t n) { return spec.mass(n) * v_b; }, params, "velocity boost");
}

PlaneWaveState apply_translation(const PlaneWaveState& s, double shift) {
    std::vector<Component> out(s.components().begin(), s.components().end());
    for (auto& c : out) c.amplitude *= std::polar(1.0, -c.momentum * shift);
    return rephase(s, std::move(out));
}

PlaneWaveState apply_level_translation(const PlaneWaveState& s, std::span<const double> shifts) {
    if (shifts.size() != s.spectrum().size())
        throw ValidationError("level translation needs one shift per level");
    std::vector<Component> out(s.components().begin(), s.components().end());
    for (auto& c : out) c.amplitude *= std::polar(1.0, -c.momentum * shifts[c.level]);
    return rephase(s, std::move(out));
}

double free_evolution_phase(const InternalSpectrum& spectrum, std::size_t level, double p, double t) {
    const double p2 = p * p;
    const double kinetic = 0.5 * p2 - 0.5 * p2 * spectrum.inverse_mass_correction(level);
    return -t * (kinetic + spectrum.energy(level));
}

PlaneWaveState apply_free_evolution(const PlaneWaveState& s, double t) {
    std::vector<Component> out(s.components().begin(), s.components().end());
    for (auto& c : out) {
        const double phase = free_evolution_phase(s.spectrum(), c.level, c.momentum, t);
        if (!(std::abs(phase) <= kMaxAccumulatedPhase))
            throw ValidationError("free evolution phase " + std::to_string(phase) +
                                  " rad exceeds the accumulated-phase cap");
        c.amplitude *= std::polar(1.0, phase);
    }
    return rephase(s, std::move(out));
}

PlaneWaveState apply(const OperatorSpec& op, const PlaneWaveState& s, const ModelParams& params) {
    validate(op);
    return std::visit(
        [&](const auto& o) -> PlaneWaveState {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, MomentumBoost>) return apply_momentum_boost(s, o.momentum, params);
            else if constexpr (std::is_same_v<T, VelocityBoost>) return apply_velocity_boost(s, o.velocity, params);
            else if constexpr (std::is_same_v<T, Translation>) return apply_translation(s, o.shift);
            else if constexpr (std::is_same_v<T, FreeEvolution>) return apply_free_evolution(s, o.time);
            else throw ValidationError("position-dependent evolution needs a grid state");
        },
        op);
}

PlaneWaveState apply_chain(std::span<const OperatorSpec> ops, const PlaneWaveState& s,
                           const ModelParams& params) {
    PlaneWaveState cur = s;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) cur = apply(*it, cur, params);
    return cur;
}

ConjugationResult conjugate_velocity_boost_by_translation(const PlaneWaveState& s, double v_b,
                                                          double shift, double tolerance,
                                                          const ModelParams& params) {
    const PlaneWaveState lhs =
        apply_translation(apply_velocity_boost(apply_translation(s, shift), v_b, params), -shift);

    const auto& spec = s.spectrum();
    std::vector<complex> predicted(spec.size());
    for (std::size_t n = 0; n < spec.size(); ++n) predicted[n] = std::polar(1.0, spec.mass(n) * v_b * shift);

    const PlaneWaveState boosted = apply_velocity_boost(s, v_b, params);
    std::vector<Component> ref(boosted.components().begin(), boosted.components().end());
    for (auto& c : ref) c.amplitude *= predicted[c.level];
    PlaneWaveState reference(s.spectrum_ptr(), std::move(ref));

    double dev = 0.0;
    if (lhs.size() != reference.size()) {
        dev = INFINITY;
    } else {
        for (std::size_t i = 0; i < lhs.size(); ++i) {
            if (lhs[i].level != reference[i].level ||
                std::abs(lhs[i].momentum - reference[i].momentum) > PlaneWaveState::kMergeTolerance) {
                dev = INFINITY;
                break;
            }
            dev = std::max(dev, std::abs(lhs[i].amplitude - reference[i].amplitude));
        }
    }
    if (!(dev <= tolerance))
        throw IdentityError("translation conjugation law violated: deviation " + std::to_string(dev));
    return {lhs, reference, std::move(predicted), dev};
}

}  // namespace qclock
