#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "qclock/plane_wave.hpp"

namespace qclock {

// Operator parameters. All quantities are natural-unit ratios.

/// B_p(p_b) = exp(i p_b x): shifts every branch by the same momentum.
struct MomentumBoost {
    double momentum = 0.0;
};
/// B_v(v_b) = exp(i (m + H0/c^2) v_b x): shifts branch n by M_n v_b.
struct VelocityBoost {
    double velocity = 0.0;
};
/// T(s) = exp(-i p s).
struct Translation {
    double shift = 0.0;
};
/// U(t) generated by H = p^2/2M + H0.
struct FreeEvolution {
    double time = 0.0;
};
/// Evolution for `duration` under p^2/2M + H0 - strength * c * (x - center),
/// with c = M (internal_coupled) or c = m.
struct LinearPotentialEvolution {
    double strength = 0.0;
    double center = 0.0;
    bool internal_coupled = true;
    double duration = 0.0;
};
/// Exact evolution in a uniformly accelerating frame,
/// H = p^2/2M + H0 + a M x, for time t. `steps` selects the product-formula
/// approximation (U(dt) B_v(-a dt))^steps instead when nonzero.
struct AcceleratedFrame {
    double acceleration = 0.0;
    double time = 0.0;
    std::size_t steps = 0;
};

using OperatorSpec = std::variant<MomentumBoost, VelocityBoost, Translation, FreeEvolution,
                                  LinearPotentialEvolution, AcceleratedFrame>;

/// Throws ValidationError for non-finite parameters.
void validate(const OperatorSpec& op);

PlaneWaveState apply_momentum_boost(const PlaneWaveState& s, double p_b, const ModelParams& params = {});
PlaneWaveState apply_velocity_boost(const PlaneWaveState& s, double v_b, const ModelParams& params = {});
PlaneWaveState apply_translation(const PlaneWaveState& s, double shift);

/// T(s_n) on branch n: a translation whose distance depends on the internal
/// level, e.g. s_n = p_b t / M_n for an operator-valued mass.
PlaneWaveState apply_level_translation(const PlaneWaveState& s, std::span<const double> shifts);

/// Phase -t (p^2/2M_n + E_n) picked up by |n>|p> under U(t), with the kinetic
/// term evaluated as p^2/2 - E_n p^2 / (2 M_n) so that inter-branch
/// differences survive without cancellation.
double free_evolution_phase(const InternalSpectrum& spectrum, std::size_t level, double p, double t);

/// Throws ValidationError when |phase| exceeds kMaxAccumulatedPhase.
PlaneWaveState apply_free_evolution(const PlaneWaveState& s, double t);

/// Plane-wave action of the closed-form operators. x-dependent evolutions
/// (LinearPotentialEvolution, AcceleratedFrame) need a GridState and throw.
PlaneWaveState apply(const OperatorSpec& op, const PlaneWaveState& s, const ModelParams& params = {});

/// Right-to-left product: ops.back() acts first, as in written operator
/// chains.
PlaneWaveState apply_chain(std::span<const OperatorSpec> ops, const PlaneWaveState& s,
                           const ModelParams& params = {});

struct ConjugationResult {
    PlaneWaveState state;                   ///< T^-1(s) B_v(v_b) T(s) |psi>
    PlaneWaveState reference;               ///< B_v(v_b) |psi> times predicted phases
    std::vector<complex> predicted_phase;   ///< exp(i M_n v_b s) per level
    double max_deviation = 0.0;             ///< componentwise amplitude mismatch
};

/// Applies T^{-1}(s) B_v(v_b) T(s) and checks it against the translation law
///   T^{-1}(s) B_v(v_b) T(s) = exp(i (m + H0/c^2) v_b s) B_v(v_b).
/// Throws IdentityError when the two differ by more than `tolerance`.
ConjugationResult conjugate_velocity_boost_by_translation(const PlaneWaveState& s, double v_b,
                                                          double shift, double tolerance = 1e-12,
                                                          const ModelParams& params = {});

}  // namespace qclock
