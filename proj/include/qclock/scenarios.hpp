#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qclock/operators.hpp"

namespace qclock {

/// The three out-and-back operator chains (rightmost acts first):
///   MomentumTwin:              B_p(p_b) U(t) T(p_b t/m) B_p(-2 p_b) T(-p_b t/m) U(t) B_p(p_b)
///   VelocityTwinClockMoves:    B_v(v_b) U(t) T(v_b t)   B_v(-2 v_b) T(-v_b t)   U(t) B_v(v_b)
///   VelocityTwinObserverMoves: B_v(-v_b) U(t) B_v(2 v_b) U(t) B_v(-v_b)
enum class SequenceKind { MomentumTwin, VelocityTwinClockMoves, VelocityTwinObserverMoves };

std::string_view to_string(SequenceKind kind);

/// Where the return kick of a momentum twin is centred. Only MomentumTwin
/// reads this.
///   BareMass:       T(p_b t / m), the default.
///   LevelMass:      T(p_b t / M_k) for a chosen level k. Changes only the
///                   global phase.
///   StateDependent: T(p_b t / M) with operator-valued M. Experimental: the
///                   internal factor becomes 1 + p_b^2 / 2 m M c^2.
enum class TranslationCentering { BareMass, LevelMass, StateDependent };

struct SequenceOptions {
    TranslationCentering centering = TranslationCentering::BareMass;
    std::size_t centering_level = 0;
    double tolerance = 1e-12;  ///< fidelity deviation allowed per component
    ModelParams params{};
};

/// Closed-form phase of the sequence output relative to the input for
/// component |n>|p>, split into its three exponential factors.
struct ClosedFormPhase {
    double motional = 0.0;  ///< -2t p^2 / 2M_n
    double global = 0.0;    ///< level independent
    double internal = 0.0;  ///< -2t E_n * internal_factor
    double total() const noexcept { return motional + global + internal; }
};

ClosedFormPhase closed_form_phase(SequenceKind kind, const InternalSpectrum& spectrum, double boost,
                                  double t, std::size_t level, double p,
                                  const SequenceOptions& options = {});

/// exp(i * closed_form_phase(...).total()).
complex closed_form_rhs(SequenceKind kind, const InternalSpectrum& spectrum, double boost, double t,
                        std::size_t level, double p, const SequenceOptions& options = {});

/// Multiplier of H0 in the closed form for branch n.
double expected_internal_factor(SequenceKind kind, const InternalSpectrum& spectrum, double boost,
                                std::size_t level, const SequenceOptions& options = {});

struct ComponentOutcome {
    std::size_t level = 0;
    double momentum = 0.0;
    complex ratio{};               ///< output amplitude / input amplitude
    complex rhs{};                 ///< closed-form prediction
    double fidelity_deviation = 0; ///< |conj(rhs) ratio - 1|
};

struct SequenceResult {
    SequenceKind kind = SequenceKind::MomentumTwin;
    double boost = 0.0;
    double time = 0.0;
    std::vector<ComponentOutcome> components;

    std::vector<double> internal_factors;           ///< extracted per level
    std::vector<double> expected_internal_factors;
    std::vector<bool> factor_measured;              ///< false for E_n = 0 or absent levels
    Eigen::MatrixXd pair_factors;                   ///< extracted F[n,m]; diagonal is the single-branch bound
    double global_phase = 0.0;                      ///< extracted
    double expected_global_phase = 0.0;
    bool global_phase_measured = false;

    double max_fidelity_deviation = 0.0;
    double max_factor_relative_error = 0.0;
    double max_global_phase_error = 0.0;

    std::vector<double> lorentz_gamma;  ///< sqrt(1 + k_n^2 / M_n^2) for the kick k_n of branch n
    double mean_gamma = 0.0;            ///< weighted by the probe's level populations
};

/// Equal-amplitude probe over every level and each of the given momenta.
PlaneWaveState default_probe(std::shared_ptr<const InternalSpectrum> spectrum,
                             std::span<const double> momenta = {});

/// Runs the chain on the probe and compares it with the closed form.
/// Throws IdentityError if a component's momentum does not return to its
/// initial value or its fidelity deviation exceeds options.tolerance.
SequenceResult run_sequence(SequenceKind kind, double boost, double t, const PlaneWaveState& probe,
                            const SequenceOptions& options = {});

struct PairwiseDilation {
    Eigen::MatrixXd factors;            ///< F[n][m] = 1 - p_b^2 / (2 M_n M_m)
    std::vector<double> single_branch;  ///< 1 - p_b^2 / (2 M_n^2)
};

PairwiseDilation pairwise_dilation(const InternalSpectrum& spectrum, double p_b);

struct EntanglementDemo {
    double entropy_before = 0.0;
    double entropy_after = 0.0;
};

/// |p> (x) (|0> + ... + |levels-1>)/sqrt(levels), then B_v(v_b).
EntanglementDemo entanglement_frame_demo(std::shared_ptr<const InternalSpectrum> spectrum, double p,
                                         double v_b, std::size_t levels = 2,
                                         const ModelParams& params = {});

}  // namespace qclock
