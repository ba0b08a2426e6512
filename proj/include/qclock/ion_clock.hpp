#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qclock/units.hpp"

namespace qclock {

/// Two-level ion (g, e with E_e = hbar w0) in a harmonic trap whose potential
/// 1/2 m w_m^2 x^2 uses the bare mass m for both branches. All frequencies are
/// natural-unit ratios: transition u = hbar w0 / mc^2, trap w = hbar w_m / mc^2.
struct TrapModel {
    double transition = 1e-3;      ///< u
    double trap = 1e-5;            ///< w
    double lamb_dicke = 0.05;      ///< eta = k sqrt(hbar / 2 m w_m)
    double rabi = 1e-7;            ///< Omega
    double pulse_duration = 0.0;   ///< T_p; 0 selects a pi pulse, pi / Omega
    std::size_t fock_cutoff = 0;   ///< N_F; 0 selects fock_index + 12
    std::size_t fock_index = 0;    ///< initial motional Fock state n

    double pulse() const;
    std::size_t cutoff() const;
    void validate(const ModelParams& params = {}) const;
};

/// Exact oscillator frequencies of both branches. The excited branch
///   p^2/2m + 1/2 m w_m^2 x^2 + E_e (1 - p^2 / 2 m M_e c^2)
/// is exactly p^2/2M_e + 1/2 m w_m^2 x^2 + E_e, an oscillator at
/// w_m sqrt(m / M_e).
struct BranchOracle {
    double ground_frequency = 0.0;
    double excited_frequency = 0.0;
    double carrier_shift = 0.0;    ///< w_m (n + 1/2) (sqrt(m/M_e) - 1)
    double relative_shift = 0.0;   ///< carrier_shift / w0
};

BranchOracle branch_spectrum_oracle(const TrapModel& model);

/// Motional Hamiltonian of one branch in the ground-branch Fock basis of the
/// given size, without the internal energy offset.
Eigen::MatrixXd branch_motional_hamiltonian(const TrapModel& model, bool excited, std::size_t cutoff);

struct SpectroscopyResult {
    std::vector<double> detunings;    ///< w_l - w0
    std::vector<double> populations;  ///< excited population after the pulse
    double peak_detuning = 0.0;       ///< 3-point quadratic fit around the maximum
    double peak_population = 0.0;
    double fit_residual = 0.0;        ///< quadratic misfit at the next-outer grid points
    double relative_shift = 0.0;      ///< peak_detuning / w0
    double oracle_relative_shift = 0.0;
    double first_order_prediction = 0.0;   ///< -hbar w_m (n + 1/2) / 2 m c^2
    double second_order_prediction = 0.0;  ///< + hbar w0 hbar w_m (n + 1/2) / 2 (m c^2)^2
    double max_step_halving_error = 0.0;   ///< ||U(T) psi - U(T/2)^2 psi|| over the scan
    double max_norm_error = 0.0;
};

/// Detuning grid centred on the oracle carrier with half-width
/// `span_in_rabi * Omega`.
std::vector<double> default_detuning_grid(const TrapModel& model, std::size_t points = 81,
                                          double span_in_rabi = 0.5);

/// Excited population after a single square pulse started in |g, n>, for
/// laser detuning `detuning` from the bare transition. The drive
/// Omega/2 (sigma+ e^{ikx} + h.c.) is taken in the frame rotating at w_l; the
/// optical RWA leaves the motion exact.
double excitation_probability(const TrapModel& model, double detuning, double* step_error = nullptr,
                              double* norm_error = nullptr);

/// Scans the detuning grid (at least 41 points) and fits the carrier peak.
/// Throws ConvergenceError when the peak sits on the grid edge or the
/// propagator fails its step-halving check.
SpectroscopyResult spectroscopy_scan(const TrapModel& model, std::span<const double> detunings,
                                     std::size_t threads = 1);

struct ShiftExpansion {
    double extracted = 0.0;            ///< relative shift from the scan
    double first_order = 0.0;          ///< -w (n + 1/2) / 2
    double first_order_ratio = 0.0;    ///< extracted / first_order
    double residual = 0.0;             ///< extracted - first_order
    double second_order_term = 0.0;    ///< + u w (n + 1/2) / 2, reported only
    double oracle_second_order = 0.0;  ///< oracle - first_order, reported only
    bool red_shift = false;
};

ShiftExpansion compare_to_expansion(const SpectroscopyResult& result, const TrapModel& model);

}  // namespace qclock
