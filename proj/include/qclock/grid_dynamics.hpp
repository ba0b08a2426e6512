#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qclock/grid.hpp"
#include "qclock/operators.hpp"

namespace qclock {

// Lattice versions of the closed-form operators. Inputs and outputs are in
// the position basis.
GridState grid_momentum_boost(const GridState& g, double p_b);
GridState grid_velocity_boost(const GridState& g, double v_b);
GridState grid_translation(const GridState& g, double shift);
GridState grid_free_evolution(const GridState& g, double t);

/// Lattice Hamiltonian of one internal branch in the position basis:
///   p^2 / 2M_n + E_n + slope * (x - center).
/// The kinetic block is the exact lattice operator F^dagger diag(p_k^2/2M_n) F.
Eigen::MatrixXcd branch_hamiltonian(const GridState& shape, std::size_t level, double slope,
                                    double center = 0.0);

/// exp(-i H t) for Hermitian H via eigendecomposition.
Eigen::MatrixXcd hermitian_propagator(const Eigen::MatrixXcd& hamiltonian, double t);

/// Exact evolution under p^2/2M + H0 - strength * c_n * (x - center) with
/// c_n = M_n (internal-coupled) or 1.
GridState evolve_linear_potential(const GridState& g, const LinearPotentialEvolution& op);

/// exp(-i t H_acc) with H_acc = p^2/2M + H0 + a M x, block-diagonal in the
/// internal levels and exponentiated per block.
GridState evolve_accelerated_frame(const GridState& g, double acceleration, double t);

/// (U(dt) B_v(-a dt))^steps with dt = t / steps. The frame accelerating at +a
/// sees the state kicked by -a dt each step.
GridState accelerated_frame_product(const GridState& g, double acceleration, double t, std::size_t steps);

/// Applies any OperatorSpec on the lattice.
GridState apply(const OperatorSpec& op, const GridState& g);

struct ImpulseReport {
    bool internal_coupled = true;
    double velocity = 0.0;
    std::vector<double> durations;
    std::vector<double> deviation_from_velocity_boost;  ///< ||U_impulse psi - B_v psi||
    std::vector<double> deviation_from_momentum_boost;  ///< ||U_impulse psi - B_p(m v) psi||
    std::vector<double> reduction_ratios;               ///< dev[i] / dev[i+1]
    double extrapolated_deviation = 0.0;                ///< linear extrapolation to duration 0
};

/// Drives the state with the potential -alpha c_n x for duration dt, keeping
/// alpha * dt = v_b, for each duration in the schedule. As dt -> 0 the
/// propagator approaches B_v(v_b) (coupled) or B_p(m v_b) (uncoupled) with
/// error linear in dt.
ImpulseReport impulsive_boost_limit(const GridState& g, double v_b, std::span<const double> durations,
                                    bool internal_coupled = true);

struct TrotterReport {
    double acceleration = 0.0;
    double time = 0.0;
    std::vector<std::size_t> steps;
    std::vector<double> errors;            ///< ||psi_n - psi_exact||
    std::vector<double> reduction_ratios;  ///< errors[i] / errors[i+1]
};

/// Convergence of the product formula towards the exact accelerated-frame
/// evolution. `steps` is the schedule of step counts (typically doubling).
TrotterReport accelerated_frame_trotter(const GridState& g, double acceleration, double t,
                                        std::span<const std::size_t> steps);

}  // namespace qclock
