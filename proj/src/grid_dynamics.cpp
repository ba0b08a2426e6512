#include "qclock/grid_dynamics.hpp"

#include <cmath>
#include <string>
#include <type_traits>

namespace qclock {

namespace {

void require_position(const GridState& g, const char* what) {
    if (g.basis() != Basis::Position)
        throw ValidationError(std::string(what) + " expects a position-basis grid state");
}

template <class PhaseOf>
GridState multiply_position(const GridState& g, PhaseOf&& phase_of) {
    require_position(g, "position-space multiplication");
    GridState out = g;
    for (std::size_t n = 0; n < g.levels(); ++n)
        for (std::size_t j = 0; j < g.points(); ++j)
            out.level(n)(static_cast<Eigen::Index>(j)) *= std::polar(1.0, phase_of(n, g.position(j)));
    return out;
}

template <class PhaseOf>
GridState multiply_momentum(const GridState& g, PhaseOf&& phase_of) {
    require_position(g, "momentum-space multiplication");
    GridState out = g;
    for (std::size_t n = 0; n < g.levels(); ++n) {
        auto& a = out.level(n);
        transform_in_place(a, TransformDirection::ToMomentum);
        for (std::size_t k = 0; k < g.points(); ++k)
            a(static_cast<Eigen::Index>(k)) *= std::polar(1.0, phase_of(n, g.momentum(k)));
        transform_in_place(a, TransformDirection::ToPosition);
    }
    return out;
}

Eigen::MatrixXcd fourier_matrix(std::size_t points) {
    const auto d = static_cast<Eigen::Index>(points);
    Eigen::MatrixXcd f(d, d);
    Eigen::VectorXcd e(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        e.setZero();
        e(j) = 1.0;
        transform_in_place(e, TransformDirection::ToMomentum);
        f.col(j) = e;
    }
    return f;
}

template <class SlopeOf>
GridState evolve_blocks(const GridState& g, double t, SlopeOf&& slope_of, double center) {
    require_position(g, "lattice evolution");
    GridState out = g;
    for (std::size_t n = 0; n < g.levels(); ++n) {
        if (g.level(n).squaredNorm() == 0.0) continue;
        const Eigen::MatrixXcd h = branch_hamiltonian(g, n, slope_of(n), center);
        out.level(n) = hermitian_propagator(h, t) * g.level(n);
    }
    return out;
}

}  // namespace

GridState grid_momentum_boost(const GridState& g, double p_b) {
    return multiply_position(g, [p_b](std::size_t, double x) { return p_b * x; });
}

GridState grid_velocity_boost(const GridState& g, double v_b) {
    const auto& spec = g.spectrum();
    return multiply_position(g, [&](std::size_t n, double x) { return spec.mass(n) * v_b * x; });
}

GridState grid_translation(const GridState& g, double shift) {
    return multiply_momentum(g, [shift](std::size_t, double p) { return -p * shift; });
}

GridState grid_free_evolution(const GridState& g, double t) {
    const auto& spec = g.spectrum();
    return multiply_momentum(g, [&](std::size_t n, double p) { return free_evolution_phase(spec, n, p, t); });
}

Eigen::MatrixXcd branch_hamiltonian(const GridState& shape, std::size_t level, double slope, double center) {
    const auto& spec = shape.spectrum();
    const Eigen::MatrixXcd f = fourier_matrix(shape.points());
    Eigen::VectorXd kinetic(static_cast<Eigen::Index>(shape.points()));
    for (std::size_t k = 0; k < shape.points(); ++k) {
        const double p2 = shape.momentum(k) * shape.momentum(k);
        kinetic(static_cast<Eigen::Index>(k)) = 0.5 * p2 - 0.5 * p2 * spec.inverse_mass_correction(level);
    }
    Eigen::MatrixXcd h = f.adjoint() * kinetic.asDiagonal() * f;
    h = 0.5 * (h + h.adjoint()).eval();
    for (std::size_t j = 0; j < shape.points(); ++j) {
        const auto i = static_cast<Eigen::Index>(j);
        h(i, i) += spec.energy(level) + slope * (shape.position(j) - center);
    }
    return h;
}

Eigen::MatrixXcd hermitian_propagator(const Eigen::MatrixXcd& hamiltonian, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(hamiltonian);
    if (eig.info() != Eigen::Success) throw ConvergenceError("Hermitian eigendecomposition failed");
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    Eigen::VectorXcd phases(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) phases(i) = std::polar(1.0, -lambda(i) * t);
    return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

GridState evolve_linear_potential(const GridState& g, const LinearPotentialEvolution& op) {
    validate(OperatorSpec{op});
    const auto& spec = g.spectrum();
    return evolve_blocks(
        g, op.duration,
        [&](std::size_t n) { return -op.strength * (op.internal_coupled ? spec.mass(n) : 1.0); },
        op.center);
}

GridState evolve_accelerated_frame(const GridState& g, double acceleration, double t) {
    const auto& spec = g.spectrum();
    return evolve_blocks(g, t, [&](std::size_t n) { return acceleration * spec.mass(n); }, 0.0);
}

GridState accelerated_frame_product(const GridState& g, double acceleration, double t, std::size_t steps) {
    if (steps == 0) throw ValidationError("product formula needs at least one step");
    const double dt = t / static_cast<double>(steps);
    GridState cur = g;
    for (std::size_t i = 0; i < steps; ++i)
        cur = grid_free_evolution(grid_velocity_boost(cur, -acceleration * dt), dt);
    return cur;
}

GridState apply(const OperatorSpec& op, const GridState& g) {
    validate(op);
    return std::visit(
        [&](const auto& o) -> GridState {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, MomentumBoost>) return grid_momentum_boost(g, o.momentum);
            else if constexpr (std::is_same_v<T, VelocityBoost>) return grid_velocity_boost(g, o.velocity);
            else if constexpr (std::is_same_v<T, Translation>) return grid_translation(g, o.shift);
            else if constexpr (std::is_same_v<T, FreeEvolution>) return grid_free_evolution(g, o.time);
            else if constexpr (std::is_same_v<T, LinearPotentialEvolution>) return evolve_linear_potential(g, o);
            else if (o.steps == 0) return evolve_accelerated_frame(g, o.acceleration, o.time);
            else return accelerated_frame_product(g, o.acceleration, o.time, o.steps);
        },
        op);
}

ImpulseReport impulsive_boost_limit(const GridState& g, double v_b, std::span<const double> durations,
                                    bool internal_coupled) {
    require_position(g, "impulsive boost");
    require_wraparound_guard(g, "impulsive boost (initial state)");
    ImpulseReport report;
    report.internal_coupled = internal_coupled;
    report.velocity = v_b;

    const GridState target_v = grid_velocity_boost(g, v_b);
    const GridState target_p = grid_momentum_boost(g, v_b);
    require_wraparound_guard(target_v, "impulsive boost (boosted state)");

    for (double dt : durations) {
        if (!(dt > 0.0)) throw ValidationError("impulse durations must be positive");
        const GridState kicked = evolve_linear_potential(g, {v_b / dt, 0.0, internal_coupled, dt});
        require_wraparound_guard(kicked, "impulsive boost (driven state)");
        report.durations.push_back(dt);
        report.deviation_from_velocity_boost.push_back(distance(kicked, target_v));
        report.deviation_from_momentum_boost.push_back(distance(kicked, target_p));
    }

    const auto& dev = internal_coupled ? report.deviation_from_velocity_boost
                                       : report.deviation_from_momentum_boost;
    for (std::size_t i = 0; i + 1 < dev.size(); ++i) report.reduction_ratios.push_back(dev[i] / dev[i + 1]);
    if (dev.size() >= 2) {
        const std::size_t a = dev.size() - 2, b = dev.size() - 1;
        const double slope = (dev[a] - dev[b]) / (report.durations[a] - report.durations[b]);
        report.extrapolated_deviation = dev[b] - slope * report.durations[b];
    } else if (dev.size() == 1) {
        report.extrapolated_deviation = dev[0];
    }
    return report;
}

TrotterReport accelerated_frame_trotter(const GridState& g, double acceleration, double t,
                                        std::span<const std::size_t> steps) {
    require_position(g, "accelerated frame");
    require_wraparound_guard(g, "accelerated frame (initial state)");
    TrotterReport report;
    report.acceleration = acceleration;
    report.time = t;

    const GridState exact = evolve_accelerated_frame(g, acceleration, t);
    require_wraparound_guard(exact, "accelerated frame (evolved state)");
    for (std::size_t n : steps) {
        const GridState approx = accelerated_frame_product(g, acceleration, t, n);
        report.steps.push_back(n);
        report.errors.push_back(distance(approx, exact));
    }
    for (std::size_t i = 0; i + 1 < report.errors.size(); ++i)
        report.reduction_ratios.push_back(report.errors[i] / report.errors[i + 1]);
    return report;
}

}  // namespace qclock
