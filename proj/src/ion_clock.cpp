#include "qclock/ion_clock.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <thread>

namespace qclock {

namespace {

constexpr double kStepHalvingTolerance = 1e-10;

double excited_mass(const TrapModel& m) { return 1.0 + m.transition; }

// sqrt(m / M_e) - 1 without cancellation for small u.
double root_mass_ratio_minus_one(double u) { return std::expm1(-0.5 * std::log1p(u)); }

// exp(i eta (a + a^dagger)) on the truncated Fock space.
Eigen::MatrixXcd recoil_operator(double eta, std::size_t cutoff) {
    const auto d = static_cast<Eigen::Index>(cutoff);
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index n = 1; n < d; ++n) x(n - 1, n) = x(n, n - 1) = std::sqrt(static_cast<double>(n));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(x);
    Eigen::VectorXcd phase(d);
    for (Eigen::Index i = 0; i < d; ++i) phase(i) = std::polar(1.0, eta * eig.eigenvalues()(i));
    return eig.eigenvectors().cast<std::complex<double>>() * phase.asDiagonal() *
           eig.eigenvectors().transpose().cast<std::complex<double>>();
}

}  // namespace

double TrapModel::pulse() const { return pulse_duration > 0.0 ? pulse_duration : std::numbers::pi / rabi; }

std::size_t TrapModel::cutoff() const { return fock_cutoff > 0 ? fock_cutoff : fock_index + 12; }

void TrapModel::validate(const ModelParams& params) const {
    if (!(transition >= 0.0) || !std::isfinite(transition)) throw ValidationError("transition ratio must be >= 0");
    if (!(trap > 0.0) || !std::isfinite(trap)) throw ValidationError("trap ratio must be positive");
    if (!(rabi > 0.0) || !std::isfinite(rabi)) throw ValidationError("Rabi rate must be positive");
    if (!(lamb_dicke >= 0.0) || !std::isfinite(lamb_dicke)) throw ValidationError("Lamb-Dicke parameter must be >= 0");
    if (pulse_duration < 0.0) throw ValidationError("pulse duration must be >= 0");
    if (cutoff() < fock_index + 10)
        throw ValidationError("Fock cutoff " + std::to_string(cutoff()) + " must be at least n + 10");
    regime_check(params, transition < params.epsilon_max, "epsilon_max",
                 "transition energy exceeds epsilon_max");
    // Momentum spread of the occupied Fock state: <p^2> = w (n + 1/2).
    regime_check(params, trap * (static_cast<double>(cutoff()) + 0.5) < params.kappa_max, "kappa_max",
                 "trap momentum spread exceeds kappa_max");
}

BranchOracle branch_spectrum_oracle(const TrapModel& model) {
    model.validate();
    BranchOracle o;
    const double rm1 = root_mass_ratio_minus_one(model.transition);
    o.ground_frequency = model.trap;
    o.excited_frequency = model.trap * (1.0 + rm1);
    o.carrier_shift = model.trap * (static_cast<double>(model.fock_index) + 0.5) * rm1;
    o.relative_shift = model.transition > 0.0 ? o.carrier_shift / model.transition : 0.0;
    return o;
}

Eigen::MatrixXd branch_motional_hamiltonian(const TrapModel& model, bool excited, std::size_t cutoff) {
    const auto d = static_cast<Eigen::Index>(cutoff);
    const double w = model.trap;
    // p^2/2 = (w/4)(2N + 1 - a^2 - a^dagger^2); x^2 w^2/2 = (w/4)(2N + 1 + a^2 + a^dagger^2).
    Eigen::MatrixXd kinetic = Eigen::MatrixXd::Zero(d, d);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index n = 0; n < d; ++n) {
        const double nn = static_cast<double>(n);
        kinetic(n, n) = 0.25 * w * (2.0 * nn + 1.0);
        h(n, n) = w * (nn + 0.5);
        if (n + 2 < d) {
            const double a2 = std::sqrt((nn + 1.0) * (nn + 2.0));
            kinetic(n, n + 2) = kinetic(n + 2, n) = -0.25 * w * a2;
        }
    }
    // Excited branch: p^2/2M_e = p^2/2 - (u/M_e) p^2/2.
    if (excited) h -= (model.transition / excited_mass(model)) * kinetic;
    return h;
}

double excitation_probability(const TrapModel& model, double detuning, double* step_error, double* norm_error) {
    const std::size_t nf = model.cutoff();
    const auto d = static_cast<Eigen::Index>(nf);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
    h.topLeftCorner(d, d) = branch_motional_hamiltonian(model, false, nf).cast<std::complex<double>>();
    Eigen::MatrixXd he = branch_motional_hamiltonian(model, true, nf);
    he.diagonal().array() -= detuning;
    h.bottomRightCorner(d, d) = he.cast<std::complex<double>>();
    const Eigen::MatrixXcd drive = 0.5 * model.rabi * recoil_operator(model.lamb_dicke, nf);
    h.bottomLeftCorner(d, d) = drive;
    h.topRightCorner(d, d) = drive.adjoint();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
    if (eig.info() != Eigen::Success) throw ConvergenceError("ion Hamiltonian diagonalisation failed");
    const Eigen::MatrixXcd& v = eig.eigenvectors();
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    const double tp = model.pulse();

    Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(2 * d);
    psi0(static_cast<Eigen::Index>(model.fock_index)) = 1.0;
    const Eigen::VectorXcd coeff = v.adjoint() * psi0;

    auto evolve = [&](const Eigen::VectorXcd& c, double t) {
        Eigen::VectorXcd out(c.size());
        for (Eigen::Index i = 0; i < c.size(); ++i) out(i) = c(i) * std::polar(1.0, -lambda(i) * t);
        return out;
    };
    const Eigen::VectorXcd full = v * evolve(coeff, tp);
    const Eigen::VectorXcd half = v * evolve(v.adjoint() * (v * evolve(coeff, 0.5 * tp)), 0.5 * tp);
    const double halving = (full - half).norm();
    if (!(halving <= kStepHalvingTolerance))
        throw ConvergenceError("propagator step-halving mismatch " + std::to_string(halving) +
                               " at detuning " + std::to_string(detuning));
    if (step_error) *step_error = halving;
    if (norm_error) *norm_error = std::abs(full.squaredNorm() - 1.0);
    return full.tail(d).squaredNorm();
}

std::vector<double> default_detuning_grid(const TrapModel& model, std::size_t points, double span_in_rabi) {
    if (points < 3) throw ValidationError("detuning grid needs at least three points");
    const double centre = branch_spectrum_oracle(model).carrier_shift;
    const double half = span_in_rabi * model.rabi;
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = centre - half + 2.0 * half * static_cast<double>(i) / static_cast<double>(points - 1);
    return grid;
}

SpectroscopyResult spectroscopy_scan(const TrapModel& model, std::span<const double> detunings,
                                     std::size_t threads) {
    model.validate();
    if (detunings.size() < 41) throw ValidationError("spectroscopy scan needs at least 41 detunings");
    if (!std::is_sorted(detunings.begin(), detunings.end())) throw ValidationError("detunings must be sorted");

    SpectroscopyResult r;
    r.detunings.assign(detunings.begin(), detunings.end());
    const std::size_t count = detunings.size();
    r.populations.resize(count);
    std::vector<double> step_err(count), norm_err(count);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++)
            r.populations[i] = excitation_probability(model, detunings[i], &step_err[i], &norm_err[i]);
    };
    const std::size_t pool = std::max<std::size_t>(1, std::min(threads, count));
    if (pool == 1) {
        worker();
    } else {
        std::vector<std::jthread> workers;
        for (std::size_t t = 0; t < pool; ++t) workers.emplace_back(worker);
    }
    r.max_step_halving_error = *std::max_element(step_err.begin(), step_err.end());
    r.max_norm_error = *std::max_element(norm_err.begin(), norm_err.end());

    const auto top = static_cast<std::size_t>(
        std::max_element(r.populations.begin(), r.populations.end()) - r.populations.begin());
    if (top == 0 || top + 1 == count)
        throw ConvergenceError("carrier peak at the edge of the detuning grid; widen the grid");

    const double x0 = detunings[top - 1], x1 = detunings[top], x2 = detunings[top + 1];
    const double y0 = r.populations[top - 1], y1 = r.populations[top], y2 = r.populations[top + 1];
    // Lagrange quadratic through three points: y = a (x - x1)^2 + b (x - x1) + y1.
    const double h0 = x0 - x1, h2 = x2 - x1;
    const double a = ((y0 - y1) / h0 - (y2 - y1) / h2) / (h0 - h2);
    const double b = (y0 - y1) / h0 - a * h0;
    if (!(a < 0.0)) throw ConvergenceError("peak fit is not concave");
    r.peak_detuning = x1 - b / (2.0 * a);
    r.peak_population = y1 - b * b / (4.0 * a);
    for (std::size_t k : {top >= 2 ? top - 2 : count, top + 2}) {
        if (k >= count) continue;
        const double dx = detunings[k] - x1;
        r.fit_residual = std::max(r.fit_residual, std::abs(a * dx * dx + b * dx + y1 - r.populations[k]));
    }

    const BranchOracle oracle = branch_spectrum_oracle(model);
    const double half_n = static_cast<double>(model.fock_index) + 0.5;
    r.relative_shift = model.transition > 0.0 ? r.peak_detuning / model.transition : 0.0;
    r.oracle_relative_shift = oracle.relative_shift;
    r.first_order_prediction = -model.trap * half_n / 2.0;
    r.second_order_prediction = model.transition * model.trap * half_n / 2.0;
    return r;
}

ShiftExpansion compare_to_expansion(const SpectroscopyResult& result, const TrapModel& model) {
    ShiftExpansion c;
    const double half_n = static_cast<double>(model.fock_index) + 0.5;
    c.extracted = result.relative_shift;
    c.first_order = -model.trap * half_n / 2.0;
    c.first_order_ratio = c.extracted / c.first_order;
    c.residual = c.extracted - c.first_order;
    c.second_order_term = model.transition * model.trap * half_n / 2.0;
    c.oracle_second_order = branch_spectrum_oracle(model).relative_shift - c.first_order;
    c.red_shift = c.extracted < 0.0;
    return c;
}

}  // namespace qclock
