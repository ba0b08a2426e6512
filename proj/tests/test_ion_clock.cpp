#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "qclock/ion_clock.hpp"

using namespace qclock;

namespace {

SpectroscopyResult scan(const TrapModel& m) {
    const auto grid = default_detuning_grid(m);
    return spectroscopy_scan(m, grid, 4);
}

}  // namespace

TEST_CASE("branch oracle") {
    TrapModel m;
    m.transition = 0.0;
    const auto flat = branch_spectrum_oracle(m);
    CHECK(flat.excited_frequency == flat.ground_frequency);
    CHECK(flat.carrier_shift == 0.0);

    m.transition = 1e-3;
    const auto o = branch_spectrum_oracle(m);
    CHECK(o.excited_frequency / o.ground_frequency == doctest::Approx(0.9995003747).epsilon(1e-10));
    CHECK(o.excited_frequency / o.ground_frequency == doctest::Approx(1.0 / std::sqrt(1.001)).epsilon(1e-15));

    // First order: -w (n + 1/2) / 2 relative to the transition.
    CHECK(o.relative_shift == doctest::Approx(-1e-5 * 0.5 / 2).epsilon(1e-3));
    CHECK(o.relative_shift < 0.0);
}

TEST_CASE("truncated branch Hamiltonians reproduce the oracle frequencies") {
    TrapModel m;
    const std::size_t cutoff = 40;
    for (bool excited : {false, true}) {
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(branch_motional_hamiltonian(m, excited, cutoff));
        const auto& ev = es.eigenvalues();
        const auto o = branch_spectrum_oracle(m);
        const double w = excited ? o.excited_frequency : o.ground_frequency;
        // Lowest levels are converged; the top of the truncated space is not.
        for (int k = 0; k < 10; ++k) CHECK(ev(k + 1) - ev(k) == doctest::Approx(w).epsilon(1e-10));
        CHECK(ev(0) == doctest::Approx(w / 2).epsilon(1e-10));
    }
}

TEST_CASE("model validation") {
    TrapModel m;
    CHECK(m.pulse() == doctest::Approx(M_PI / 1e-7));
    CHECK(m.cutoff() == 12);
    m.fock_cutoff = 5;
    CHECK_THROWS_AS(m.validate(), ValidationError);
    TrapModel bad;
    bad.rabi = -1.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("carrier without mass defect sits at zero detuning") {
    TrapModel m;
    m.transition = 0.0;
    const auto r = scan(m);
    CHECK(std::abs(r.peak_detuning) < 1e-3 * m.rabi);
    CHECK(r.max_norm_error < 1e-12);
}

TEST_CASE("scan matches the oracle and scales with n + 1/2") {
    TrapModel m;
    double shift[3];
    for (std::size_t n = 0; n < 3; ++n) {
        m.fock_index = n;
        const auto r = scan(m);
        CHECK(r.relative_shift < 0.0);
        CHECK(r.relative_shift / r.oracle_relative_shift == doctest::Approx(1.0).epsilon(0.01));
        CHECK(r.max_norm_error < 1e-12);
        CHECK(r.max_step_halving_error < 1e-10);
        shift[n] = r.relative_shift;
    }
    CHECK(shift[1] / shift[0] == doctest::Approx(3.0).epsilon(0.01));
    CHECK(shift[2] / shift[0] == doctest::Approx(5.0).epsilon(0.01));
}

TEST_CASE("first-order comparison") {
    TrapModel m;
    const auto r = scan(m);
    const auto c = compare_to_expansion(r, m);
    CHECK(c.first_order == doctest::Approx(-2.5e-6).epsilon(1e-12));
    CHECK(c.first_order_ratio >= 0.99);
    CHECK(c.first_order_ratio <= 1.01);
    CHECK(c.red_shift);

    TrapModel doubled = m;
    doubled.trap = 2e-5;
    const auto r2 = scan(doubled);
    CHECK(r2.relative_shift / r.relative_shift == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("Fock cutoff convergence") {
    TrapModel m;
    m.fock_cutoff = 12;
    const double a = excitation_probability(m, -2.5e-9);
    m.fock_cutoff = 24;
    const double b = excitation_probability(m, -2.5e-9);
    CHECK(std::abs(a - b) < 1e-10);

    m.fock_cutoff = 12;
    const auto ra = scan(m);
    m.fock_cutoff = 24;
    const auto rb = scan(m);
    CHECK(std::abs(ra.relative_shift / rb.relative_shift - 1.0) < 1e-10);
}

TEST_CASE("peak on the grid edge is reported") {
    TrapModel m;
    std::vector<double> off;
    for (int i = 0; i < 41; ++i) off.push_back(1e-6 + i * 1e-9);
    CHECK_THROWS_AS(spectroscopy_scan(m, off), ConvergenceError);
    const std::vector<double> few{0.0, 1e-9};
    CHECK_THROWS_AS(spectroscopy_scan(m, few), ValidationError);
}
