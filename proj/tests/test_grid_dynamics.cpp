#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qclock/grid_dynamics.hpp"
#include "support.hpp"

using namespace qclock;

namespace {

GridState packet(std::shared_ptr<const InternalSpectrum> spec, std::size_t d = 256, double p0 = 0.0) {
    const std::vector<complex> amps(spec->size(), 1.0);
    return GridState::gaussian(spec, d, 40.0, 0.0, 2.0, p0, amps);
}

double mean_momentum(const GridState& g, std::size_t level) {
    const auto m = momentum_position_transform(g, TransformDirection::ToMomentum);
    double w = 0, acc = 0;
    for (std::size_t k = 0; k < m.points(); ++k) {
        w += std::norm(m.level(level)(k));
        acc += std::norm(m.level(level)(k)) * m.momentum(k);
    }
    return acc / w;
}

}  // namespace

TEST_CASE("lattice boosts move the momentum distribution") {
    auto spec = testing::spectrum({0.0, 0.1});
    const auto g = packet(spec);
    const double kick = 4 * g.dp();  // commensurate with the lattice
    const auto pb = grid_momentum_boost(g, kick);
    CHECK(mean_momentum(pb, 0) == doctest::Approx(kick).epsilon(1e-10));
    CHECK(mean_momentum(pb, 1) == doctest::Approx(kick).epsilon(1e-10));

    const auto vb = grid_velocity_boost(g, 0.05);
    CHECK(mean_momentum(vb, 0) == doctest::Approx(0.05).epsilon(1e-8));
    CHECK(mean_momentum(vb, 1) == doctest::Approx(0.055).epsilon(1e-8));
    CHECK(vb.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lattice free evolution and translation are unitary") {
    auto spec = testing::spectrum({0.0, 0.1});
    const auto g = packet(spec, 256, 0.05);
    CHECK(grid_free_evolution(g, 5.0).norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(grid_translation(g, 1.3).norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(distance(grid_translation(grid_translation(g, 1.3), -1.3), g) < 1e-12);
    CHECK(distance(grid_free_evolution(grid_free_evolution(g, 2.0), 3.0), grid_free_evolution(g, 5.0)) < 1e-12);
}

TEST_CASE("exact propagator agrees with the spectral free evolution") {
    auto spec = testing::spectrum({0.0, 0.1});
    const auto g = packet(spec, 128);
    const auto viaH = evolve_linear_potential(g, {0.0, 0.0, true, 3.0});
    CHECK(distance(viaH, grid_free_evolution(g, 3.0)) < 1e-10);
}

TEST_CASE("impulsive boost: first-order approach to B_v") {
    auto spec = testing::spectrum({0.0, 0.1});
    const auto g = packet(spec, 128);
    const std::vector<double> durations{0.1, 0.01, 0.001};
    const auto r = impulsive_boost_limit(g, 0.05, durations, true);
    REQUIRE(r.reduction_ratios.size() == 2);
    for (double ratio : r.reduction_ratios) {
        CHECK(ratio > 5.0);
        CHECK(ratio < 20.0);
    }
    CHECK(r.extrapolated_deviation < 1e-3 * r.deviation_from_velocity_boost.back());
}

TEST_CASE("impulsive boost without internal coupling gives B_p") {
    auto spec = testing::spectrum({0.0, 0.1});
    const auto g = packet(spec, 128);
    const std::vector<double> durations{0.1, 0.01, 0.001};
    const auto r = impulsive_boost_limit(g, 0.05, durations, false);
    CHECK(r.deviation_from_momentum_boost.back() < 1e-3);
    // The excited branch misses its extra kick E_1 v: a finite gap remains.
    CHECK(r.deviation_from_velocity_boost.back() > 1e-3);
}

TEST_CASE("accelerated frame: product formula converges at first order") {
    auto spec = testing::spectrum({0.0, 0.1});
    const auto g = packet(spec, 128);
    const std::vector<std::size_t> steps{64, 128};
    const auto r = accelerated_frame_trotter(g, 0.02, 2.0, steps);
    REQUIRE(r.reduction_ratios.size() == 1);
    CHECK(r.reduction_ratios[0] >= 1.6);
    CHECK(r.reduction_ratios[0] <= 2.4);
}

TEST_CASE("accelerated frame: single-level control run converges the same way") {
    auto spec = testing::spectrum({0.0});
    const auto g = packet(spec, 128);
    const std::vector<std::size_t> steps{32, 64, 128};
    const auto r = accelerated_frame_trotter(g, 0.02, 2.0, steps);
    for (double ratio : r.reduction_ratios) {
        CHECK(ratio >= 1.6);
        CHECK(ratio <= 2.4);
    }
}

TEST_CASE("accelerated frame with zero acceleration is free evolution") {
    auto spec = testing::spectrum({0.0, 0.1});
    const auto g = packet(spec, 128);
    const auto free = grid_free_evolution(g, 2.0);
    for (std::size_t n : {1u, 7u, 64u}) CHECK(distance(accelerated_frame_product(g, 0.0, 2.0, n), free) < 1e-12);
    CHECK(distance(evolve_accelerated_frame(g, 0.0, 2.0), free) < 1e-10);
}

TEST_CASE("grid apply dispatches every operator kind") {
    auto spec = testing::spectrum({0.0, 0.1});
    const auto g = packet(spec, 128);
    CHECK(distance(qclock::apply(OperatorSpec{VelocityBoost{0.02}}, g), grid_velocity_boost(g, 0.02)) == 0.0);
    CHECK(distance(qclock::apply(OperatorSpec{AcceleratedFrame{0.01, 1.0, 16}}, g), accelerated_frame_product(g, 0.01, 1.0, 16)) ==
          0.0);
    CHECK(qclock::apply(OperatorSpec{AcceleratedFrame{0.01, 1.0, 0}}, g).norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
}
