#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qclock/grid.hpp"
#include "qclock/plane_wave.hpp"
#include "qclock/spectrum.hpp"
#include "support.hpp"

using namespace qclock;
using testing::Gen;

TEST_CASE("spectrum: branch masses") {
    auto one = make_spectrum({0.0});
    CHECK(one.size() == 1);
    CHECK(one.mass(0) == 1.0);

    auto two = make_spectrum({0.0, 0.1});
    CHECK(two.mass(0) == 1.0);
    CHECK(two.mass(1) == doctest::Approx(1.1).epsilon(1e-15));

    auto three = make_spectrum({0.0, 0.05, 0.1});
    CHECK(three.mass(1) == doctest::Approx(1.05).epsilon(1e-15));
    CHECK(three.mass(2) == doctest::Approx(1.1).epsilon(1e-15));
    CHECK(three.inverse_mass_correction(2) == doctest::Approx(0.1 / 1.1).epsilon(1e-15));

    auto ladder = make_ladder_spectrum(4, 0.01);
    CHECK(ladder.energy(3) == doctest::Approx(0.03).epsilon(1e-15));
}

TEST_CASE("spectrum: ground level is the bare mass exactly") {
    Gen g(11);
    for (int i = 0; i < 200; ++i) {
        auto e = g.epsilons(g.index(1, 6));
        CHECK(make_spectrum(e).mass(0) == 1.0);
    }
}

TEST_CASE("spectrum: rejects malformed input") {
    CHECK_THROWS_AS(make_spectrum({}), ValidationError);
    CHECK_THROWS_AS(make_spectrum({0.1, 0.2}), ValidationError);
    CHECK_THROWS_AS(make_spectrum({0.0, 0.1, 0.1}), ValidationError);
    CHECK_THROWS_AS(make_spectrum({0.0, -0.1}), ValidationError);
    CHECK_THROWS_AS(make_spectrum({0.0, NAN}), ValidationError);
}

TEST_CASE("spectrum: regime guard warns, or throws when strict") {
    auto s = make_spectrum({0.0, 0.5});
    CHECK(s.regime_warning());
    CHECK_FALSE(make_spectrum({0.0, 0.1}).regime_warning());
    ModelParams strict;
    strict.strict_regime = true;
    CHECK_THROWS_AS(make_spectrum({0.0, 0.5}, strict), RegimeError);
    try {
        make_spectrum({0.0, 0.5}, strict);
    } catch (const RegimeError& e) {
        CHECK(e.guard() == "epsilon_max");
    }
}

TEST_CASE("plane wave: inner products") {
    auto spec = testing::spectrum({0.0, 0.1});
    const PlaneWaveState a(spec, {{0, 0.2, 1.0}});
    const PlaneWaveState b(spec, {{0, 0.3, 1.0}});
    CHECK(std::abs(inner_product(a, a) - 1.0) < 1e-15);
    CHECK(std::abs(inner_product(a, b)) == 0.0);

    const double r = 1.0 / std::sqrt(2.0);
    const PlaneWaveState sup(spec, {{0, 0.2, r}, {0, 0.3, r}});
    CHECK(std::abs(inner_product(sup, a) - r) < 1e-15);

    const PlaneWaveState other_level(spec, {{1, 0.2, 1.0}});
    CHECK(std::abs(inner_product(a, other_level)) == 0.0);
}

TEST_CASE("plane wave: construction validates and canonicalises") {
    auto spec = testing::spectrum({0.0, 0.1});
    CHECK_THROWS_AS(PlaneWaveState(spec, {{0, 0.0, 2.0}}), ValidationError);
    CHECK_THROWS_AS(PlaneWaveState(spec, {{2, 0.0, 1.0}}), ValidationError);

    // Momenta within the merge tolerance collapse into one component.
    auto s = PlaneWaveState::normalized(spec, {{0, 0.1, 1.0}, {0, 0.1 + 1e-14, 1.0}});
    REQUIRE(s.size() == 1);
    CHECK(std::abs(s[0].amplitude) == doctest::Approx(1.0));

    auto sorted = PlaneWaveState::normalized(spec, {{1, 0.0, 1.0}, {0, 0.3, 1.0}, {0, -0.3, 1.0}});
    CHECK(sorted[0].level == 0);
    CHECK(sorted[0].momentum < sorted[1].momentum);
    CHECK(sorted[2].level == 1);
}

TEST_CASE("entropy: product and entangled states") {
    auto spec = testing::spectrum({0.0, 0.1});
    const double r = 1.0 / std::sqrt(2.0);
    const PlaneWaveState product(spec, {{0, 0.0, r}, {1, 0.0, r}});
    CHECK(std::abs(reduced_internal_entropy(product)) < 1e-14);

    const double v = 0.01;
    const PlaneWaveState flagged(spec, {{0, spec->mass(0) * v, r}, {1, spec->mass(1) * v, r}});
    CHECK(reduced_internal_entropy(flagged) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("entropy: unequal weights on distinct momenta") {
    // Oracle: the reduced state is diag(0.9, 0.1).
    const double oracle = -0.9 * std::log(0.9) - 0.1 * std::log(0.1);
    CHECK(oracle == doctest::Approx(0.3250829733914482).epsilon(1e-15));

    auto spec = testing::spectrum({0.0, 0.1});
    const PlaneWaveState s(spec, {{0, 0.0, std::sqrt(0.9)}, {1, 0.05, std::sqrt(0.1)}});
    CHECK(reduced_internal_entropy(s) == doctest::Approx(oracle).epsilon(1e-13));
}

TEST_CASE("entropy: invariant under global phase and momentum relabelling") {
    Gen g(12);
    for (int i = 0; i < 200; ++i) {
        auto spec = testing::spectrum(g.epsilons(g.index(2, 4)));
        const auto s = g.state(spec, 3);
        const double h = reduced_internal_entropy(s);
        CHECK(h >= -1e-14);
        CHECK(h <= std::log(static_cast<double>(spec->size())) + 1e-12);

        const complex phase = std::polar(1.0, g.uniform(-3.0, 3.0));
        const double relabel = g.uniform(-0.05, 0.05);
        std::vector<Component> moved;
        for (const auto& c : s.components()) moved.push_back({c.level, c.momentum + relabel, c.amplitude * phase});
        CHECK(reduced_internal_entropy(PlaneWaveState(spec, moved)) == doctest::Approx(h).epsilon(1e-10));
    }
}

TEST_CASE("von Neumann entropy of eigenvalue lists") {
    const std::vector<double> pure{1.0, 0.0};
    CHECK(von_neumann_entropy(pure) == 0.0);
    const std::vector<double> third{1.0 / 3, 1.0 / 3, 1.0 / 3};
    CHECK(von_neumann_entropy(third) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
}

// ---------------------------------------------------------------------------
// Lattice

TEST_CASE("grid: delta in position gives flat momentum amplitudes") {
    auto spec = testing::spectrum({0.0});
    GridState g(spec, 64, 20.0);
    g.level(0)(0) = 1.0;
    const auto m = momentum_position_transform(g, TransformDirection::ToMomentum);
    CHECK(m.basis() == Basis::Momentum);
    for (Eigen::Index k = 0; k < 64; ++k) CHECK(std::abs(m.level(0)(k)) == doctest::Approx(1.0 / 8.0).epsilon(1e-14));
}

TEST_CASE("grid: transform round trip is the identity") {
    Gen gen(13);
    auto spec = testing::spectrum({0.0, 0.1});
    for (std::size_t d : {16u, 128u, 256u}) {
        GridState g(spec, d, 30.0);
        double norm = 0.0;
        for (std::size_t n = 0; n < 2; ++n)
            for (std::size_t j = 0; j < d; ++j) {
                g.level(n)(j) = gen.amplitude();
                norm += std::norm(g.level(n)(j));
            }
        for (std::size_t n = 0; n < 2; ++n) g.level(n) /= std::sqrt(norm);
        const auto back = momentum_position_transform(
            momentum_position_transform(g, TransformDirection::ToMomentum), TransformDirection::ToPosition);
        CHECK(distance(g, back) < 1e-12);
        CHECK(momentum_position_transform(g, TransformDirection::ToMomentum).norm_squared() ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("grid: lattice coordinates") {
    auto spec = testing::spectrum({0.0});
    GridState g(spec, 8, 16.0);
    CHECK(g.dx() == 2.0);
    CHECK(g.position(0) == -8.0);
    CHECK(g.position(4) == 0.0);
    CHECK(g.dp() == doctest::Approx(2 * std::numbers::pi / 16.0));
    CHECK(g.momentum(4) == 0.0);
    CHECK_THROWS_AS(GridState(spec, 12, 16.0), ValidationError);
}

TEST_CASE("grid: Gaussian is minimum uncertainty") {
    auto spec = testing::spectrum({0.0, 0.1});
    const std::vector<complex> amps{1.0, 1.0};
    const auto g = GridState::gaussian(spec, 256, 40.0, 0.0, 2.0, 0.0, amps);
    CHECK(g.norm_squared() == doctest::Approx(1.0).epsilon(1e-14));
    const auto s = spreads(g, 0);
    CHECK(s.sigma_x == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(s.sigma_p == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(s.sigma_x * s.sigma_p == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(within_wraparound_guard(g));
}

TEST_CASE("grid: wraparound guard trips for a wide packet") {
    auto spec = testing::spectrum({0.0});
    const std::vector<complex> amps{1.0};
    const auto g = GridState::gaussian(spec, 64, 20.0, 0.0, 4.0, 0.0, amps);
    CHECK_FALSE(within_wraparound_guard(g));
    CHECK(edge_weights(g).position > GridState::kEdgeWeightThreshold);
    CHECK_THROWS_AS(require_wraparound_guard(g, "test"), WraparoundError);
}
