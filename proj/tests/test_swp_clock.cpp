#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qclock/swp_clock.hpp"
#include "support.hpp"

using namespace qclock;

TEST_CASE("tick length") {
    CHECK(SwpClock(4, 1.0).tick() == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
    CHECK(SwpClock(8, 0.01).tick() == doctest::Approx(2 * std::numbers::pi / 0.08).epsilon(1e-15));
    CHECK_THROWS_AS(SwpClock(1, 1.0), ValidationError);
    CHECK_THROWS_AS(SwpClock(4, 0.0), ValidationError);
}

TEST_CASE("ideal clock passes through the pointer states") {
    for (std::size_t N : {4u, 16u, 64u}) {
        const SwpClock clock(N, 0.01);
        const auto none = DilationProfile::none(N);
        const auto w0 = clock_state_at(clock, none, 0.0);
        CHECK((w0 - clock.pointer_state(0)).norm() == 0.0);
        for (std::size_t k : {1u, 2u, 3u}) {
            const auto s = clock_state_at(clock, none, k * clock.tick());
            const double fidelity = std::norm(clock.pointer_state(k % N).dot(s));
            CHECK(std::abs(fidelity - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("clock reading at t = 0") {
    const SwpClock clock(8, 0.01);
    const auto r = read_clock(clock, clock_state_at(clock, DilationProfile::none(8), 0.0));
    CHECK(std::abs(r.mean) < 1e-20 * clock.tick());
    CHECK(r.variance < 1e-20 * clock.tick() * clock.tick());
    CHECK(std::abs(r.circular_variance) < 1e-15);
}

TEST_CASE("half-tick variance, N = 4, against a direct evaluation") {
    const SwpClock clock(4, 1.0);
    const double tau = clock.tick(), t = tau / 2;
    // Pointer weights by brute force over the four projectors.
    double q[4], mean = 0.0;
    for (int k = 0; k < 4; ++k) {
        complex a = 0.0;
        for (int n = 0; n < 4; ++n) a += std::polar(0.25, n * (std::numbers::pi * k / 2 - t));
        q[k] = std::norm(a);
        mean += q[k] * k * tau;
    }
    double var = 0.0;
    for (int k = 0; k < 4; ++k) var += q[k] * (k * tau - mean) * (k * tau - mean);
    CHECK(var / (tau * tau) == doctest::Approx(0.75).epsilon(1e-12));

    const auto r = read_clock(clock, clock_state_at(clock, DilationProfile::none(4), t), t);
    CHECK(r.mean == doctest::Approx(mean).epsilon(1e-13));
    CHECK(r.variance == doctest::Approx(var).epsilon(1e-13));
}

TEST_CASE("variance ignores a global phase") {
    const SwpClock clock(16, 0.01);
    const auto s = clock_state_at(clock, DilationProfile::momentum_nonclassical(0.1, make_ladder_spectrum(16, 0.01)),
                                  123.0);
    const auto a = read_clock(clock, s);
    const auto b = read_clock(clock, s * std::polar(1.0, 1.234));
    CHECK(a.variance == doctest::Approx(b.variance).epsilon(1e-14));
    CHECK(a.mean == doctest::Approx(b.mean).epsilon(1e-14));
}

TEST_CASE("uniform dilation only reparametrises time") {
    const std::size_t N = 8;
    const SwpClock clock(N, 0.01);
    const double v = 0.01, d = 1.0 - v * v / 2;
    const auto vel = DilationProfile::velocity_classical(N, v);
    const auto none = DilationProfile::none(N);
    CHECK(vel.uniform());
    testing::Gen g(41);
    for (int i = 0; i < 200; ++i) {
        const double t = g.uniform(0.0, 20 * clock.tick());
        const auto a = read_clock(clock, clock_state_at(clock, vel, t));
        const auto b = read_clock(clock, clock_state_at(clock, none, t * d));
        CHECK(std::abs(a.variance - b.variance) < 1e-12 * clock.tick() * clock.tick());
    }
}

TEST_CASE("effective ticks of ideal and uniformly dilated clocks") {
    const SwpClock clock(8, 0.01);
    const double tau = clock.tick();
    const auto ideal = find_effective_ticks(clock, DilationProfile::none(8), 0.5 * tau, 5.5 * tau, tau / 50);
    REQUIRE(ideal.ticks.size() == 5);
    for (std::size_t k = 0; k < 5; ++k) {
        CHECK(ideal.ticks[k].t == doctest::Approx((k + 1) * tau).epsilon(1e-9));
        CHECK(ideal.ticks[k].variance < 1e-20 * tau * tau);
    }
    CHECK(std::abs(ideal.mean_spacing - tau) < 1e-9 * tau);

    const auto vel = find_effective_ticks(clock, DilationProfile::velocity_classical(8, 0.01), 0.5 * tau, 5.5 * tau,
                                          tau / 50);
    CHECK(vel.mean_spacing / (tau / (1 - 5e-5)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("tick search validates its window") {
    const SwpClock clock(8, 0.01);
    const double tau = clock.tick();
    const auto none = DilationProfile::none(8);
    CHECK_THROWS_AS(find_effective_ticks(clock, none, 0.0, 10 * tau, tau / 10), ValidationError);
    CHECK_THROWS_AS(find_effective_ticks(clock, none, 0.0, 2 * tau, tau / 100), ValidationError);
    CHECK_THROWS_AS(find_effective_ticks(clock, DilationProfile::none(4), 0.0, 10 * tau, tau / 100), ValidationError);
}

// Regression fixtures for the nonclassical clock: p_b = 0.1, E_n = 0.01 n,
// N = 8. Values came from an independent numpy scan with scipy refinement
// and agree with this implementation to better than 1e-9.
TEST_CASE("nonclassical dilation blurs the ticks (frozen)") {
    const SwpClock clock(8, 0.01);
    const double tau = clock.tick();
    const auto profile = DilationProfile::momentum_nonclassical(0.1, make_ladder_spectrum(8, 0.01));
    CHECK_FALSE(profile.uniform());
    const auto r = find_effective_ticks(clock, profile, 0.5 * tau, 10.5 * tau, 0.02 * tau);

    struct Fixture { double t_over_tau, var_over_tau2; };
    const Fixture expect[] = {
        {1.004695418546034, 5.2908044587558916e-08}, {2.0093907261450163, 1.3018285374867762e-07},
        {3.0140855160044073, 2.836821838382117e-07}, {4.018780688172044, 5.043238785398193e-07},
        {5.0234768177765075, 8.136373458886796e-07}, {6.028172528173765, 1.9045590582517836e-06},
        {7.032852981913852, 3.2301354321076136e-05}, {8.037546089344909, 4.21877088541639e-05},
        {9.042258738109663, 4.2858979196935596e-06}, {10.046953624434261, 3.2545964727251526e-06},
    };
    REQUIRE(r.ticks.size() == std::size(expect));
    for (std::size_t k = 0; k < r.ticks.size(); ++k) {
        CHECK(r.ticks[k].t / tau == doctest::Approx(expect[k].t_over_tau).epsilon(1e-8));
        CHECK(r.ticks[k].variance / (tau * tau) == doctest::Approx(expect[k].var_over_tau2).epsilon(1e-6));
        CHECK(r.ticks[k].variance > 0.0);
    }
    CHECK(r.mean_spacing / tau - 1.0 == doctest::Approx(0.004695356176406484).epsilon(1e-6));
}

TEST_CASE("nonclassical clock never realigns inside the window") {
    const std::size_t N = 8;
    const SwpClock clock(N, 0.01);
    const double tau = clock.tick();
    const auto profile = DilationProfile::momentum_nonclassical(0.1, make_ladder_spectrum(N, 0.01));
    // The phases n d_n w0 t are not commensurate, so no exact realignment.
    std::vector<double> grid;
    for (int i = 1; i <= 20000; ++i) grid.push_back(i * 10.5 * tau / 20000);
    double vmin = INFINITY;
    for (const auto& r : variance_timeseries(clock, profile, grid)) vmin = std::min(vmin, r.variance);
    CHECK(vmin > 1e-15 * tau * tau);
}

TEST_CASE("tick spacing study") {
    const std::vector<std::size_t> dims{4, 16};
    const auto rows = tick_spacing_study(dims, 0.1, 0.01);
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) {
        CHECK(row.relative_deviation > 0.0);
        CHECK(row.mean_min_variance > 0.0);
    }
}
