#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <random>
#include <vector>

#include "qclock/plane_wave.hpp"
#include "qclock/spectrum.hpp"

namespace testing {

using qclock::complex;

inline std::shared_ptr<const qclock::InternalSpectrum> spectrum(std::initializer_list<double> eps) {
    return std::make_shared<const qclock::InternalSpectrum>(qclock::make_spectrum(eps));
}

inline std::shared_ptr<const qclock::InternalSpectrum> spectrum(const std::vector<double>& eps) {
    return std::make_shared<const qclock::InternalSpectrum>(qclock::make_spectrum(eps));
}

// Seeded generators for the property tests.
struct Gen {
    explicit Gen(std::uint64_t seed) : rng(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    }

    // 0 = e_0 < e_1 < ... with all entries below emax.
    std::vector<double> epsilons(std::size_t levels, double emax = 0.19) {
        std::vector<double> e{0.0};
        for (std::size_t i = 1; i < levels; ++i) e.push_back(uniform(0.0, emax));
        std::sort(e.begin() + 1, e.end());
        for (std::size_t i = 1; i < e.size(); ++i)
            if (e[i] <= e[i - 1]) e[i] = e[i - 1] + 1e-6;
        return e;
    }

    complex amplitude() { return {uniform(-1, 1), uniform(-1, 1)}; }

    // Random normalised superposition over every level and a few momenta.
    qclock::PlaneWaveState state(std::shared_ptr<const qclock::InternalSpectrum> spec, std::size_t momenta = 3,
                                 double pmax = 0.1) {
        std::vector<qclock::Component> c;
        for (std::size_t n = 0; n < spec->size(); ++n)
            for (std::size_t k = 0; k < momenta; ++k) c.push_back({n, uniform(-pmax, pmax), amplitude()});
        return qclock::PlaneWaveState::normalized(spec, std::move(c));
    }

    std::mt19937_64 rng;
};

inline double phase_distance(complex a, complex b) { return std::abs(a - b); }

}  // namespace testing
