#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "qclock/units.hpp"

namespace qclock {

/// Internal energy ladder of a composite particle with branch masses
/// M_n = 1 + E_n (natural units). Level 0 is the rest-mass ground state.
class InternalSpectrum {
public:
    InternalSpectrum() = default;

    std::size_t size() const noexcept { return energies_.size(); }
    double energy(std::size_t n) const { return energies_.at(n); }
    double mass(std::size_t n) const { return masses_.at(n); }
    std::span<const double> energies() const noexcept { return energies_; }
    std::span<const double> masses() const noexcept { return masses_; }

    /// E_n / M_n, the exact correction in 1/M_n = 1 - E_n/M_n.
    double inverse_mass_correction(std::size_t n) const { return energy(n) / mass(n); }

    /// Set when built outside the regime guard in non-strict mode.
    bool regime_warning() const noexcept { return regime_warning_; }

    bool operator==(const InternalSpectrum& other) const { return energies_ == other.energies_; }

private:
    friend InternalSpectrum make_spectrum(std::span<const double>, const ModelParams&);
    std::vector<double> energies_;
    std::vector<double> masses_;
    bool regime_warning_ = false;
};

/// Builds a spectrum from dimensionless energies E_n/mc^2. The list must start
/// at 0 and be strictly increasing.
InternalSpectrum make_spectrum(std::span<const double> epsilons, const ModelParams& params = {});

inline InternalSpectrum make_spectrum(std::initializer_list<double> epsilons,
                                      const ModelParams& params = {}) {
    return make_spectrum(std::span<const double>(epsilons.begin(), epsilons.size()), params);
}

/// Evenly spaced ladder E_n = n * spacing for n < levels.
InternalSpectrum make_ladder_spectrum(std::size_t levels, double spacing,
                                      const ModelParams& params = {});

}  // namespace qclock
