#include "qclock/spectrum.hpp"

#include <cmath>
#include <string>

namespace qclock {

InternalSpectrum make_spectrum(std::span<const double> epsilons, const ModelParams& params) {
    if (epsilons.empty()) throw ValidationError("spectrum needs at least one level");
    if (epsilons.front() != 0.0)
        throw ValidationError("ground level energy must be exactly 0 (H0|0> = 0)");
    for (std::size_t n = 0; n < epsilons.size(); ++n) {
        if (!std::isfinite(epsilons[n]))
            throw ValidationError("level " + std::to_string(n) + " energy is not finite");
        if (n > 0 && !(epsilons[n] > epsilons[n - 1]))
            throw ValidationError("level energies must be strictly increasing (level " +
                                  std::to_string(n) + ")");
    }

    InternalSpectrum s;
    s.energies_.assign(epsilons.begin(), epsilons.end());
    s.masses_.reserve(epsilons.size());
    for (double e : epsilons) s.masses_.push_back(1.0 + e);

    const double top = epsilons.back();
    s.regime_warning_ = !regime_check(params, top < params.epsilon_max, "epsilon_max",
                                      "internal energy " + std::to_string(top) +
                                          " mc^2 exceeds epsilon_max " +
                                          std::to_string(params.epsilon_max));
    return s;
}

InternalSpectrum make_ladder_spectrum(std::size_t levels, double spacing, const ModelParams& params) {
    if (levels == 0) throw ValidationError("spectrum needs at least one level");
    if (levels > 1 && !(spacing > 0.0)) throw ValidationError("ladder spacing must be positive");
    std::vector<double> eps(levels);
    for (std::size_t n = 0; n < levels; ++n) eps[n] = static_cast<double>(n) * spacing;
    return make_spectrum(eps, params);
}

}  // namespace qclock
