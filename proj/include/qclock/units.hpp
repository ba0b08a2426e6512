#pragma once

#include <cmath>
#include <string>

#include "qclock/errors.hpp"

namespace qclock {

// Natural units throughout: hbar = c = m = 1, with m the rest mass of the
// internal ground state. Every physical quantity is therefore a ratio:
//   energies  E / (m c^2)      momenta   p / (m c)
//   velocities v / c           times     t m c^2 / hbar
//   lengths   x m c / hbar
// Physical inputs in SI units are converted at the CLI boundary.

// Bounds of the regime where the truncated Hamiltonian p^2/2M + H0 applies:
// internal energies small against mc^2 and kinetic momenta smaller still.
// These are engineering defaults; there is no sharp physical cutoff.
struct ModelParams {
    double epsilon_max = 0.2;   // max E_n / mc^2
    double kappa_max = 0.1;     // max (p / mc)^2 of any branch
    bool strict_regime = false; // throw instead of flagging
};

// Records (or throws for) a regime violation. Returns true when within regime.
inline bool regime_check(const ModelParams& params, bool ok, const std::string& guard,
                         const std::string& what) {
    if (ok) return true;
    if (params.strict_regime) throw RegimeError(guard, what);
    return false;
}

inline bool momentum_in_regime(const ModelParams& params, double p) {
    return std::isfinite(p) && p * p < params.kappa_max;
}

// Phases beyond this magnitude make mod-2pi comparisons meaningless in double.
inline constexpr double kMaxAccumulatedPhase = 1e6;

}  // namespace qclock
