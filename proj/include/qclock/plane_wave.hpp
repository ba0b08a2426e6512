#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "qclock/spectrum.hpp"

namespace qclock {

using complex = std::complex<double>;

/// One term |n>|p> of a plane-wave superposition.
struct Component {
    std::size_t level = 0;
    double momentum = 0.0;
    complex amplitude{0.0, 0.0};
};

/// Exact sparse superposition over (internal level, momentum eigenstate).
///
/// Components are kept sorted by (level, momentum) and merged when two
/// momenta of the same level agree within kMergeTolerance. The state is an
/// immutable value; operators return new states. The spectrum is shared so
/// copies stay cheap.
class PlaneWaveState {
public:
    static constexpr double kMergeTolerance = 1e-12;
    static constexpr double kNormTolerance = 1e-12;

    /// Validates level indices and the norm (must be 1 within kNormTolerance).
    PlaneWaveState(std::shared_ptr<const InternalSpectrum> spectrum, std::vector<Component> components);

    /// Like the constructor but rescales the amplitudes to unit norm first.
    static PlaneWaveState normalized(std::shared_ptr<const InternalSpectrum> spectrum,
                                     std::vector<Component> components);

    /// |p> (x) sum_n c_n |n>, normalised.
    static PlaneWaveState product(std::shared_ptr<const InternalSpectrum> spectrum, double momentum,
                                  std::span<const complex> level_amplitudes);

    const InternalSpectrum& spectrum() const noexcept { return *spectrum_; }
    const std::shared_ptr<const InternalSpectrum>& spectrum_ptr() const noexcept { return spectrum_; }
    std::span<const Component> components() const noexcept { return components_; }
    std::size_t size() const noexcept { return components_.size(); }
    const Component& operator[](std::size_t i) const { return components_[i]; }

    double norm_squared() const noexcept;

    /// True once any operator pushed a branch outside the regime guard.
    bool regime_warning() const noexcept { return regime_warning_; }
    PlaneWaveState with_regime_warning(bool flag) const;

private:
    struct Unchecked {};
    PlaneWaveState(Unchecked, std::shared_ptr<const InternalSpectrum> spectrum,
                   std::vector<Component> components);
    void canonicalize();

    std::shared_ptr<const InternalSpectrum> spectrum_;
    std::vector<Component> components_;
    bool regime_warning_ = false;
};

/// <a|b> with <n,p|m,q> = delta_nm delta(p - q), the delta realised as a
/// match within the merge tolerance.
complex inner_product(const PlaneWaveState& a, const PlaneWaveState& b);

/// Entanglement entropy (nats) between internal levels and motion. Distinct
/// momenta are orthogonal motional flags, so
///   rho_int[n][m] = sum_p a_n(p) conj(a_m(p)).
double reduced_internal_entropy(const PlaneWaveState& s);

/// Von Neumann entropy of a Hermitian density matrix given by its eigenvalues.
double von_neumann_entropy(std::span<const double> eigenvalues);

/// Componentwise equality up to tolerance on momenta and amplitudes.
bool approx_equal(const PlaneWaveState& a, const PlaneWaveState& b, double tolerance);

}  // namespace qclock
