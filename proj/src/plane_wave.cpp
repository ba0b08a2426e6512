#include "qclock/plane_wave.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

namespace qclock {

PlaneWaveState::PlaneWaveState(std::shared_ptr<const InternalSpectrum> spectrum,
                               std::vector<Component> components)
    : PlaneWaveState(Unchecked{}, std::move(spectrum), std::move(components)) {
    const double n2 = norm_squared();
    if (std::abs(n2 - 1.0) > kNormTolerance)
        throw ValidationError("plane-wave state norm^2 is " + std::to_string(n2) + ", expected 1");
}

PlaneWaveState::PlaneWaveState(Unchecked, std::shared_ptr<const InternalSpectrum> spectrum,
                               std::vector<Component> components)
    : spectrum_(std::move(spectrum)), components_(std::move(components)) {
    if (!spectrum_) throw ValidationError("plane-wave state needs a spectrum");
    for (const auto& c : components_) {
        if (c.level >= spectrum_->size())
            throw ValidationError("component level " + std::to_string(c.level) +
                                  " outside spectrum of size " + std::to_string(spectrum_->size()));
        if (!std::isfinite(c.momentum) || !std::isfinite(c.amplitude.real()) ||
            !std::isfinite(c.amplitude.imag()))
            throw ValidationError("non-finite plane-wave component");
    }
    canonicalize();
}

PlaneWaveState PlaneWaveState::normalized(std::shared_ptr<const InternalSpectrum> spectrum,
                                          std::vector<Component> components) {
    PlaneWaveState raw(Unchecked{}, std::move(spectrum), std::move(components));
    const double n = std::sqrt(raw.norm_squared());
    if (!(n > 0.0)) throw ValidationError("cannot normalise a zero state");
    for (auto& c : raw.components_) c.amplitude /= n;
    return raw;
}

PlaneWaveState PlaneWaveState::product(std::shared_ptr<const InternalSpectrum> spectrum,
                                       double momentum, std::span<const complex> level_amplitudes) {
    std::vector<Component> comps;
    for (std::size_t n = 0; n < level_amplitudes.size(); ++n)
        if (level_amplitudes[n] != complex{}) comps.push_back({n, momentum, level_amplitudes[n]});
    return normalized(std::move(spectrum), std::move(comps));
}

void PlaneWaveState::canonicalize() {
    std::sort(components_.begin(), components_.end(), [](const Component& a, const Component& b) {
        return a.level != b.level ? a.level < b.level : a.momentum < b.momentum;
    });
    std::vector<Component> merged;
    merged.reserve(components_.size());
    for (const auto& c : components_) {
        if (!merged.empty() && merged.back().level == c.level &&
            std::abs(merged.back().momentum - c.momentum) <= kMergeTolerance) {
            merged.back().amplitude += c.amplitude;
        } else {
            merged.push_back(c);
        }
    }
    components_ = std::move(merged);
}

double PlaneWaveState::norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& c : components_) s += std::norm(c.amplitude);
    return s;
}

PlaneWaveState PlaneWaveState::with_regime_warning(bool flag) const {
    PlaneWaveState copy = *this;
    copy.regime_warning_ = regime_warning_ || flag;
    return copy;
}

complex inner_product(const PlaneWaveState& a, const PlaneWaveState& b) {
    if (!(a.spectrum() == b.spectrum()))
        throw ValidationError("inner product between states over different spectra");
    // Both lists are sorted by (level, momentum): merge-walk.
    complex sum{0.0, 0.0};
    const auto ca = a.components();
    const auto cb = b.components();
    std::size_t i = 0, j = 0;
    while (i < ca.size() && j < cb.size()) {
        const auto& x = ca[i];
        const auto& y = cb[j];
        if (x.level != y.level) {
            (x.level < y.level ? i : j)++;
        } else if (std::abs(x.momentum - y.momentum) <= PlaneWaveState::kMergeTolerance) {
            sum += std::conj(x.amplitude) * y.amplitude;
            ++i;
            ++j;
        } else {
            (x.momentum < y.momentum ? i : j)++;
        }
    }
    return sum;
}

double von_neumann_entropy(std::span<const double> eigenvalues) {
    double s = 0.0;
    for (double l : eigenvalues)
        if (l > 1e-300) s -= l * std::log(l);
    return s;
}

double reduced_internal_entropy(const PlaneWaveState& s) {
    const double n2 = s.norm_squared();
    if (std::abs(n2 - 1.0) > PlaneWaveState::kNormTolerance)
        throw ValidationError("entropy requires a normalised state");

    const std::size_t levels = s.spectrum().size();
    std::vector<Component> byp(s.components().begin(), s.components().end());
    std::stable_sort(byp.begin(), byp.end(),
                     [](const Component& a, const Component& b) { return a.momentum < b.momentum; });

    // Each run of coincident momenta is one motional basis vector.
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(levels, levels);
    Eigen::VectorXcd column = Eigen::VectorXcd::Zero(levels);
    for (std::size_t i = 0; i < byp.size(); ++i) {
        column(byp[i].level) += byp[i].amplitude;
        const bool closes = i + 1 == byp.size() ||
                            byp[i + 1].momentum - byp[i].momentum > PlaneWaveState::kMergeTolerance;
        if (closes) {
            rho += column * column.adjoint();
            column.setZero();
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho, Eigen::EigenvaluesOnly);
    std::vector<double> lambda(eig.eigenvalues().data(), eig.eigenvalues().data() + levels);
    return von_neumann_entropy(lambda);
}

bool approx_equal(const PlaneWaveState& a, const PlaneWaveState& b, double tolerance) {
    if (!(a.spectrum() == b.spectrum()) || a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].level != b[i].level) return false;
        if (std::abs(a[i].momentum - b[i].momentum) > tolerance) return false;
        if (std::abs(a[i].amplitude - b[i].amplitude) > tolerance) return false;
    }
    return true;
}

}  // namespace qclock
