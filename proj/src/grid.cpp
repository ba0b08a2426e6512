#include "qclock/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <unsupported/Eigen/FFT>

namespace qclock {

namespace {

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

void require_compatible(const GridState& a, const GridState& b) {
    if (a.points() != b.points() || a.length() != b.length() || a.levels() != b.levels() ||
        a.basis() != b.basis())
        throw ValidationError("grid states live on different lattices");
}

}  // namespace

GridState::GridState(std::shared_ptr<const InternalSpectrum> spectrum, std::size_t points,
                     double length, Basis basis)
    : spectrum_(std::move(spectrum)), points_(points), length_(length), basis_(basis) {
    if (!spectrum_) throw ValidationError("grid state needs a spectrum");
    if (!is_power_of_two(points))
        throw ValidationError("grid size " + std::to_string(points) + " is not a power of two");
    if (!(length > 0.0) || !std::isfinite(length)) throw ValidationError("grid length must be positive");
    amplitudes_.assign(spectrum_->size(), Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(points)));
}

GridState GridState::gaussian(std::shared_ptr<const InternalSpectrum> spectrum, std::size_t points,
                              double length, double center, double width, double momentum,
                              std::span<const complex> level_amplitudes) {
    GridState g(std::move(spectrum), points, length);
    if (level_amplitudes.size() > g.levels())
        throw ValidationError("more level amplitudes than spectrum levels");
    if (!(width > 0.0)) throw ValidationError("wavepacket width must be positive");
    Eigen::VectorXcd shape(static_cast<Eigen::Index>(points));
    for (std::size_t j = 0; j < points; ++j) {
        const double x = g.position(j);
        const double d = x - center;
        shape(static_cast<Eigen::Index>(j)) =
            std::exp(-d * d / (4.0 * width * width)) * std::polar(1.0, momentum * x);
    }
    shape /= shape.norm();
    double weight = 0.0;
    for (const auto& c : level_amplitudes) weight += std::norm(c);
    if (!(weight > 0.0)) throw ValidationError("internal superposition is empty");
    for (std::size_t n = 0; n < level_amplitudes.size(); ++n)
        g.level(n) = shape * (level_amplitudes[n] / std::sqrt(weight));
    return g;
}

double GridState::dp() const noexcept { return 2.0 * std::numbers::pi / length_; }

double GridState::position(std::size_t j) const noexcept {
    return (static_cast<double>(j) - static_cast<double>(points_ / 2)) * dx();
}

double GridState::momentum(std::size_t k) const noexcept {
    return (static_cast<double>(k) - static_cast<double>(points_ / 2)) * dp();
}

double GridState::norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& a : amplitudes_) s += a.squaredNorm();
    return s;
}

void transform_in_place(Eigen::VectorXcd& v, TransformDirection direction) {
    // Centred lattices: exp(-i p_k x_j) = exp(-2 pi i k j / D) (-1)^j (-1)^k (-1)^{D/2}.
    const auto size = v.size();
    const double scale = 1.0 / std::sqrt(static_cast<double>(size));
    const double half_sign = ((size / 2) % 2 == 0) ? 1.0 : -1.0;
    std::vector<complex> in(static_cast<std::size_t>(size)), out;
    for (Eigen::Index j = 0; j < size; ++j) in[j] = (j % 2 == 0) ? v(j) : -v(j);

    static thread_local Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    if (direction == TransformDirection::ToMomentum) {
        fft.fwd(out, in);
    } else {
        fft.inv(out, in);
    }
    for (Eigen::Index k = 0; k < size; ++k)
        v(k) = ((k % 2 == 0) ? 1.0 : -1.0) * half_sign * scale * out[static_cast<std::size_t>(k)];
}

GridState momentum_position_transform(const GridState& g, TransformDirection direction) {
    const Basis target = direction == TransformDirection::ToMomentum ? Basis::Momentum : Basis::Position;
    if (g.basis() == target) throw ValidationError("grid state already in the requested basis");
    GridState out(g.spectrum_ptr(), g.points(), g.length(), target);
    for (std::size_t n = 0; n < g.levels(); ++n) {
        out.level(n) = g.level(n);
        transform_in_place(out.level(n), direction);
    }
    out.set_wraparound_warning(g.wraparound_warning() || !within_wraparound_guard(out));
    return out;
}

namespace {

double edge_weight_of(const GridState& g) {
    const auto guard = static_cast<Eigen::Index>(GridState::kGuardSites);
    double s = 0.0;
    for (std::size_t n = 0; n < g.levels(); ++n) {
        const auto& a = g.level(n);
        s += a.head(guard).squaredNorm() + a.tail(guard).squaredNorm();
    }
    return s;
}

}  // namespace

EdgeWeights edge_weights(const GridState& g) {
    GridState other = momentum_position_transform(
        GridState(g), g.basis() == Basis::Position ? TransformDirection::ToMomentum
                                                   : TransformDirection::ToPosition);
    const double here = edge_weight_of(g);
    const double there = edge_weight_of(other);
    return g.basis() == Basis::Position ? EdgeWeights{here, there} : EdgeWeights{there, here};
}

bool within_wraparound_guard(const GridState& g) {
    // Only the lattice the state lives on is checked here so that the
    // transform itself does not recurse.
    return edge_weight_of(g) <= GridState::kEdgeWeightThreshold;
}

void require_wraparound_guard(const GridState& g, const char* context) {
    const EdgeWeights w = edge_weights(g);
    if (w.position > GridState::kEdgeWeightThreshold || w.momentum > GridState::kEdgeWeightThreshold)
        throw WraparoundError(std::string(context) + ": state reaches the lattice boundary (position edge weight " +
                              std::to_string(w.position) + ", momentum edge weight " +
                              std::to_string(w.momentum) + ")");
}

complex inner_product(const GridState& a, const GridState& b) {
    require_compatible(a, b);
    complex s{0.0, 0.0};
    for (std::size_t n = 0; n < a.levels(); ++n) s += a.level(n).dot(b.level(n));
    return s;
}

double distance(const GridState& a, const GridState& b) {
    require_compatible(a, b);
    double s = 0.0;
    for (std::size_t n = 0; n < a.levels(); ++n) s += (a.level(n) - b.level(n)).squaredNorm();
    return std::sqrt(s);
}

Spreads spreads(const GridState& position_state, std::size_t level) {
    if (position_state.basis() != Basis::Position) throw ValidationError("spreads expects a position-basis state");
    auto moments = [](const GridState& g, std::size_t n, auto coord) {
        const auto& a = g.level(n);
        double w = 0.0, m1 = 0.0, m2 = 0.0;
        for (std::size_t j = 0; j < g.points(); ++j) {
            const double p = std::norm(a(static_cast<Eigen::Index>(j)));
            const double c = coord(j);
            w += p;
            m1 += p * c;
            m2 += p * c * c;
        }
        m1 /= w;
        return std::sqrt(std::max(0.0, m2 / w - m1 * m1));
    };
    const GridState mom = momentum_position_transform(position_state, TransformDirection::ToMomentum);
    return {moments(position_state, level, [&](std::size_t j) { return position_state.position(j); }),
            moments(mom, level, [&](std::size_t k) { return mom.momentum(k); })};
}

}  // namespace qclock
