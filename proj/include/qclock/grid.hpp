#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qclock/plane_wave.hpp"

namespace qclock {

enum class Basis { Position, Momentum };
enum class TransformDirection { ToMomentum, ToPosition };

/// Probability mass held in the outermost lattice sites. A state leaking into
/// these sites feels the periodic wraparound of the discrete transform.
struct EdgeWeights {
    double position = 0.0;
    double momentum = 0.0;
};

/// Periodic lattice state, one amplitude array per internal level.
///
/// Positions x_j = (j - D/2) dx with dx = L/D and momenta
/// p_k = (k - D/2) dp with dp = 2 pi / L, j, k = 0..D-1. D must be a power of
/// two. Amplitudes are discrete: sum_j |psi_n(x_j)|^2 over all levels is 1.
class GridState {
public:
    static constexpr double kNormTolerance = 1e-12;
    static constexpr std::size_t kGuardSites = 4;
    static constexpr double kEdgeWeightThreshold = 1e-10;

    GridState(std::shared_ptr<const InternalSpectrum> spectrum, std::size_t points, double length,
              Basis basis = Basis::Position);

    /// Gaussian wavepacket exp(-(x-x0)^2/(4 sigma^2) + i p0 x) times the
    /// internal superposition sum_n c_n |n>, normalised on the lattice.
    static GridState gaussian(std::shared_ptr<const InternalSpectrum> spectrum, std::size_t points,
                              double length, double center, double width, double momentum,
                              std::span<const complex> level_amplitudes);

    const InternalSpectrum& spectrum() const noexcept { return *spectrum_; }
    const std::shared_ptr<const InternalSpectrum>& spectrum_ptr() const noexcept { return spectrum_; }
    std::size_t points() const noexcept { return points_; }
    std::size_t levels() const noexcept { return amplitudes_.size(); }
    double length() const noexcept { return length_; }
    double dx() const noexcept { return length_ / static_cast<double>(points_); }
    double dp() const noexcept;
    Basis basis() const noexcept { return basis_; }

    double position(std::size_t j) const noexcept;
    double momentum(std::size_t k) const noexcept;

    Eigen::VectorXcd& level(std::size_t n) { return amplitudes_.at(n); }
    const Eigen::VectorXcd& level(std::size_t n) const { return amplitudes_.at(n); }

    double norm_squared() const noexcept;
    bool wraparound_warning() const noexcept { return wraparound_warning_; }
    void set_wraparound_warning(bool flag) noexcept { wraparound_warning_ = flag; }

private:
    std::shared_ptr<const InternalSpectrum> spectrum_;
    std::size_t points_;
    double length_;
    Basis basis_;
    std::vector<Eigen::VectorXcd> amplitudes_;
    bool wraparound_warning_ = false;
};

/// Unitary discrete Fourier map between the position and momentum lattices,
///   psi(p_k) = D^{-1/2} sum_j psi(x_j) exp(-i p_k x_j).
/// The result carries a wraparound warning when edge weights exceed the
/// threshold.
GridState momentum_position_transform(const GridState& g, TransformDirection direction);

/// Same map applied to one amplitude array in place.
void transform_in_place(Eigen::VectorXcd& v, TransformDirection direction);

EdgeWeights edge_weights(const GridState& g);
bool within_wraparound_guard(const GridState& g);

/// Throws WraparoundError naming the offending lattice.
void require_wraparound_guard(const GridState& g, const char* context);

/// <a|b> summed over all levels; both states must share a basis and lattice.
complex inner_product(const GridState& a, const GridState& b);

/// ||a - b||.
double distance(const GridState& a, const GridState& b);

/// Position-space spread and momentum-space spread of one level.
struct Spreads {
    double sigma_x = 0.0;
    double sigma_p = 0.0;
};
Spreads spreads(const GridState& position_state, std::size_t level);

}  // namespace qclock
