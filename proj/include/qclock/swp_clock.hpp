#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qclock/spectrum.hpp"

namespace qclock {

/// Salecker-Wigner-Peres clock on an N-level ladder H0 = sum_n n w0 |n><n|.
///
/// Pointer states |w_k> = N^{-1/2} sum_n exp(-2 pi i k n / N) |n>; an
/// undisturbed clock started in |w_0> sits on |w_k> at t = k tau with
/// tau = 2 pi / (N w0). The clock operator is T_c = tau sum_k k |w_k><w_k|.
class SwpClock {
public:
    SwpClock(std::size_t dimension, double level_spacing);

    std::size_t dimension() const noexcept { return dimension_; }
    double level_spacing() const noexcept { return omega0_; }
    double tick() const noexcept { return tau_; }

    Eigen::VectorXcd pointer_state(std::size_t k) const;
    Eigen::MatrixXcd clock_operator() const;

    /// <w_k|psi> for all k, O(N^2) with a shared twiddle table.
    Eigen::VectorXcd pointer_amplitudes(const Eigen::VectorXcd& state) const;

private:
    std::size_t dimension_;
    double omega0_;
    double tau_;
    std::vector<std::complex<double>> twiddle_;  // exp(2 pi i j / N)
};

/// Per-level multiplier d_n on the internal phase n w0 t.
class DilationProfile {
public:
    static DilationProfile none(std::size_t dimension);
    /// Clock moved out and back with a velocity boost: d = 1 - v^2/2.
    static DilationProfile velocity_classical(std::size_t dimension, double v_b);
    /// Observer moved instead: d = 1 + v^2/2.
    static DilationProfile observer_classical(std::size_t dimension, double v_b);
    /// Clock moved with a momentum boost: d_n = 1 - p_b^2 / (2 m M_n).
    static DilationProfile momentum_nonclassical(double p_b, const InternalSpectrum& spectrum);
    static DilationProfile custom(std::vector<double> multipliers, std::string name = "custom");

    std::span<const double> multipliers() const noexcept { return d_; }
    std::size_t size() const noexcept { return d_.size(); }
    const std::string& name() const noexcept { return name_; }
    bool uniform() const noexcept;

private:
    DilationProfile(std::vector<double> d, std::string name);
    std::vector<double> d_;
    std::string name_;
};

/// c_n(t) = N^{-1/2} exp(-i n w0 (d_n t)).
Eigen::VectorXcd clock_state_at(const SwpClock& clock, const DilationProfile& profile, double t);

struct ClockReading {
    double t = 0.0;
    double mean = 0.0;               ///< <T_c>
    double variance = 0.0;           ///< (Delta T_c)^2
    double circular_variance = 0.0;  ///< 1 - |sum_k P_k exp(2 pi i k / N)|, dimensionless
};

ClockReading read_clock(const SwpClock& clock, const Eigen::VectorXcd& state, double t = 0.0);

std::vector<ClockReading> variance_timeseries(const SwpClock& clock, const DilationProfile& profile,
                                              std::span<const double> t_grid);

struct EffectiveTick {
    double t = 0.0;
    double variance = 0.0;
};

struct TickSearch {
    std::vector<EffectiveTick> ticks;
    double mean_spacing = 0.0;        ///< average gap between consecutive ticks
    double spacing_deviation = 0.0;   ///< mean_spacing - tau
    std::string diagnostic;           ///< set when no minima were found
};

/// Local minima of (Delta T_c)^2 over [t_begin, t_end]: grid scan at
/// `resolution` followed by golden-section refinement to tau * 1e-9.
TickSearch find_effective_ticks(const SwpClock& clock, const DilationProfile& profile, double t_begin,
                                double t_end, double resolution);

struct TickSpacingRow {
    std::size_t dimension = 0;
    double tau = 0.0;
    double mean_spacing = 0.0;
    double relative_deviation = 0.0;  ///< mean_spacing / tau - 1
    double mean_min_variance = 0.0;   ///< average variance at the effective ticks, in tau^2
};

/// Effective tick spacing under momentum-boost dilation versus clock size.
/// The ladder spacing is fixed at `level_spacing` (in mc^2); each N uses the
/// first `ticks` ticks.
std::vector<TickSpacingRow> tick_spacing_study(std::span<const std::size_t> dimensions, double p_b,
                                               double level_spacing, std::size_t ticks = 4,
                                               const ModelParams& params = {});

}  // namespace qclock
