#include "qclock/swp_clock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qclock {

SwpClock::SwpClock(std::size_t dimension, double level_spacing)
    : dimension_(dimension), omega0_(level_spacing) {
    if (dimension < 2) throw ValidationError("SWP clock needs at least two levels");
    if (!(level_spacing > 0.0) || !std::isfinite(level_spacing))
        throw ValidationError("SWP level spacing must be positive");
    tau_ = 2.0 * std::numbers::pi / (static_cast<double>(dimension) * level_spacing);
    twiddle_.resize(dimension);
    for (std::size_t j = 0; j < dimension; ++j)
        twiddle_[j] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) /
                                          static_cast<double>(dimension));
}

Eigen::VectorXcd SwpClock::pointer_state(std::size_t k) const {
    const auto n_levels = static_cast<Eigen::Index>(dimension_);
    Eigen::VectorXcd w(n_levels);
    const double norm = 1.0 / std::sqrt(static_cast<double>(dimension_));
    for (std::size_t n = 0; n < dimension_; ++n)
        w(static_cast<Eigen::Index>(n)) = norm * std::conj(twiddle_[(k * n) % dimension_]);
    return w;
}

Eigen::MatrixXcd SwpClock::clock_operator() const {
    const auto n_levels = static_cast<Eigen::Index>(dimension_);
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(n_levels, n_levels);
    for (std::size_t k = 0; k < dimension_; ++k) {
        const Eigen::VectorXcd w = pointer_state(k);
        t += (tau_ * static_cast<double>(k)) * (w * w.adjoint());
    }
    return t;
}

Eigen::VectorXcd SwpClock::pointer_amplitudes(const Eigen::VectorXcd& state) const {
    const auto n_levels = static_cast<Eigen::Index>(dimension_);
    if (state.size() != n_levels) throw ValidationError("clock state has the wrong dimension");
    Eigen::VectorXcd out(n_levels);
    const double norm = 1.0 / std::sqrt(static_cast<double>(dimension_));
    for (std::size_t k = 0; k < dimension_; ++k) {
        std::complex<double> s{0.0, 0.0};
        for (std::size_t n = 0; n < dimension_; ++n)
            s += twiddle_[(k * n) % dimension_] * state(static_cast<Eigen::Index>(n));
        out(static_cast<Eigen::Index>(k)) = norm * s;
    }
    return out;
}

DilationProfile::DilationProfile(std::vector<double> d, std::string name)
    : d_(std::move(d)), name_(std::move(name)) {
    for (double x : d_)
        if (!(x > 0.0 && x < 2.0)) throw ValidationError("dilation multipliers must lie in (0, 2)");
}

DilationProfile DilationProfile::none(std::size_t dimension) {
    return {std::vector<double>(dimension, 1.0), "none"};
}

DilationProfile DilationProfile::velocity_classical(std::size_t dimension, double v_b) {
    return {std::vector<double>(dimension, 1.0 - 0.5 * v_b * v_b), "velocity-classical"};
}

DilationProfile DilationProfile::observer_classical(std::size_t dimension, double v_b) {
    return {std::vector<double>(dimension, 1.0 + 0.5 * v_b * v_b), "observer-classical"};
}

DilationProfile DilationProfile::momentum_nonclassical(double p_b, const InternalSpectrum& spectrum) {
    std::vector<double> d(spectrum.size());
    for (std::size_t n = 0; n < d.size(); ++n) d[n] = 1.0 - p_b * p_b / (2.0 * spectrum.mass(n));
    return {std::move(d), "momentum-nonclassical"};
}

DilationProfile DilationProfile::custom(std::vector<double> multipliers, std::string name) {
    return {std::move(multipliers), std::move(name)};
}

bool DilationProfile::uniform() const noexcept {
    return std::all_of(d_.begin(), d_.end(), [&](double x) { return x == d_.front(); });
}

Eigen::VectorXcd clock_state_at(const SwpClock& clock, const DilationProfile& profile, double t) {
    if (profile.size() != clock.dimension()) throw ValidationError("profile size does not match clock");
    if (t < 0.0) throw ValidationError("clock time must be non-negative");
    const auto n_levels = static_cast<Eigen::Index>(clock.dimension());
    Eigen::VectorXcd c(n_levels);
    const double norm = 1.0 / std::sqrt(static_cast<double>(clock.dimension()));
    const auto d = profile.multipliers();
    for (std::size_t n = 0; n < clock.dimension(); ++n)
        c(static_cast<Eigen::Index>(n)) =
            std::polar(norm, -static_cast<double>(n) * clock.level_spacing() * (d[n] * t));
    return c;
}

ClockReading read_clock(const SwpClock& clock, const Eigen::VectorXcd& state, double t) {
    const Eigen::VectorXcd amp = clock.pointer_amplitudes(state);
    const std::size_t n = clock.dimension();
    std::vector<double> weight(n);
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        weight[k] = std::norm(amp(static_cast<Eigen::Index>(k)));
        total += weight[k];
    }
    ClockReading r;
    r.t = t;
    // Two passes: the variance at a tick is ~1e-30 and must not be lost to
    // cancellation between <T^2> and <T>^2.
    double mean_k = 0.0;
    for (std::size_t k = 0; k < n; ++k) mean_k += static_cast<double>(k) * weight[k];
    mean_k /= total;
    double var_k = 0.0;
    std::complex<double> resultant{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
        const double dk = static_cast<double>(k) - mean_k;
        var_k += weight[k] * dk * dk;
        resultant += weight[k] * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) /
                                                     static_cast<double>(n));
    }
    var_k /= total;
    r.mean = clock.tick() * mean_k;
    r.variance = clock.tick() * clock.tick() * var_k;
    r.circular_variance = std::max(0.0, 1.0 - std::abs(resultant) / total);
    return r;
}

std::vector<ClockReading> variance_timeseries(const SwpClock& clock, const DilationProfile& profile,
                                              std::span<const double> t_grid) {
    if (!std::is_sorted(t_grid.begin(), t_grid.end())) throw ValidationError("time grid must be sorted");
    std::vector<ClockReading> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) out.push_back(read_clock(clock, clock_state_at(clock, profile, t), t));
    return out;
}

namespace {

double variance_at(const SwpClock& clock, const DilationProfile& profile, double t) {
    return read_clock(clock, clock_state_at(clock, profile, t), t).variance;
}

// Golden-section search for the minimum inside [a, b].
EffectiveTick golden_minimum(const SwpClock& clock, const DilationProfile& profile, double a, double b,
                             double tolerance) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = variance_at(clock, profile, c);
    double fd = variance_at(clock, profile, d);
    while (b - a > tolerance) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = variance_at(clock, profile, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = variance_at(clock, profile, d);
        }
    }
    const double t = 0.5 * (a + b);
    return {t, variance_at(clock, profile, t)};
}

}  // namespace

TickSearch find_effective_ticks(const SwpClock& clock, const DilationProfile& profile, double t_begin,
                                double t_end, double resolution) {
    const double tau = clock.tick();
    if (!(t_end > t_begin) || t_begin < 0.0) throw ValidationError("tick window must be a forward interval");
    if (!(resolution > 0.0) || resolution > tau / 50.0)
        throw ValidationError("tick resolution must be positive and at most tau/50");
    if (t_end - t_begin < 3.0 * tau) throw ValidationError("tick window must cover at least three ticks");

    const auto steps = static_cast<std::size_t>(std::ceil((t_end - t_begin) / resolution));
    std::vector<double> grid(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i)
        grid[i] = std::min(t_end, t_begin + static_cast<double>(i) * resolution);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = variance_at(clock, profile, grid[i]);

    TickSearch out;
    const double tol = tau * 1e-9;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        // <= on the left keeps plateaus of exact zeros from being skipped.
        if (v[i] <= v[i - 1] && v[i] < v[i + 1]) {
            EffectiveTick tick = golden_minimum(clock, profile, grid[i - 1], grid[i + 1], tol);
            if (tick.variance > v[i]) tick = {grid[i], v[i]};
            out.ticks.push_back(tick);
        }
    }
    if (out.ticks.empty()) {
        out.diagnostic = "no variance minima inside the window";
        return out;
    }
    if (out.ticks.size() >= 2)
        out.mean_spacing = (out.ticks.back().t - out.ticks.front().t) / static_cast<double>(out.ticks.size() - 1);
    out.spacing_deviation = out.mean_spacing - tau;
    return out;
}

std::vector<TickSpacingRow> tick_spacing_study(std::span<const std::size_t> dimensions, double p_b,
                                               double level_spacing, std::size_t ticks,
                                               const ModelParams& params) {
    std::vector<TickSpacingRow> rows;
    for (std::size_t dim : dimensions) {
        const auto spectrum = make_ladder_spectrum(dim, level_spacing, params);
        const SwpClock clock(dim, level_spacing);
        const auto profile = DilationProfile::momentum_nonclassical(p_b, spectrum);
        const double tau = clock.tick();
        const TickSearch s = find_effective_ticks(clock, profile, 0.5 * tau,
                                                  (static_cast<double>(ticks) + 0.5) * tau, tau / 50.0);
        TickSpacingRow row;
        row.dimension = dim;
        row.tau = tau;
        row.mean_spacing = s.mean_spacing;
        row.relative_deviation = s.mean_spacing / tau - 1.0;
        double sum = 0.0;
        for (const auto& t : s.ticks) sum += t.variance;
        row.mean_min_variance = s.ticks.empty() ? 0.0 : sum / static_cast<double>(s.ticks.size()) / (tau * tau);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace qclock
