#ifndef VACRAD_PROFILES_HPP
#define VACRAD_PROFILES_HPP

// Drive and force profiles, sampling grids and the Fourier transform of forces.
//
// Units: hbar = 1. Frequencies are angular (rad/time). The oscillator mass is
// carried by the force profile and defaults to one.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vacrad/errors.hpp"

namespace vacrad {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

struct Sample {
    double t;
    double value;
};

/// Closed interval [lo, hi] on the time axis.
struct Interval {
    double lo;
    double hi;

    double width() const { return hi - lo; }
    bool contains(const Interval& other) const { return other.lo >= lo && other.hi <= hi; }
};

namespace detail {

// Linear interpolation on strictly increasing abscissae.
inline double interpolate_linear(const std::vector<Sample>& samples, double t) {
    auto it = std::upper_bound(samples.begin(), samples.end(), t,
                               [](double x, const Sample& s) { return x < s.t; });
    if (it == samples.begin()) return samples.front().value;
    if (it == samples.end()) return samples.back().value;
    const Sample& hi = *it;
    const Sample& lo = *(it - 1);
    const double w = (t - lo.t) / (hi.t - lo.t);
    return lo.value + w * (hi.value - lo.value);
}

inline void validate_samples(const std::vector<Sample>& samples, const char* what) {
    if (samples.size() < 2)
        throw DomainError(std::string(what) + ": at least two samples are required");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!std::isfinite(samples[i].t) || !std::isfinite(samples[i].value))
            throw DomainError(std::string(what) + ": non-finite sample");
        if (i > 0 && !(samples[i].t > samples[i - 1].t))
            throw DomainError(std::string(what) + ": sample times must be strictly increasing");
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// Frequency profile omega^2(t)
// ---------------------------------------------------------------------------

enum class ProfileKind { Constant, SechBump, Tabulated };

/// Plus: omega0^2 + Omega^2 sech^2(t/T). Minus: omega0^2 - Omega^2 sech^2(t/T).
enum class BumpSign { Plus, Minus };

class FrequencyProfile {
public:
    static FrequencyProfile constant(double omega0) {
        check_omega0(omega0);
        FrequencyProfile p;
        p.kind_ = ProfileKind::Constant;
        p.omega0_ = omega0;
        return p;
    }

    static FrequencyProfile sech_bump(double omega0, double amplitude, double timescale,
                                      BumpSign sign = BumpSign::Plus) {
        check_omega0(omega0);
        if (!(timescale > 0.0) || !std::isfinite(timescale))
            throw DomainError("sech bump timescale T must be positive");
        if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
            throw DomainError("sech bump amplitude Omega must be non-negative");
        if (sign == BumpSign::Minus && !(amplitude < omega0))
            throw DomainError("minus-sign bump requires Omega < omega0 for stability");
        FrequencyProfile p;
        p.kind_ = ProfileKind::SechBump;
        p.omega0_ = omega0;
        p.amplitude_ = amplitude;
        p.timescale_ = timescale;
        p.sign_ = sign;
        return p;
    }

    /// Samples of (t, omega^2). The first and last samples must sit within
    /// `flat_tol * omega0^2` of omega0^2.
    static FrequencyProfile tabulated(double omega0, std::vector<Sample> samples,
                                      double flat_tol = 1e-6) {
        check_omega0(omega0);
        detail::validate_samples(samples, "tabulated frequency profile");
        const double w02 = omega0 * omega0;
        if (std::abs(samples.front().value - w02) > flat_tol * w02 ||
            std::abs(samples.back().value - w02) > flat_tol * w02)
            throw DomainError("tabulated frequency profile must start and end at omega0^2");
        for (const auto& s : samples)
            if (!(s.value > 0.0))
                throw DomainError("tabulated frequency profile must keep omega^2 > 0");
        FrequencyProfile p;
        p.kind_ = ProfileKind::Tabulated;
        p.omega0_ = omega0;
        p.samples_ = std::move(samples);
        return p;
    }

    ProfileKind kind() const { return kind_; }
    double omega0() const { return omega0_; }
    double amplitude() const { return amplitude_; }
    double timescale() const { return timescale_; }
    BumpSign sign() const { return sign_; }
    const std::vector<Sample>& samples() const { return samples_; }

    /// Signed sech^2 weight: +Omega^2 for Plus, -Omega^2 for Minus.
    double signed_amplitude_squared() const {
        const double a2 = amplitude_ * amplitude_;
        return sign_ == BumpSign::Plus ? a2 : -a2;
    }

    /// omega^2(t) - omega0^2.
    double perturbation(double t) const {
        switch (kind_) {
        case ProfileKind::Constant:
            return 0.0;
        case ProfileKind::SechBump: {
            const double c = std::cosh(t / timescale_);
            return signed_amplitude_squared() / (c * c);
        }
        case ProfileKind::Tabulated:
            return omega_squared(t) - omega0_ * omega0_;
        }
        return 0.0;
    }

    double omega_squared(double t) const {
        if (kind_ == ProfileKind::Tabulated) {
            if (t < samples_.front().t || t > samples_.back().t)
                throw OutOfRangeError("time " + std::to_string(t) +
                                      " outside tabulated frequency profile");
            return detail::interpolate_linear(samples_, t);
        }
        return omega0_ * omega0_ + perturbation(t);
    }

    /// Upper bound of omega(t) over all t.
    double max_omega() const {
        switch (kind_) {
        case ProfileKind::Constant:
            return omega0_;
        case ProfileKind::SechBump:
            return sign_ == BumpSign::Plus ? std::sqrt(omega0_ * omega0_ + amplitude_ * amplitude_)
                                           : omega0_;
        case ProfileKind::Tabulated: {
            double m = 0.0;
            for (const auto& s : samples_) m = std::max(m, s.value);
            return std::sqrt(m);
        }
        }
        return omega0_;
    }

    /// Interval outside of which the drive is flat; nullopt for Constant.
    std::optional<Interval> support(double span = 30.0) const {
        switch (kind_) {
        case ProfileKind::Constant:
            return std::nullopt;
        case ProfileKind::SechBump:
            return Interval{-span * timescale_, span * timescale_};
        case ProfileKind::Tabulated:
            return Interval{samples_.front().t, samples_.back().t};
        }
        return std::nullopt;
    }

private:
    static void check_omega0(double omega0) {
        if (!(omega0 > 0.0) || !std::isfinite(omega0))
            throw DomainError("omega0 must be positive");
    }

    ProfileKind kind_ = ProfileKind::Constant;
    double omega0_ = 1.0;
    double amplitude_ = 0.0;
    double timescale_ = 1.0;
    BumpSign sign_ = BumpSign::Plus;
    std::vector<Sample> samples_;
};

inline double omega_squared(const FrequencyProfile& profile, double t) {
    return profile.omega_squared(t);
}

// ---------------------------------------------------------------------------
// Force profile F(t)
// ---------------------------------------------------------------------------

enum class ForceKind { GaussCos, Tabulated, Null };

class ForceProfile {
public:
    /// F0 cos[omega_f (t - t_f)] exp[-(t - t_f)^2 / T2^2]
    static ForceProfile gauss_cos(double F0, double omega_f, double t_f, double T2,
                                  double mass = 1.0) {
        if (!(T2 > 0.0) || !std::isfinite(T2)) throw DomainError("force width T2 must be positive");
        if (!std::isfinite(F0) || !std::isfinite(omega_f) || !std::isfinite(t_f))
            throw DomainError("force parameters must be finite");
        check_mass(mass);
        ForceProfile f;
        f.kind_ = ForceKind::GaussCos;
        f.amplitude_ = F0;
        f.omega_f_ = omega_f;
        f.center_ = t_f;
        f.width_ = T2;
        f.mass_ = mass;
        return f;
    }

    static ForceProfile null(double mass = 1.0) {
        check_mass(mass);
        ForceProfile f;
        f.mass_ = mass;
        return f;
    }

    /// Samples of (t, F). The force is zero outside the sampled range; both
    /// end samples must lie within `end_tol` of zero. `center` is the
    /// reference time t_f used to centre the Fourier transform.
    static ForceProfile tabulated(std::vector<Sample> samples, double mass = 1.0,
                                  double center = 0.0, double end_tol = 1e-8) {
        detail::validate_samples(samples, "tabulated force");
        check_mass(mass);
        double peak = 0.0;
        for (const auto& s : samples) peak = std::max(peak, std::abs(s.value));
        if (std::abs(samples.front().value) > end_tol * std::max(peak, 1.0) ||
            std::abs(samples.back().value) > end_tol * std::max(peak, 1.0))
            throw DomainError("tabulated force must vanish at both ends");
        ForceProfile f;
        f.kind_ = ForceKind::Tabulated;
        f.samples_ = std::move(samples);
        f.mass_ = mass;
        f.center_ = center;
        return f;
    }

    ForceKind kind() const { return kind_; }
    double amplitude() const { return amplitude_; }
    double omega_f() const { return omega_f_; }
    double center() const { return center_; }
    double width() const { return width_; }
    double mass() const { return mass_; }
    const std::vector<Sample>& samples() const { return samples_; }

    bool is_null() const { return kind_ == ForceKind::Null; }

    /// Same force moved so that it is centred at `t_f`.
    ForceProfile recentered(double t_f) const {
        ForceProfile f = *this;
        if (kind_ == ForceKind::Tabulated) {
            const double shift = t_f - center_;
            for (auto& s : f.samples_) s.t += shift;
        }
        f.center_ = t_f;
        return f;
    }

    /// Same shape with amplitude multiplied by `k`.
    ForceProfile scaled(double k) const {
        ForceProfile f = *this;
        f.amplitude_ *= k;
        for (auto& s : f.samples_) s.value *= k;
        return f;
    }

    double value(double t) const {
        switch (kind_) {
        case ForceKind::Null:
            return 0.0;
        case ForceKind::GaussCos: {
            const double s = t - center_;
            return amplitude_ * std::cos(omega_f_ * s) * std::exp(-(s * s) / (width_ * width_));
        }
        case ForceKind::Tabulated:
            if (t < samples_.front().t || t > samples_.back().t) return 0.0;
            return detail::interpolate_linear(samples_, t);
        }
        return 0.0;
    }

    /// Interval carrying the force (GaussCos: t_f +- 8 T2); nullopt for Null.
    std::optional<Interval> support() const {
        switch (kind_) {
        case ForceKind::Null:
            return std::nullopt;
        case ForceKind::GaussCos:
            return Interval{center_ - 8.0 * width_, center_ + 8.0 * width_};
        case ForceKind::Tabulated:
            return Interval{samples_.front().t, samples_.back().t};
        }
        return std::nullopt;
    }

    /// Finest time scale the force carries; quadratures should resolve it.
    double resolution_step() const {
        switch (kind_) {
        case ForceKind::Null:
            return INFINITY;
        case ForceKind::GaussCos: {
            double h = width_ / 16.0;
            if (omega_f_ != 0.0) h = std::min(h, 2.0 * pi / std::abs(omega_f_) / 40.0);
            return h;
        }
        case ForceKind::Tabulated: {
            double h = INFINITY;
            for (std::size_t i = 1; i < samples_.size(); ++i)
                h = std::min(h, samples_[i].t - samples_[i - 1].t);
            return h;
        }
        }
        return INFINITY;
    }

private:
    static void check_mass(double m) {
        if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("mass must be positive");
    }

    ForceKind kind_ = ForceKind::Null;
    double amplitude_ = 0.0;
    double omega_f_ = 0.0;
    double center_ = 0.0;
    double width_ = 1.0;
    double mass_ = 1.0;
    std::vector<Sample> samples_;
};

inline double force_value(const ForceProfile& force, double t) { return force.value(t); }

/// Fourier amplitude of the centred force f(s) = F(s + t_f):
///     f~(omega) = \int ds f(s) e^{+i omega s}.
/// Closed form for GaussCos, trapezoid rule over the samples for Tabulated.
inline cplx force_fourier(const ForceProfile& force, double omega) {
    switch (force.kind()) {
    case ForceKind::Null:
        return 0.0;
    case ForceKind::GaussCos: {
        const double T2 = force.width();
        const double wf = force.omega_f();
        const double dm = (omega - wf) * T2;
        const double dp = (omega + wf) * T2;
        return force.amplitude() * std::sqrt(pi) * T2 / 2.0 *
               (std::exp(-dm * dm / 4.0) + std::exp(-dp * dp / 4.0));
    }
    case ForceKind::Tabulated: {
        const auto& s = force.samples();
        cplx sum = 0.0;
        for (std::size_t i = 1; i < s.size(); ++i) {
            const double h = s[i].t - s[i - 1].t;
            const cplx a = s[i - 1].value * std::polar(1.0, omega * (s[i - 1].t - force.center()));
            const cplx b = s[i].value * std::polar(1.0, omega * (s[i].t - force.center()));
            sum += 0.5 * h * (a + b);
        }
        return sum;
    }
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Uniform time grid
// ---------------------------------------------------------------------------

struct TimeGrid {
    double t_min = 0.0;
    double t_max = 1.0;
    std::size_t n_steps = 2;

    TimeGrid() = default;
    TimeGrid(double lo, double hi, std::size_t steps) : t_min(lo), t_max(hi), n_steps(steps) {
        if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
            throw DomainError("time grid requires t_min < t_max");
        if (steps < 2) throw DomainError("time grid requires at least two steps");
    }

    double step() const { return (t_max - t_min) / static_cast<double>(n_steps); }
    std::size_t size() const { return n_steps + 1; }
    double at(std::size_t i) const {
        return i == n_steps ? t_max : t_min + static_cast<double>(i) * step();
    }
    bool covers(const Interval& iv) const { return iv.lo >= t_min && iv.hi <= t_max; }
    Interval interval() const { return {t_min, t_max}; }
};

struct GridOptions {
    double span = 30.0;             ///< half-width of the drive window in units of T
    double points_per_period = 40.0; ///< samples per shortest period 2 pi / max omega
    double free_periods = 10.0;     ///< half-width in periods when the drive has no timescale
};

/// Default grid: [-span T, span T] (or a few free periods for a constant drive)
/// enlarged to contain `cover`, with h <= (2 pi / max omega) / points_per_period.
inline TimeGrid default_grid(const FrequencyProfile& profile, std::optional<Interval> cover = {},
                             const GridOptions& opt = {}) {
    Interval base{};
    if (auto s = profile.support(opt.span))
        base = *s;
    else {
        const double half = opt.free_periods * 2.0 * pi / profile.omega0();
        base = {-half, half};
    }
    if (cover) {
        base.lo = std::min(base.lo, cover->lo);
        base.hi = std::max(base.hi, cover->hi);
    }
    if (profile.kind() == ProfileKind::Tabulated) {
        base.lo = std::max(base.lo, profile.samples().front().t);
        base.hi = std::min(base.hi, profile.samples().back().t);
    }
    const double h_max = 2.0 * pi / profile.max_omega() / opt.points_per_period;
    const auto steps = static_cast<std::size_t>(std::ceil(base.width() / h_max));
    return TimeGrid(base.lo, base.hi, std::max<std::size_t>(steps, 2));
}

/// Largest |omega^2 - omega0^2| at the two grid ends, relative to omega0^2.
inline double flatness_defect(const FrequencyProfile& profile, const TimeGrid& grid) {
    const double w02 = profile.omega0() * profile.omega0();
    return std::max(std::abs(profile.omega_squared(grid.t_min) - w02),
                    std::abs(profile.omega_squared(grid.t_max) - w02)) /
           w02;
}

inline constexpr double default_flatness_epsilon = 1e-10;

inline void require_flat_ends(const FrequencyProfile& profile, const TimeGrid& grid,
                              double epsilon = default_flatness_epsilon) {
    const double d = flatness_defect(profile, grid);
    if (d > epsilon)
        throw PreconditionError("drive is not asymptotically flat at the grid ends (relative defect " +
                                std::to_string(d) + ")");
}

} // namespace vacrad

#endif // VACRAD_PROFILES_HPP
