#ifndef VACRAD_APPROXIMATIONS_HPP
#define VACRAD_APPROXIMATIONS_HPP

// Asymptotic regimes of the driven oscillator: first-order Born, abrupt
// (delta-function) drive, and the adiabatic limit with Stokes smoothing.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <utility>

#include "vacrad/errors.hpp"
#include "vacrad/profiles.hpp"
#include "vacrad/quadrature.hpp"
#include "vacrad/special.hpp"

namespace vacrad {

namespace detail {

inline cplx displacement_prefactor(double omega, double mass, double t) {
    return cplx(0.0, 1.0) * std::polar(1.0, -omega * t) / std::sqrt(2.0 * mass * omega);
}

// Integration window carrying the drive, clipped at +-40 T for sech^2 bumps.
inline Interval drive_window(const FrequencyProfile& p) {
    if (p.kind() == ProfileKind::SechBump) return p.support(40.0).value();
    if (p.kind() == ProfileKind::Tabulated) return p.support().value();
    return {0.0, 0.0};
}

inline double drive_panel(const FrequencyProfile& p) {
    const double period = 2.0 * pi / p.max_omega();
    if (p.kind() == ProfileKind::SechBump) return std::min(p.timescale(), period);
    return period;
}

// \int_lo^hi f for integrands carrying the drive; tabulated drives are
// integrated sample interval by sample interval.
template <class F>
cplx drive_integral(const FrequencyProfile& p, F&& f, double lo, double hi) {
    if (p.kind() == ProfileKind::Tabulated)
        return quad::integrate_nodes(f, quad::sample_nodes(p.samples(), lo, hi, drive_panel(p)));
    return quad::integrate_panels(f, lo, hi, drive_panel(p));
}

// \int_lo^hi F(t) sin(w t) dt; tabulated forces go sample interval by sample interval.
inline double force_sine_integral(double omega0, const ForceProfile& force, double lo, double hi) {
    if (hi <= lo) return 0.0;
    const auto f = [&](double t) { return cplx(force.value(t) * std::sin(omega0 * t), 0.0); };
    const double panel = std::min(2.0 * pi / omega0, 20.0 * force.resolution_step());
    if (force.kind() == ForceKind::Tabulated)
        return quad::integrate_nodes(f, quad::sample_nodes(force.samples(), lo, hi, 0.25 * panel)).real();
    return quad::integrate_panels(f, lo, hi, panel).real();
}

} // namespace detail

// ---------------------------------------------------------------------------
// Born approximation
// ---------------------------------------------------------------------------

/// First-order Born solution
///     xi(t) = e^{-i w t} - \int_{-inf}^t (1/w) sin[w (t - tau)] [omega^2(tau) - w^2] e^{-i w tau} dtau.
inline cplx born_xi(const FrequencyProfile& profile, double t) {
    const double w = profile.omega0();
    const cplx free = std::polar(1.0, -w * t);
    if (profile.kind() == ProfileKind::Constant) return free;
    const Interval win = detail::drive_window(profile);
    const double hi = std::min(t, win.hi);
    if (hi <= win.lo) return free;
    // sin[w(t - tau)] = Im e^{i w (t - tau)}: split into the two exponentials.
    const auto d = [&](double tau) { return profile.perturbation(tau); };
    const cplx c_plus = detail::drive_integral(
        profile, [&](double tau) { return d(tau) * std::polar(1.0, -2.0 * w * tau); }, win.lo, hi);
    const double c_zero =
        detail::drive_integral(profile, [&](double tau) { return cplx(d(tau), 0.0); }, win.lo, hi).real();
    // sin[w(t-tau)] e^{-i w tau} = (e^{i w t} e^{-2 i w tau} - e^{-i w t}) / (2i)
    const cplx integral = (std::polar(1.0, w * t) * c_plus - std::polar(1.0, -w * t) * c_zero) / cplx(0.0, 2.0);
    return free - integral / w;
}

/// Born scattering coefficients
///     A = 1 - (i / 2w) \int [omega^2 - w^2],  B = (i / 2w) \int [omega^2 - w^2] e^{-2 i w tau};
/// closed forms for the sech^2 bump.
inline std::pair<cplx, cplx> born_coefficients(const FrequencyProfile& profile) {
    const cplx I(0.0, 1.0);
    const double w = profile.omega0();
    switch (profile.kind()) {
    case ProfileKind::Constant:
        return {1.0, 0.0};
    case ProfileKind::SechBump: {
        const double T = profile.timescale();
        const double k = profile.signed_amplitude_squared();
        const double x = pi * w * T;
        const cplx B = x > 700.0 ? cplx(0.0) : I * pi * k * T * T / std::sinh(x);
        return {1.0 - I * k * T / w, B};
    }
    case ProfileKind::Tabulated: {
        const Interval win = detail::drive_window(profile);
        const double c0 =
            detail::drive_integral(profile, [&](double s) { return cplx(profile.perturbation(s), 0.0); }, win.lo,
                                   win.hi)
                .real();
        const cplx c2 = detail::drive_integral(
            profile, [&](double s) { return profile.perturbation(s) * std::polar(1.0, -2.0 * w * s); }, win.lo,
            win.hi);
        return {1.0 - I * c0 / (2.0 * w), I * c2 / (2.0 * w)};
    }
    }
    return {1.0, 0.0};
}

/// Response function of the broadband Born displacement for the sech^2 bump,
///     R(nu) = pi (+-Omega^2) T^2 / { (w - nu) sinh[pi (w + nu) T / 2] },
/// singular at nu = +-w; the displacement takes its principal value.
inline double born_response(const FrequencyProfile& profile, double nu) {
    if (profile.kind() == ProfileKind::Constant) return 0.0;
    if (profile.kind() != ProfileKind::SechBump) throw DomainError("response function needs a sech^2 profile");
    const double w = profile.omega0(), T = profile.timescale();
    return pi * profile.signed_amplitude_squared() * T * T / ((w - nu) * std::sinh(pi * (w + nu) * T / 2.0));
}

struct BornOptions {
    double pv_halfwidth = 0.0; ///< folded panel half-width around each pole; 0 picks 0.5 w
    double tol = 1e-11;
};

struct BornResult {
    cplx A;
    cplx B;
    cplx alpha;
    std::function<double(double)> response;
};

/// Born displacement at time t:
///     alpha = (i e^{-i w t} / sqrt(2 m w)) { A F(w) - B* F*(w) - (A - 1) F(w) / 2 - B F*(w) / 2
///             - PV \int dnu/2pi F*(nu) R(nu) },
/// with F(nu) = e^{i nu t_f} f~(nu) the transform of the uncentred force.
inline BornResult born_analysis(const FrequencyProfile& profile, const ForceProfile& force, double t,
                                const BornOptions& opt = {}) {
    if (profile.kind() == ProfileKind::Tabulated) throw DomainError("Born displacement needs a sech^2 profile");
    BornResult res;
    std::tie(res.A, res.B) = born_coefficients(profile);
    res.response = [profile](double nu) { return born_response(profile, nu); };
    if (force.is_null()) {
        res.alpha = 0.0;
        return res;
    }
    const double w = profile.omega0();
    const double tf = force.center();
    const auto Ft = [&](double nu) { return std::polar(1.0, nu * tf) * force_fourier(force, nu); };
    const cplx Fw = Ft(w);
    cplx bracket = res.A * Fw - std::conj(res.B) * std::conj(Fw) - 0.5 * (res.A - 1.0) * Fw -
                   0.5 * res.B * std::conj(Fw);
    if (profile.kind() == ProfileKind::SechBump) {
        const double T = profile.timescale();
        const double L = w + 40.0 / T;
        double scale = std::min(1.0 / T, 2.0 * pi / (std::abs(tf) + force.width()));
        if (force.kind() == ForceKind::GaussCos) scale = std::min(scale, 1.0 / force.width());
        const double half = opt.pv_halfwidth > 0.0 ? opt.pv_halfwidth : 0.5 * w;
        const auto g = [&](double nu) { return std::conj(Ft(nu)) * born_response(profile, nu) / (2.0 * pi); };
        bracket -= quad::principal_value(g, -L, L, {-w, w}, half, opt.tol, scale);
    }
    res.alpha = detail::displacement_prefactor(w, force.mass(), t) * bracket;
    return res;
}

inline cplx born_displacement(const FrequencyProfile& profile, const ForceProfile& force, double t,
                              const BornOptions& opt = {}) {
    return born_analysis(profile, force, t, opt).alpha;
}

// ---------------------------------------------------------------------------
// Abrupt limit: omega^2 - w^2 -> 2 Omega^2 T delta(t)
// ---------------------------------------------------------------------------

/// A = 1 - i c, B = i c with c = Omega^2 T / w.
inline std::pair<cplx, cplx> abrupt_coefficients(double omega0, double Omega2T) {
    if (!(omega0 > 0.0)) throw DomainError("omega0 must be positive");
    const double c = Omega2T / omega0;
    return {cplx(1.0, -c), cplx(0.0, c)};
}

/// e^{-i w t} for t < 0, e^{-i w t} - (2 Omega^2 T / w) sin(w t) for t > 0.
inline cplx abrupt_xi(double omega0, double Omega2T, double t) {
    const cplx e = std::polar(1.0, -omega0 * t);
    if (t <= 0.0) return e;
    return e - 2.0 * Omega2T / omega0 * std::sin(omega0 * t);
}

inline cplx abrupt_xi_dot(double omega0, double Omega2T, double t) {
    const cplx I(0.0, 1.0);
    const cplx e = -I * omega0 * std::polar(1.0, -omega0 * t);
    if (t <= 0.0) return e;
    return e - 2.0 * Omega2T * std::cos(omega0 * t);
}

namespace detail {

// \int_{-t_f}^inf e^{-s^2/T2^2} e^{i kappa s} ds
inline cplx gaussian_half_transform(double t_f, double T2, double kappa) {
    const cplx I(0.0, 1.0);
    const double x0 = -t_f / T2;
    const double b = kappa * T2;
    const double k = T2 * std::sqrt(pi) / 2.0;
    const cplx phase = std::exp(cplx(-x0 * x0, x0 * b));
    if (x0 >= 0.0) return k * phase * faddeeva_w(cplx(b / 2.0, x0));
    return k * (2.0 * std::exp(-b * b / 4.0) - phase * faddeeva_w(cplx(-b / 2.0, -x0)));
}

} // namespace detail

/// I = \int_0^inf dt F(t) sin(w t); complex error functions for GaussCos,
/// Gauss-Kronrod quadrature otherwise.
inline double abrupt_integral(double omega0, const ForceProfile& force) {
    switch (force.kind()) {
    case ForceKind::Null:
        return 0.0;
    case ForceKind::GaussCos: {
        const double tf = force.center(), T2 = force.width(), wf = force.omega_f();
        const cplx J = detail::gaussian_half_transform(tf, T2, omega0 + wf) +
                       detail::gaussian_half_transform(tf, T2, omega0 - wf);
        return (std::polar(1.0, omega0 * tf) * (0.5 * force.amplitude()) * J).imag();
    }
    case ForceKind::Tabulated: {
        const Interval s = *force.support();
        return detail::force_sine_integral(omega0, force, std::max(0.0, s.lo), s.hi);
    }
    }
    return 0.0;
}

/// Quadrature reference for abrupt_integral over [max(0, t_f - 8 T2), t_f + 8 T2].
inline double abrupt_integral_quadrature(double omega0, const ForceProfile& force) {
    const auto s = force.support();
    if (!s) return 0.0;
    return detail::force_sine_integral(omega0, force, std::max(0.0, s->lo), s->hi);
}

/// Which time enters the phase inside Im[...] of the abrupt displacement.
enum class AbruptPhase {
    ForceCenter, ///< e^{-i w t_f}
    Observation  ///< e^{-i w t}, the alternative literal reading
};

/// alpha = (i e^{-i w t} / sqrt(2 m w)) [f~(w) e^{i w t_f} - (2 Omega^2 T / w) { I + Im[f~*(w) e^{-i w t_f}] }]
inline cplx abrupt_displacement(double omega0, double Omega2T, const ForceProfile& force, double t,
                                AbruptPhase reading = AbruptPhase::ForceCenter) {
    if (force.is_null()) return 0.0;
    const double tf = force.center();
    const cplx fw = force_fourier(force, omega0);
    const double phase_time = reading == AbruptPhase::ForceCenter ? tf : t;
    const double inner = abrupt_integral(omega0, force) + (std::conj(fw) * std::polar(1.0, -omega0 * phase_time)).imag();
    const cplx bracket = fw * std::polar(1.0, omega0 * tf) - 2.0 * Omega2T / omega0 * inner;
    return detail::displacement_prefactor(omega0, force.mass(), t) * bracket;
}

// ---------------------------------------------------------------------------
// Adiabatic limit: omega^2 = w^2 - Omega^2 sech^2(t/T), w T >> 1
// ---------------------------------------------------------------------------

/// Shape of the smoothed Stokes switch U(t).
enum class StokesSwitch {
    UnitStep, ///< (1 + Erf(t/T_S)) / 2, rising from zero to one
    RawErf    ///< Erf(t/T_S), from -1 to 1
};

struct AdiabaticParams {
    double omega0 = 1.0;
    double Omega = 0.0;
    double T = 1.0;
    StokesSwitch stokes = StokesSwitch::UnitStep;

    static AdiabaticParams from_profile(const FrequencyProfile& p, StokesSwitch sw = StokesSwitch::UnitStep) {
        if (p.kind() != ProfileKind::SechBump || p.sign() != BumpSign::Minus)
            throw DomainError("adiabatic limit needs the Minus-sign sech^2 profile");
        return {p.omega0(), p.amplitude(), p.timescale(), sw};
    }

    void validate() const {
        if (!(omega0 > 0.0) || !(T > 0.0) || !(Omega >= 0.0)) throw DomainError("invalid adiabatic parameters");
        if (!(Omega < omega0)) throw DomainError("adiabatic limit requires Omega < omega0");
    }

    double omega_eff() const { return std::sqrt(omega0 * omega0 - Omega * Omega); }
    /// w T g(Omega / w) = (pi / 2)(w - Omega) T
    double exponent() const { return 0.5 * pi * (omega0 - Omega) * T; }
    double g_value() const { return exponent() / (omega0 * T); }
    /// Stokes width T_S = w T g / (2 omega_eff)
    double stokes_time() const { return exponent() / (2.0 * omega_eff()); }

    double omega(double t) const {
        const double c = std::cosh(t / T);
        return std::sqrt(omega0 * omega0 - Omega * Omega / (c * c));
    }

    double stokes_switch(double t) const {
        const double e = std::erf(t / stokes_time());
        return stokes == StokesSwitch::UnitStep ? 0.5 * (1.0 + e) : e;
    }
};

/// |B| ~ exp(-w T g)
inline double adiabatic_B(const AdiabaticParams& p) {
    p.validate();
    return std::exp(-p.exponent());
}

namespace detail {

// \int_a^b [omega(tau) - w] dtau, clipped to |tau| <= 40 T.
inline double adiabatic_phase_defect(const AdiabaticParams& p, double a, double b) {
    const double cap = 40.0 * p.T;
    a = std::clamp(a, -cap, cap);
    b = std::clamp(b, -cap, cap);
    if (a == b) return 0.0;
    const double sgn = b > a ? 1.0 : -1.0;
    const auto f = [&](double tau) {
        const double c = std::cosh(tau / p.T);
        const double d = p.Omega * p.Omega / (c * c);
        return cplx(-d / (p.omega(tau) + p.omega0), 0.0);
    };
    return sgn * quad::integrate_panels(f, std::min(a, b), std::max(a, b), p.T).real();
}

} // namespace detail

/// WKB solution with the Stokes-smoothed reflected wave,
///     sqrt(w / omega(t)) e^{-i Delta} { e^{-i Phi(t)} + e^{-w T g} U(t) e^{+i Phi(t)} },
/// Phi(t) = \int_0^t omega, Delta = \int_{-inf}^0 (omega - w) so that xi -> e^{-i w t} at -inf.
inline cplx adiabatic_xi(const AdiabaticParams& p, double t) {
    p.validate();
    const double Phi = p.omega0 * t + detail::adiabatic_phase_defect(p, 0.0, t);
    const double Delta = detail::adiabatic_phase_defect(p, -40.0 * p.T, 0.0);
    const cplx incident = std::polar(1.0, -Phi);
    const cplx reflected = std::exp(-p.exponent()) * p.stokes_switch(t) * std::polar(1.0, Phi);
    return std::sqrt(p.omega0 / p.omega(t)) * std::polar(1.0, -Delta) * (incident + reflected);
}

/// Whether a force sits inside the window where the adiabatic displacement
/// formula is expected to hold: |t_f| < T and T2 below half of T_S and T.
inline bool adiabatic_window(const AdiabaticParams& p, const ForceProfile& force) {
    if (force.is_null()) return true;
    const double T2 = force.kind() == ForceKind::GaussCos ? force.width() : force.resolution_step();
    return std::abs(force.center()) < p.T && T2 < 0.5 * p.stokes_time() && T2 < 0.5 * p.T;
}

/// alpha = (i e^{-i w t - i Delta} / sqrt(2 m omega_eff)) [e^{i omega_eff t_f} f~(omega_eff)
///         - e^{-i omega_eff t_f} f~*(omega_eff) e^{-w T g} K(t_f / T_S)],
/// K = Erfc/2 for the unit-step switch and Erfc for the raw Erf switch; Delta as in adiabatic_xi.
inline cplx adiabatic_displacement(const AdiabaticParams& p, const ForceProfile& force, double t) {
    p.validate();
    if (force.is_null()) return 0.0;
    const double we = p.omega_eff();
    const double tf = force.center();
    const cplx fw = force_fourier(force, we);
    double k = std::erfc(tf / p.stokes_time());
    if (p.stokes == StokesSwitch::UnitStep) k *= 0.5;
    const cplx bracket =
        std::polar(1.0, we * tf) * fw - std::polar(1.0, -we * tf) * std::conj(fw) * std::exp(-p.exponent()) * k;
    const double Delta = detail::adiabatic_phase_defect(p, -40.0 * p.T, 0.0);
    return cplx(0.0, 1.0) * std::polar(1.0, -p.omega0 * t - Delta) / std::sqrt(2.0 * force.mass() * we) * bracket;
}

} // namespace vacrad

#endif // VACRAD_APPROXIMATIONS_HPP
