#ifndef VACRAD_EXACT_SECH_HPP
#define VACRAD_EXACT_SECH_HPP

// Closed-form Jost solution for omega^2(t) = omega0^2 +- Omega^2 sech^2(t/T).

#include <cmath>
#include <complex>
#include <utility>

#include "vacrad/errors.hpp"
#include "vacrad/jost.hpp"
#include "vacrad/profiles.hpp"
#include "vacrad/special.hpp"

namespace vacrad {

struct SechParams {
    double omega0 = 1.0;
    double Omega = 0.0;
    double T = 1.0;
    BumpSign sign = BumpSign::Plus;

    static SechParams from_profile(const FrequencyProfile& p) {
        if (p.kind() == ProfileKind::Constant) return {p.omega0(), 0.0, 1.0, BumpSign::Plus};
        if (p.kind() != ProfileKind::SechBump) throw DomainError("closed form needs a sech^2 profile");
        return {p.omega0(), p.amplitude(), p.timescale(), p.sign()};
    }

    void validate() const {
        if (!(omega0 > 0.0)) throw DomainError("omega0 must be positive");
        if (!(T > 0.0)) throw DomainError("T must be positive");
        if (!(Omega >= 0.0)) throw DomainError("Omega must be non-negative");
    }

    /// Root of s (s + 1) = +-Omega^2 T^2 with Re s >= -1/2; real for the Plus sign.
    cplx s() const {
        const double w = (sign == BumpSign::Plus ? 1.0 : -1.0) * 4.0 * Omega * Omega * T * T;
        return 0.5 * (std::sqrt(cplx(1.0 + w, 0.0)) - 1.0);
    }
};

/// s = (sqrt(1 + 4 Omega^2 T^2) - 1) / 2
inline double sech_s(double Omega, double T) { return 0.5 * (std::sqrt(1.0 + 4.0 * Omega * Omega * T * T) - 1.0); }

/// Exact scattering coefficients
///     A = Gamma(1 - i w T) Gamma(-i w T) / [Gamma(-i w T - s) Gamma(-i w T + s + 1)],
///     B = i sin(pi s) / sinh(pi w T).
inline std::pair<cplx, cplx> exact_coefficients(const SechParams& p) {
    p.validate();
    const cplx I(0.0, 1.0);
    const double wt = p.omega0 * p.T;
    const cplx s = p.s();
    const cplx A = detail::gamma_ratio({1.0 - I * wt, -I * wt}, {-I * wt - s, -I * wt + s + 1.0});
    cplx B;
    if (pi * wt < 300.0 && std::abs(s.imag()) < 100.0) {
        B = I * std::sin(pi * s) / std::sinh(pi * wt);
    } else {
        // log sinh(y) = y - ln 2 + log(1 - e^{-2y})
        const double log_sinh = pi * wt - std::log(2.0) + std::log1p(-std::exp(-2.0 * pi * wt));
        B = I * std::exp(detail::log_sin_pi(s) - log_sinh);
    }
    return {A, B};
}

namespace detail {

// Hypergeometric representation with x = t/T: value and derivative.
inline std::pair<cplx, cplx> exact_sech_state(const SechParams& p, double t) {
    const cplx I(0.0, 1.0);
    const double wt = p.omega0 * p.T;
    const double x = t / p.T;

    // Far tails: the free waves are exact to double precision.
    if (x < -25.0) {
        const cplx e = std::polar(1.0, -p.omega0 * t);
        return {e, -I * p.omega0 * e};
    }
    if (x > 25.0) {
        const auto [A, B] = exact_coefficients(p);
        const cplx em = std::polar(1.0, -p.omega0 * t), ep = std::conj(em);
        return {A * em + B * ep, -I * p.omega0 * (A * em - B * ep)};
    }

    const cplx s = p.s();
    const cplx a = -I * wt - s, b = -I * wt + s + 1.0, c = -I * wt + 1.0;
    const double ax = std::abs(x);
    const double e2 = std::exp(-2.0 * ax);
    double z, w;
    if (x >= 0.0) {
        z = 1.0 / (1.0 + e2);
        w = e2 / (1.0 + e2);
    } else {
        z = e2 / (1.0 + e2);
        w = 1.0 / (1.0 + e2);
    }
    const double eta = std::tanh(x);
    const double one_minus_eta2 = 4.0 * z * w;
    // ln((1 - eta^2) / 4)
    const double log_q = -2.0 * ax - 2.0 * std::log1p(e2);
    const cplx prefactor = std::exp(-I * (0.5 * wt) * log_q);

    const cplx F = hyp2f1(a, b, c, z, w);
    const cplx Fd = hyp2f1(a + 1.0, b + 1.0, c + 1.0, z, w);
    const cplx xi = prefactor * F;
    const cplx xi_dot = I * p.omega0 * eta * xi + prefactor * (a * b / c) * Fd * one_minus_eta2 / (2.0 * p.T);
    return {xi, xi_dot};
}

} // namespace detail

/// xi(t) = ((1 - eta^2)/4)^{-i w T / 2} 2F1(-i w T - s, -i w T + s + 1; -i w T + 1; (1 + eta)/2),
/// eta = tanh(t/T); normalised so that xi -> e^{-i w t} as t -> -inf.
inline cplx exact_xi(const SechParams& p, double t) {
    p.validate();
    return detail::exact_sech_state(p, t).first;
}

inline cplx exact_xi_dot(const SechParams& p, double t) {
    p.validate();
    return detail::exact_sech_state(p, t).second;
}

/// Exact solution sampled on a grid, packaged like a numerical one.
inline JostSolution exact_jost_solution(const FrequencyProfile& profile, const TimeGrid& grid) {
    const SechParams p = SechParams::from_profile(profile);
    p.validate();
    JostSolution sol;
    sol.profile = profile;
    sol.grid = grid;
    sol.xi.resize(grid.size());
    sol.xi_dot.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        std::tie(sol.xi[i], sol.xi_dot[i]) = detail::exact_sech_state(p, grid.at(i));
    std::tie(sol.A, sol.B) = exact_coefficients(p);
    sol.wronskian_drift = wronskian_drift(sol.xi, sol.xi_dot, p.omega0);
    return sol;
}

} // namespace vacrad

#endif // VACRAD_EXACT_SECH_HPP
