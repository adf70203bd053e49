#ifndef VACRAD_SPECIAL_HPP
#define VACRAD_SPECIAL_HPP

// Special functions at complex argument: log-gamma, the Gauss hypergeometric
// function 2F1 and the Faddeeva function w(z) = exp(-z^2) erfc(-i z).

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>

#include "vacrad/errors.hpp"

namespace vacrad {

using cplx = std::complex<double>;

namespace detail {

inline bool is_nonpositive_integer(cplx z, double tol = 1e-14) {
    if (std::abs(z.imag()) > tol) return false;
    const double r = std::round(z.real());
    return r <= 0.0 && std::abs(z.real() - r) <= tol * std::max(1.0, std::abs(r));
}

// log sin(pi z), stable for large |Im z| where sin itself overflows.
// Only defined up to a multiple of 2 pi i, which is harmless after exp().
inline cplx log_sin_pi(cplx z) {
    constexpr double pi = std::numbers::pi;
    const cplx I(0.0, 1.0);
    const double y = z.imag();
    if (y > 1.0)
        return -I * pi * z + std::log(0.5 * I) + std::log(1.0 - std::exp(2.0 * I * pi * z));
    if (y < -1.0)
        return I * pi * z - std::log(2.0 * I) + std::log(1.0 - std::exp(-2.0 * I * pi * z));
    return std::log(std::sin(pi * z));
}

} // namespace detail

/// Principal-sheet-agnostic log Gamma(z) (imaginary part modulo 2 pi).
/// Lanczos approximation (g = 7, 9 terms) with reflection for Re z < 1/2.
inline cplx log_gamma(cplx z) {
    constexpr double pi = std::numbers::pi;
    static constexpr std::array<double, 9> p = {
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
    if (detail::is_nonpositive_integer(z)) throw DomainError("Gamma pole at non-positive integer");
    if (z.real() < 0.5) return std::log(pi) - detail::log_sin_pi(z) - log_gamma(1.0 - z);
    z -= 1.0;
    cplx x = p[0];
    for (std::size_t i = 1; i < p.size(); ++i) x += p[i] / (z + static_cast<double>(i));
    const cplx t = z + 7.5;
    return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

inline cplx gamma(cplx z) { return std::exp(log_gamma(z)); }

namespace detail {

// prod Gamma(num) / prod Gamma(den); a pole in the denominator yields zero.
inline cplx gamma_ratio(std::initializer_list<cplx> num, std::initializer_list<cplx> den) {
    for (const cplx& d : den)
        if (is_nonpositive_integer(d)) return 0.0;
    cplx lg = 0.0;
    for (const cplx& n : num) lg += log_gamma(n);
    for (const cplx& d : den) lg -= log_gamma(d);
    return std::exp(lg);
}

inline constexpr std::size_t hyp2f1_max_terms = 100000;

inline cplx hyp2f1_series(cplx a, cplx b, cplx c, cplx z) {
    cplx term = 1.0;
    cplx sum = 1.0;
    int quiet = 0;
    for (std::size_t k = 0; k < hyp2f1_max_terms; ++k) {
        const double kk = static_cast<double>(k);
        term *= (a + kk) * (b + kk) / ((c + kk) * (kk + 1.0)) * z;
        sum += term;
        if (term == 0.0) return sum; // terminating polynomial
        if (std::abs(term) <= 1e-16 * std::abs(sum)) {
            if (++quiet == 2) return sum;
        } else {
            quiet = 0;
        }
    }
    throw ConvergenceError("2F1 power series did not converge", std::abs(term / sum));
}

inline bool near_integer(cplx d, double tol = 1e-9) {
    return std::abs(d.imag()) < tol && std::abs(d.real() - std::round(d.real())) < tol;
}

} // namespace detail

/// Gauss hypergeometric function 2F1(a, b; c; z) for |z| <= 1, with the
/// complement w = 1 - z supplied separately so that arguments close to one
/// keep full relative precision.
///
/// Power series for |z| <= 1/2; the z -> 1 - z connection formula when w is
/// smaller than z; direct summation otherwise.
inline cplx hyp2f1(cplx a, cplx b, cplx c, cplx z, cplx w) {
    if (detail::is_nonpositive_integer(c))
        throw DomainError("2F1 undefined for non-positive integer c");
    if (std::abs(z) <= 0.5) return detail::hyp2f1_series(a, b, c, z);
    if (std::abs(z) > 1.0 + 1e-15) throw DomainError("2F1 implemented only for |z| <= 1");

    const cplx d = c - a - b;
    const bool connect = std::abs(w) < 1.0 && std::abs(w) <= std::abs(z) && !detail::near_integer(d);
    if (!connect) {
        if (std::abs(z) < 1.0) return detail::hyp2f1_series(a, b, c, z);
        if (d.real() > 0.0)
            return detail::gamma_ratio({c, d}, {c - a, c - b}); // Gauss summation at z = 1
        throw DomainError("2F1 diverges at z = 1 for Re(c - a - b) <= 0");
    }

    const cplx g1 = detail::gamma_ratio({c, d}, {c - a, c - b});
    const cplx g2 = detail::gamma_ratio({c, -d}, {a, b});
    cplx first = 0.0;
    if (g1 != 0.0) first = g1 * detail::hyp2f1_series(a, b, 1.0 - d, w);
    cplx second = 0.0;
    if (g2 != 0.0) {
        if (w == 0.0) {
            if (d.real() <= 0.0) throw DomainError("2F1 diverges at z = 1 for Re(c - a - b) <= 0");
        } else {
            second = g2 * std::exp(d * std::log(w)) * detail::hyp2f1_series(c - a, c - b, 1.0 + d, w);
        }
    }
    return first + second;
}

inline cplx hyp2f1(cplx a, cplx b, cplx c, cplx z) { return hyp2f1(a, b, c, z, 1.0 - z); }

namespace detail {

// Coefficients of Weideman's rational expansion of w(z) in the upper half plane.
template <std::size_t N>
struct FaddeevaCoefficients {
    double L;
    std::array<double, N> a; // a[n-1] multiplies Z^(n-1)

    FaddeevaCoefficients() {
        constexpr double pi = std::numbers::pi;
        constexpr int M = 2 * static_cast<int>(N);
        L = std::sqrt(static_cast<double>(N) / std::sqrt(2.0));
        std::array<double, 2 * M> f{};
        for (int k = -M + 1; k <= M - 1; ++k) {
            const double t = L * std::tan(0.5 * k * pi / M);
            f[static_cast<std::size_t>(k + M)] = std::exp(-t * t) * (L * L + t * t);
        }
        for (std::size_t n = 1; n <= N; ++n) {
            double s = 0.0;
            for (int k = -M + 1; k <= M - 1; ++k)
                s += f[static_cast<std::size_t>(k + M)] * std::cos(pi * static_cast<double>(n) * k / M);
            a[n - 1] = s / (2.0 * M);
        }
    }
};

} // namespace detail

/// Faddeeva function w(z) = exp(-z^2) erfc(-i z).
inline cplx faddeeva_w(cplx z) {
    constexpr double inv_sqrt_pi = 0.56418958354775628695;
    static const detail::FaddeevaCoefficients<36> coef;
    const cplx I(0.0, 1.0);
    if (z.imag() < 0.0) return 2.0 * std::exp(-z * z) - faddeeva_w(-z);
    const cplx denom = coef.L - I * z;
    const cplx Z = (coef.L + I * z) / denom;
    cplx p = coef.a.back();
    for (std::size_t n = coef.a.size() - 1; n-- > 0;) p = p * Z + coef.a[n];
    return 2.0 * p / (denom * denom) + inv_sqrt_pi / denom;
}

} // namespace vacrad

#endif // VACRAD_SPECIAL_HPP
