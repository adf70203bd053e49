#ifndef VACRAD_QUADRATURE_HPP
#define VACRAD_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "vacrad/errors.hpp"
#include "vacrad/profiles.hpp"

namespace vacrad::quad {

/// Composite Simpson rule over equally spaced values (even interval count).
template <class T>
T simpson(const std::vector<T>& v, double h) {
    const std::size_t n = v.size() - 1;
    if (v.size() < 3 || n % 2 != 0) throw DomainError("Simpson rule needs an even number of intervals");
    T odd{}, even{};
    for (std::size_t i = 1; i < n; i += 2) odd += v[i];
    for (std::size_t i = 2; i < n; i += 2) even += v[i];
    return (h / 3.0) * (v.front() + v.back() + 4.0 * odd + 2.0 * even);
}

/// Adaptive Gauss-Kronrod (61 points) with its error estimate and L1 norm.
struct QuadratureResult {
    double value;
    double error;
    double l1;
};

template <class F>
QuadratureResult gauss_kronrod(F&& f, double a, double b, double tol, unsigned max_depth) {
    QuadratureResult r{0.0, 0.0, 0.0};
    r.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, max_depth, tol, &r.error,
                                                                             &r.l1);
    return r;
}

inline bool accepted(double value, double err, double l1, double tol) {
    return std::isfinite(value) && err <= 100.0 * tol * l1 + 1e-300;
}

/// Adaptive Gauss-Kronrod (61 points) for real integrands.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-12, unsigned max_depth = 20) {
    const auto r = gauss_kronrod(f, a, b, tol, max_depth);
    if (!accepted(r.value, r.error, r.l1, tol)) throw ConvergenceError("Gauss-Kronrod quadrature did not converge", r.error);
    return r.value;
}

/// Complex Gauss-Kronrod pieces summed without an acceptance test.
struct ComplexQuadrature {
    cplx value{0.0, 0.0};
    double error = 0.0;
    double l1 = 0.0;

    void add(const ComplexQuadrature& o) {
        value += o.value;
        error += o.error;
        l1 += o.l1;
    }

    bool accepted(double tol) const {
        return std::isfinite(value.real()) && std::isfinite(value.imag()) && error <= 100.0 * tol * l1 + 1e-300;
    }
};

template <class F>
ComplexQuadrature gauss_kronrod_complex(F&& f, double a, double b, double tol, unsigned max_depth) {
    const auto re = gauss_kronrod([&](double x) { return std::real(f(x)); }, a, b, tol, max_depth);
    const auto im = gauss_kronrod([&](double x) { return std::imag(f(x)); }, a, b, tol, max_depth);
    return {{re.value, im.value}, re.error + im.error, re.l1 + im.l1};
}

template <class F>
ComplexQuadrature panels_unchecked(F&& f, double a, double b, double max_panel, double tol, unsigned max_depth) {
    ComplexQuadrature total;
    if (!(b > a)) return total;
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / max_panel)));
    for (std::size_t i = 0; i < n; ++i)
        total.add(gauss_kronrod_complex(f, a + (b - a) * i / n, a + (b - a) * (i + 1) / n, tol, max_depth));
    return total;
}

/// Adaptive Gauss-Kronrod for complex integrands; the accuracy test uses the
/// combined L1 norm of both parts.
template <class F>
cplx integrate_complex(F&& f, double a, double b, double tol = 1e-12, unsigned max_depth = 20) {
    const auto r = gauss_kronrod_complex(f, a, b, tol, max_depth);
    if (!r.accepted(tol)) throw ConvergenceError("Gauss-Kronrod quadrature did not converge", r.error);
    return r.value;
}

/// \int_a^b f split into panels no wider than `max_panel`. Accuracy is judged
/// on the summed error against the L1 norm over the whole range.
template <class F>
cplx integrate_panels(F&& f, double a, double b, double max_panel, double tol = 1e-12, unsigned max_depth = 20) {
    const auto r = panels_unchecked(f, a, b, max_panel, tol, max_depth);
    if (!r.accepted(tol)) throw ConvergenceError("Gauss-Kronrod quadrature did not converge", r.error);
    return r.value;
}

/// \int f over consecutive intervals [nodes[i], nodes[i+1]], for integrands
/// that are smooth between the nodes but kinked at them (linear interpolants).
template <class F>
cplx integrate_nodes(F&& f, const std::vector<double>& nodes, double tol = 1e-12) {
    cplx total = 0.0;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        if (!(nodes[i] > nodes[i - 1])) continue;
        const auto re = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            [&](double x) { return std::real(f(x)); }, nodes[i - 1], nodes[i], 3, tol);
        const auto im = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            [&](double x) { return std::imag(f(x)); }, nodes[i - 1], nodes[i], 3, tol);
        total += cplx(re, im);
    }
    return total;
}

/// Sample times inside (lo, hi) with lo and hi added, split further so that
/// no interval exceeds `max_step`.
inline std::vector<double> sample_nodes(const std::vector<Sample>& samples, double lo, double hi, double max_step) {
    std::vector<double> base{lo};
    for (const auto& s : samples)
        if (s.t > lo && s.t < hi) base.push_back(s.t);
    base.push_back(hi);
    std::vector<double> out{lo};
    for (std::size_t i = 1; i < base.size(); ++i) {
        const double a = base[i - 1], b = base[i];
        const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / max_step)));
        for (std::size_t k = 1; k <= n; ++k) out.push_back(k == n ? b : a + (b - a) * k / n);
    }
    return out;
}

/// Principal value of \int_a^b g over an integrand with simple poles at
/// `poles` (strictly inside (a, b)). Around each pole a symmetric panel of
/// half-width `halfwidth` is folded, g(p + x) + g(p - x), which cancels the
/// odd singular part; the remainder is integrated with Gauss-Kronrod on
/// panels no wider than `max_panel`. The folded integrand is smooth but loses
/// digits to cancellation close to the pole: bisection would only move nodes
/// towards it, so that panel gets a single refinement and the overall
/// tolerance is at least 1e-10.
template <class F>
cplx principal_value(F&& g, double a, double b, std::vector<double> poles, double halfwidth,
                     double tol = 1e-12, double max_panel = INFINITY) {
    std::sort(poles.begin(), poles.end());
    for (std::size_t i = 0; i < poles.size(); ++i) {
        if (!(poles[i] > a && poles[i] < b)) throw DomainError("pole outside the integration range");
        double room = std::min(poles[i] - a, b - poles[i]);
        if (i > 0) room = std::min(room, 0.5 * (poles[i] - poles[i - 1]));
        if (i + 1 < poles.size()) room = std::min(room, 0.5 * (poles[i + 1] - poles[i]));
        halfwidth = std::min(halfwidth, room);
    }
    if (!(halfwidth > 0.0)) throw DomainError("principal-value panel width must be positive");

    const double fold_tol = std::max(tol, 1e-10);
    ComplexQuadrature total;
    double lo = a;
    for (double p : poles) {
        total.add(panels_unchecked(g, lo, p - halfwidth, max_panel, tol, 20));
        total.add(panels_unchecked([&](double x) { return g(p + x) + g(p - x); }, 0.0, halfwidth, max_panel,
                                   fold_tol, 1));
        lo = p + halfwidth;
    }
    total.add(panels_unchecked(g, lo, b, max_panel, tol, 20));
    if (!total.accepted(fold_tol))
        throw ConvergenceError("principal-value quadrature did not converge", total.error);
    return total.value;
}

/// Result of a force-weighted quadrature.
struct ForceIntegral {
    cplx value;
    double error_estimate;
};

/// \int dtau F(tau) kernel(tau) over the support of `force`, using composite
/// Simpson on the nodes of `grid` refined by an integer factor so that the
/// force's own time scale is resolved. The estimate |S_h - S_2h| / 15 must be
/// below rtol times \int |F kernel|; otherwise the sampling is refined.
template <class Kernel>
ForceIntegral integrate_against_force(const Kernel& kernel, const ForceProfile& force, const TimeGrid& grid,
                                      double rtol = 1e-9, int max_refinements = 6) {
    const auto supp = force.support();
    if (!supp) return {0.0, 0.0};
    if (!grid.covers(*supp)) throw PreconditionError("time grid does not cover the force support");

    const double hg = grid.step();
    auto lo_node = static_cast<std::size_t>(std::floor((supp->lo - grid.t_min) / hg));
    auto hi_node = std::min(grid.n_steps, static_cast<std::size_t>(std::ceil((supp->hi - grid.t_min) / hg)));
    if (hi_node <= lo_node) hi_node = std::min(grid.n_steps, lo_node + 1);

    std::size_t sub = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(hg / force.resolution_step())));
    if (sub > 1 && sub % 2 != 0) ++sub;

    double last_err = 0.0;
    for (int attempt = 0; attempt <= max_refinements; ++attempt, sub *= 2) {
        std::size_t lo = lo_node, hi = hi_node;
        // Interval count divisible by four so the half-resolution Simpson also applies.
        while (((hi - lo) * sub) % 4 != 0) {
            if (hi < grid.n_steps) ++hi;
            else if (lo > 0) --lo;
            else break;
        }
        const std::size_t n = (hi - lo) * sub;
        if (n % 4 != 0) throw PreconditionError("time grid too short for the force quadrature");
        const double t_lo = grid.at(lo);
        const double h = hg / static_cast<double>(sub);

        std::vector<cplx> v(n + 1);
        std::vector<double> mag(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            const double t = (i % sub == 0) ? grid.at(lo + i / sub) : t_lo + static_cast<double>(i) * h;
            const cplx k = kernel(t);
            const double fv = force.value(t);
            v[i] = fv * k;
            mag[i] = std::abs(fv) * std::abs(k);
        }
        std::vector<cplx> coarse(n / 2 + 1);
        for (std::size_t i = 0; i <= n / 2; ++i) coarse[i] = v[2 * i];

        const cplx fine = simpson(v, h);
        const cplx rough = simpson(coarse, 2.0 * h);
        const double scale = simpson(mag, h);
        last_err = std::abs(fine - rough) / 15.0;
        if (last_err <= rtol * scale + 1e-300) return {fine, last_err};
    }
    throw ConvergenceError("force quadrature did not converge", last_err);
}

} // namespace vacrad::quad

#endif // VACRAD_QUADRATURE_HPP
