#ifndef VACRAD_JOST_HPP
#define VACRAD_JOST_HPP

// Numerical Jost solutions of  xi'' + omega^2(t) xi = 0  with
//     xi -> e^{-i omega0 t}                       (t -> -inf)
//     xi -> A e^{-i omega0 t} + B e^{+i omega0 t} (t -> +inf),
// the retarded impulse response built from them, and forced classical
// trajectories by superposition.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "vacrad/errors.hpp"
#include "vacrad/hermite.hpp"
#include "vacrad/ode.hpp"
#include "vacrad/profiles.hpp"
#include "vacrad/quadrature.hpp"

namespace vacrad {

/// Amplitudes (A, B) of e^{-i w t} and e^{+i w t} in a free solution with
/// value `xi` and derivative `xi_dot` at time t.
inline std::pair<cplx, cplx> decompose_free_wave(cplx xi, cplx xi_dot, double omega, double t) {
    const cplx I(0.0, 1.0);
    const cplx A = (I * omega * xi - xi_dot) / (2.0 * I * omega) * std::polar(1.0, omega * t);
    const cplx B = (I * omega * xi + xi_dot) / (2.0 * I * omega) * std::polar(1.0, -omega * t);
    return {A, B};
}

/// A Jost solution sampled on a uniform grid together with its scattering data.
struct JostSolution {
    FrequencyProfile profile;
    TimeGrid grid;
    std::vector<cplx> xi;
    std::vector<cplx> xi_dot;
    cplx A{1.0, 0.0};
    cplx B{0.0, 0.0};
    double wronskian_drift = 0.0; ///< max |W(t) - 2 i omega0| over the grid

    double omega0() const { return profile.omega0(); }

    /// (xi, xi') at arbitrary t inside the grid, quintic Hermite interpolation
    /// using xi'' = -omega^2 xi at the nodes.
    std::pair<cplx, cplx> state_at(double t) const {
        const double h = grid.step();
        const double slack = 1e-12 * std::max(1.0, std::abs(grid.t_max - grid.t_min));
        if (t < grid.t_min - slack || t > grid.t_max + slack)
            throw OutOfRangeError("time " + std::to_string(t) + " outside the Jost solution grid");
        auto k = static_cast<std::size_t>(std::clamp(std::floor((t - grid.t_min) / h), 0.0,
                                                     static_cast<double>(grid.n_steps - 1)));
        const double t0 = grid.at(k);
        const double s = std::clamp((t - t0) / h, 0.0, 1.0);
        if (s == 0.0) return {xi[k], xi_dot[k]};
        if (s == 1.0) return {xi[k + 1], xi_dot[k + 1]};
        const cplx a0 = -profile.omega_squared(t0) * xi[k];
        const cplx a1 = -profile.omega_squared(grid.at(k + 1)) * xi[k + 1];
        return detail::hermite5(xi[k], xi_dot[k], a0, xi[k + 1], xi_dot[k + 1], a1, h, s);
    }

    cplx xi_at(double t) const { return state_at(t).first; }
    cplx xi_dot_at(double t) const { return state_at(t).second; }
};

/// max over the grid of |xi conj(xi') - xi' conj(xi) - 2 i omega0|.
inline double wronskian_drift(const std::vector<cplx>& xi, const std::vector<cplx>& xi_dot, double omega0) {
    const cplx target(0.0, 2.0 * omega0);
    double drift = 0.0;
    for (std::size_t i = 0; i < xi.size(); ++i) {
        const cplx w = xi[i] * std::conj(xi_dot[i]) - xi_dot[i] * std::conj(xi[i]);
        drift = std::max(drift, std::abs(w - target));
    }
    return drift;
}

enum class Integrator { RungeKutta4, BulirschStoer };

struct JostOptions {
    Integrator integrator = Integrator::BulirschStoer;
    /// Relative local tolerance of the adaptive integrator. For the fixed-step
    /// scheme it bounds the a-posteriori defect (flux + Wronskian drift).
    double tol = 1e-12;
    std::size_t rk4_substeps = 1; ///< RK4 steps per grid interval
    double flatness_epsilon = default_flatness_epsilon;
};

namespace detail {

using JostState = Eigen::Matrix<cplx, 2, 1>;

inline auto jost_rhs(const FrequencyProfile& profile) {
    return [&profile](double t, const JostState& y) {
        JostState d;
        d << y[1], -profile.omega_squared(t) * y[0];
        return d;
    };
}

// Integrates over the grid nodes in the direction start -> end, starting from `y0`.
inline void integrate_over_grid(const FrequencyProfile& profile, const TimeGrid& grid, const JostOptions& opt,
                                JostState y, bool forward, std::vector<cplx>& xi, std::vector<cplx>& xi_dot) {
    const std::size_t n = grid.size();
    xi.assign(n, 0.0);
    xi_dot.assign(n, 0.0);
    const auto rhs = jost_rhs(profile);
    const ode::BulirschStoer<JostState> bs(ode::Tolerance{opt.tol, opt.tol * 1e-3}, grid.step() * 1e-9);
    std::size_t idx = forward ? 0 : n - 1;
    xi[idx] = y[0];
    xi_dot[idx] = y[1];
    for (std::size_t step = 1; step < n; ++step) {
        const std::size_t next = forward ? step : n - 1 - step;
        const double ta = grid.at(idx), tb = grid.at(next);
        if (opt.integrator == Integrator::RungeKutta4)
            y = ode::rk4_advance(rhs, ta, y, tb, opt.rk4_substeps);
        else
            y = bs.advance(rhs, ta, y, tb);
        xi[next] = y[0];
        xi_dot[next] = y[1];
        idx = next;
    }
}

} // namespace detail

/// Integrates the Jost solution from t_min, where xi = e^{-i omega0 t}, to t_max
/// and extracts (A, B) there by the exact 2x2 free-wave decomposition.
inline JostSolution solve_jost(const FrequencyProfile& profile, const TimeGrid& grid, const JostOptions& opt = {}) {
    require_flat_ends(profile, grid, opt.flatness_epsilon);
    const double w0 = profile.omega0();
    const cplx I(0.0, 1.0);

    JostSolution sol;
    sol.profile = profile;
    sol.grid = grid;

    detail::JostState y;
    y << std::polar(1.0, -w0 * grid.t_min), -I * w0 * std::polar(1.0, -w0 * grid.t_min);
    detail::integrate_over_grid(profile, grid, opt, y, true, sol.xi, sol.xi_dot);

    std::tie(sol.A, sol.B) = decompose_free_wave(sol.xi.back(), sol.xi_dot.back(), w0, grid.t_max);
    sol.wronskian_drift = wronskian_drift(sol.xi, sol.xi_dot, w0);

    if (opt.integrator == Integrator::RungeKutta4) {
        const double defect = std::abs(std::norm(sol.A) - std::norm(sol.B) - 1.0) +
                              sol.wronskian_drift / (2.0 * w0);
        if (defect > opt.tol)
            throw ConvergenceError("fixed-step Jost integration exceeds tolerance; refine the grid", defect);
    }
    return sol;
}

inline JostSolution solve_jost(const FrequencyProfile& profile, const TimeGrid& grid, double tol) {
    JostOptions opt;
    opt.tol = tol;
    return solve_jost(profile, grid, opt);
}

/// Integrates backwards from t_max starting from e^{-i omega0 t} and returns the
/// free-wave amplitudes found at t_min. For an even drive these equal (A*, B*).
inline std::pair<cplx, cplx> solve_backward_amplitudes(const FrequencyProfile& profile, const TimeGrid& grid,
                                                        const JostOptions& opt = {}) {
    require_flat_ends(profile, grid, opt.flatness_epsilon);
    const double w0 = profile.omega0();
    const cplx I(0.0, 1.0);
    detail::JostState y;
    y << std::polar(1.0, -w0 * grid.t_max), -I * w0 * std::polar(1.0, -w0 * grid.t_max);
    std::vector<cplx> xi, xi_dot;
    detail::integrate_over_grid(profile, grid, opt, y, false, xi, xi_dot);
    return decompose_free_wave(xi.front(), xi_dot.front(), w0, grid.t_min);
}

/// | |A|^2 - |B|^2 - 1 |
inline double scattering_flux_defect(const JostSolution& sol) {
    return std::abs(std::norm(sol.A) - std::norm(sol.B) - 1.0);
}

/// Retarded impulse response
///     g(t, tau) = theta(t - tau) [xi(tau) xi*(t) - xi*(tau) xi(t)] / (2 i omega0).
inline double impulse_response(const JostSolution& sol, double t, double tau) {
    const cplx xt = sol.xi_at(t);
    const cplx xtau = sol.xi_at(tau);
    if (t <= tau) return 0.0;
    const cplx bracket = xtau * std::conj(xt) - std::conj(xtau) * xt;
    return (bracket / cplx(0.0, 2.0 * sol.omega0())).real();
}

struct ClassicalTrajectory {
    std::vector<double> t;
    std::vector<double> x;
    std::vector<double> p;
};

/// Trajectory from (x0, p0) at t0 under the drive of `sol` and the force:
///     x(t) = xbar(t) + (1/m) \int_{t0}^t g(t, tau) F(tau) dtau,
/// where xbar is the free-flow combination of xi and xi*. Sampled at t0 and
/// at every grid node after it. The force integral is accumulated interval by
/// interval with 5-point Gauss-Legendre on the interpolated xi.
inline ClassicalTrajectory classical_trajectory(const JostSolution& sol, double x0, double p0, double t0,
                                                const ForceProfile& force) {
    const double m = force.mass();
    const double w0 = sol.omega0();
    const TimeGrid& g = sol.grid;
    if (t0 < g.t_min || t0 >= g.t_max) throw OutOfRangeError("t0 outside the Jost solution grid");
    if (auto s = force.support(); s && t0 > s->lo + 1e-12 * std::max(1.0, std::abs(s->lo)))
        throw PreconditionError("t0 must precede the force support");
    const double w02 = w0 * w0;
    if (std::abs(sol.profile.omega_squared(t0) - w02) > 1e-8 * w02)
        throw PreconditionError("t0 must precede the parametric drive");

    const cplx I(0.0, 1.0);
    const cplx c0 = (x0 + I * p0 / (m * w0)) * std::polar(1.0, w0 * t0);

    static constexpr double gl_x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                       0.9061798459386640};
    static constexpr double gl_w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                       0.4786286704993665, 0.2369268850561891};

    ClassicalTrajectory traj;
    cplx accumulated = 0.0; // \int_{t0}^{t} xi(tau) F(tau) dtau
    auto record = [&](double t) {
        const auto [xi, xd] = sol.state_at(t);
        traj.t.push_back(t);
        traj.x.push_back((c0 * xi).real() + (std::conj(xi) * accumulated).imag() / (m * w0));
        traj.p.push_back(m * (c0 * xd).real() + (std::conj(xd) * accumulated).imag() / w0);
    };
    auto integrate_segment = [&](double a, double b) {
        if (force.is_null() || b <= a) return;
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        cplx s = 0.0;
        for (int i = 0; i < 5; ++i) {
            const double tau = mid + half * gl_x[i];
            s += gl_w[i] * sol.xi_at(tau) * force.value(tau);
        }
        accumulated += half * s;
    };

    record(t0);
    double prev = t0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double tk = g.at(k);
        if (tk <= t0) continue;
        // Subdivide so the force's own time scale is resolved.
        const auto pieces = static_cast<std::size_t>(std::ceil((tk - prev) / force.resolution_step()));
        const std::size_t np = std::max<std::size_t>(1, std::min<std::size_t>(pieces, 1000));
        for (std::size_t j = 0; j < np; ++j)
            integrate_segment(prev + (tk - prev) * j / np, prev + (tk - prev) * (j + 1) / np);
        record(tk);
        prev = tk;
    }
    return traj;
}

} // namespace vacrad

#endif // VACRAD_JOST_HPP
