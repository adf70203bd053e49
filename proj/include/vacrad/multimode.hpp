#ifndef VACRAD_MULTIMODE_HPP
#define VACRAD_MULTIMODE_HPP

// n coupled modes
//     x_i'' + omega_i^2 x_i + sum_j Omega^2_ij(t) x_j = F_i(t) / m
// with matrix Jost solutions xi^mu_i(t) -> sqrt(w / omega_i) delta_i^mu e^{-i omega_i t} at t -> -inf.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "vacrad/concurrency.hpp"
#include "vacrad/errors.hpp"
#include "vacrad/hermite.hpp"
#include "vacrad/jost.hpp"
#include "vacrad/ode.hpp"
#include "vacrad/profiles.hpp"
#include "vacrad/quadrature.hpp"

namespace vacrad {

using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

/// One sech^2 term  weight * sech^2((t - center) / T)  added to Omega^2_ij and Omega^2_ji.
struct CouplingPulse {
    std::size_t i = 0;
    std::size_t j = 0;
    double weight = 0.0;
    double T = 1.0;
    double center = 0.0;
};

struct MultimodeSystem {
    std::vector<double> omegas;
    std::vector<CouplingPulse> pulses;
    std::vector<ForceProfile> forces; ///< one per mode; missing entries act as Null
    double mass = 1.0;
    std::optional<double> omega_ref;  ///< reference scale; defaults to min omega_i

    std::size_t n() const { return omegas.size(); }

    double reference() const {
        if (omega_ref) return *omega_ref;
        return *std::min_element(omegas.begin(), omegas.end());
    }

    void validate() const {
        if (omegas.empty()) throw DomainError("multimode system needs at least one mode");
        for (double w : omegas)
            if (!(w > 0.0)) throw DomainError("mode frequencies must be positive");
        if (omega_ref && !(*omega_ref > 0.0)) throw DomainError("reference frequency must be positive");
        if (!(mass > 0.0)) throw DomainError("mass must be positive");
        for (const auto& p : pulses) {
            if (p.i >= n() || p.j >= n()) throw DomainError("coupling pulse refers to a missing mode");
            if (!(p.T > 0.0)) throw DomainError("coupling pulse width must be positive");
        }
        if (forces.size() > n()) throw DomainError("more forces than modes");
    }

    /// Symmetric coupling matrix Omega^2_ij(t).
    Eigen::MatrixXd coupling(double t) const {
        Eigen::MatrixXd c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n()), static_cast<Eigen::Index>(n()));
        for (const auto& p : pulses) {
            const double ch = std::cosh((t - p.center) / p.T);
            const double v = p.weight / (ch * ch);
            const auto i = static_cast<Eigen::Index>(p.i), j = static_cast<Eigen::Index>(p.j);
            c(i, j) += v;
            if (i != j) c(j, i) += v;
        }
        return c;
    }

    /// Largest |Omega^2_ij| at the two ends of the grid.
    double end_coupling(const TimeGrid& g) const {
        return std::max(coupling(g.t_min).cwiseAbs().maxCoeff(), coupling(g.t_max).cwiseAbs().maxCoeff());
    }

    const ForceProfile& force(std::size_t i) const {
        static const ForceProfile none = ForceProfile::null();
        return i < forces.size() ? forces[i] : none;
    }

    /// [t_lo, t_hi] holding every pulse (+-span T) and every force support.
    Interval support(double span = 30.0) const {
        Interval s{INFINITY, -INFINITY};
        for (const auto& p : pulses) {
            s.lo = std::min(s.lo, p.center - span * p.T);
            s.hi = std::max(s.hi, p.center + span * p.T);
        }
        for (const auto& f : forces)
            if (auto fs = f.support()) {
                s.lo = std::min(s.lo, fs->lo);
                s.hi = std::max(s.hi, fs->hi);
            }
        if (!(s.lo < s.hi)) {
            const double half = 10.0 * 2.0 * pi / *std::min_element(omegas.begin(), omegas.end());
            s = {-half, half};
        }
        return s;
    }

    /// Uniform grid over support() with `points_per_period` samples per shortest period.
    TimeGrid default_grid(double span = 30.0, double points_per_period = 40.0) const {
        const Interval s = support(span);
        double wmax2 = 0.0;
        for (std::size_t i = 0; i < n(); ++i) wmax2 = std::max(wmax2, omegas[i] * omegas[i]);
        double cmax = 0.0;
        for (const auto& p : pulses) cmax += std::abs(p.weight);
        const double h = 2.0 * pi / std::sqrt(wmax2 + cmax) / points_per_period;
        return TimeGrid(s.lo, s.hi, std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(s.width() / h))));
    }
};

struct MultimodeJost {
    std::vector<double> omegas;
    double omega_ref = 1.0;
    TimeGrid grid;
    /// xi[mu](k, i): solution launched in mode mu, component i, grid node k.
    std::vector<MatrixXc> xi;
    std::vector<MatrixXc> xi_dot;
    MatrixXc A; ///< A(i, mu)
    MatrixXc B; ///< B(i, mu)
    MultimodeSystem system;

    std::size_t n() const { return omegas.size(); }

    /// Column vector xi^mu(t) (and its derivative) by quintic Hermite interpolation.
    std::pair<VectorXc, VectorXc> state_at(std::size_t mu, double t) const {
        const double h = grid.step();
        const double slack = 1e-12 * std::max(1.0, std::abs(grid.t_max - grid.t_min));
        if (t < grid.t_min - slack || t > grid.t_max + slack) throw OutOfRangeError("time outside the multimode grid");
        const auto k = static_cast<std::size_t>(
            std::clamp(std::floor((t - grid.t_min) / h), 0.0, static_cast<double>(grid.n_steps - 1)));
        const double t0 = grid.at(k), t1 = grid.at(k + 1);
        const double s = std::clamp((t - t0) / h, 0.0, 1.0);
        const auto ki = static_cast<Eigen::Index>(k);
        const VectorXc y0 = xi[mu].row(ki).transpose(), y1 = xi[mu].row(ki + 1).transpose();
        const VectorXc d0 = xi_dot[mu].row(ki).transpose(), d1 = xi_dot[mu].row(ki + 1).transpose();
        const VectorXc a0 = acceleration(t0, y0), a1 = acceleration(t1, y1);
        return detail::hermite5<VectorXc>(y0, d0, a0, y1, d1, a1, h, s);
    }

    VectorXc acceleration(double t, const VectorXc& y) const {
        VectorXc a = -(system.coupling(t).cast<cplx>() * y);
        for (std::size_t i = 0; i < n(); ++i)
            a[static_cast<Eigen::Index>(i)] -= omegas[i] * omegas[i] * y[static_cast<Eigen::Index>(i)];
        return a;
    }
};

struct MultimodeOptions {
    double tol = 1e-12;
    double flatness_epsilon = default_flatness_epsilon; ///< relative to omega_ref^2
    std::size_t threads = 1;
};

/// Integrates the n launched solutions and extracts A_i^mu, B_i^mu from
///     xi^mu_i -> sqrt(w / omega_i) (A_i^mu e^{-i omega_i t} + B_i^mu e^{+i omega_i t}) at t_max.
inline MultimodeJost solve_multimode_jost(const MultimodeSystem& sys, const TimeGrid& grid,
                                          const MultimodeOptions& opt = {}) {
    sys.validate();
    const std::size_t n = sys.n();
    const double w0 = sys.reference();
    if (sys.end_coupling(grid) > opt.flatness_epsilon * w0 * w0)
        throw PreconditionError("coupling does not vanish at the grid ends");

    MultimodeJost mj;
    mj.omegas = sys.omegas;
    mj.omega_ref = w0;
    mj.grid = grid;
    mj.system = sys;
    mj.xi.resize(n);
    mj.xi_dot.resize(n);
    mj.A = MatrixXc::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    mj.B = mj.A;

    const auto ni = static_cast<Eigen::Index>(n);
    const auto rhs = [&](double t, const VectorXc& y) {
        VectorXc d(2 * ni);
        d.head(ni) = y.tail(ni);
        d.tail(ni) = mj.acceleration(t, y.head(ni));
        return d;
    };
    const ode::BulirschStoer<VectorXc> bs(ode::Tolerance{opt.tol, opt.tol * 1e-3}, grid.step() * 1e-9);

    parallel_for(n, opt.threads, [&](std::size_t mu) {
        const auto m = static_cast<Eigen::Index>(mu);
        const double wm = sys.omegas[mu];
        const double norm = std::sqrt(w0 / wm);
        VectorXc y = VectorXc::Zero(2 * ni);
        y[m] = norm * std::polar(1.0, -wm * grid.t_min);
        y[ni + m] = cplx(0.0, -wm) * y[m];
        MatrixXc X(static_cast<Eigen::Index>(grid.size()), ni), Xd(static_cast<Eigen::Index>(grid.size()), ni);
        X.row(0) = y.head(ni).transpose();
        Xd.row(0) = y.tail(ni).transpose();
        for (std::size_t k = 1; k < grid.size(); ++k) {
            y = bs.advance(rhs, grid.at(k - 1), y, grid.at(k));
            X.row(static_cast<Eigen::Index>(k)) = y.head(ni).transpose();
            Xd.row(static_cast<Eigen::Index>(k)) = y.tail(ni).transpose();
        }
        for (std::size_t i = 0; i < n; ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            const double s = std::sqrt(w0 / sys.omegas[i]);
            const auto [a, b] = decompose_free_wave(y[ii] / s, y[ni + ii] / s, sys.omegas[i], grid.t_max);
            mj.A(ii, m) = a;
            mj.B(ii, m) = b;
        }
        mj.xi[mu] = std::move(X);
        mj.xi_dot[mu] = std::move(Xd);
    });
    return mj;
}

/// max_{mu,nu} | sum_i (A*_i^mu A_i^nu - B*_i^mu B_i^nu) - delta^{mu nu} |
inline double unitarity_defect(const MatrixXc& A, const MatrixXc& B) {
    const MatrixXc G = A.adjoint() * A - B.adjoint() * B;
    return (G - MatrixXc::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
}

inline double unitarity_defect(const MultimodeJost& mj) { return unitarity_defect(mj.A, mj.B); }

/// G_ij(t, tau) = theta(t - tau) (1 / 2 i w) sum_mu [xi^mu_j(tau) xi^mu*_i(t) - xi^mu*_j(tau) xi^mu_i(t)]
inline Eigen::MatrixXd multimode_green(const MultimodeJost& mj, double t, double tau) {
    const auto ni = static_cast<Eigen::Index>(mj.n());
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(ni, ni);
    MatrixXc acc = MatrixXc::Zero(ni, ni);
    for (std::size_t mu = 0; mu < mj.n(); ++mu) {
        const VectorXc xt = mj.state_at(mu, t).first;
        const VectorXc xtau = mj.state_at(mu, tau).first;
        acc += xt.conjugate() * xtau.transpose() - xt * xtau.adjoint();
    }
    if (t <= tau) return G;
    return (acc / cplx(0.0, 2.0 * mj.omega_ref)).real();
}

struct MultimodeEvolution {
    MatrixXc U;
    MatrixXc V;
    VectorXc alpha;
};

/// a_i(t) = sum_mu (U_i^mu a_mu + V_i^mu a_mu^dagger) + alpha_i with
///     U_i^mu = A_i^mu e^{-i omega_i t} e^{i omega_mu t0},  V_i^mu = B*_i^mu e^{-i omega_i t} e^{-i omega_mu t0},
///     alpha_i = (i e^{-i omega_i t} / sqrt(2 m w)) sum_{mu,j} \int [A_i^mu xi^mu*_j - B*_i^mu xi^mu_j] F_j.
inline MultimodeEvolution multimode_evolution(const MultimodeSystem& sys, const MultimodeJost& mj, double t0,
                                              double t, double rtol = 1e-10) {
    if (!(t0 < t)) throw PreconditionError("evolution requires t0 < t");
    const std::size_t n = mj.n();
    const auto ni = static_cast<Eigen::Index>(n);
    MultimodeEvolution ev;
    ev.U.resize(ni, ni);
    ev.V.resize(ni, ni);
    for (Eigen::Index i = 0; i < ni; ++i)
        for (Eigen::Index m = 0; m < ni; ++m) {
            const double wi = mj.omegas[static_cast<std::size_t>(i)], wm = mj.omegas[static_cast<std::size_t>(m)];
            ev.U(i, m) = mj.A(i, m) * std::polar(1.0, -wi * t + wm * t0);
            ev.V(i, m) = std::conj(mj.B(i, m)) * std::polar(1.0, -wi * t - wm * t0);
        }

    // Projections P^mu_j = \int xi^mu_j F_j over each force.
    MatrixXc P = MatrixXc::Zero(ni, ni); // P(mu, j)
    for (std::size_t j = 0; j < n; ++j) {
        const ForceProfile& f = sys.force(j);
        const auto supp = f.support();
        if (!supp) continue;
        if (supp->lo < t0 || supp->hi > t) throw PreconditionError("force support must lie within [t0, t]");
        for (std::size_t mu = 0; mu < n; ++mu) {
            const auto r = quad::integrate_against_force(
                [&](double tau) { return mj.state_at(mu, tau).first[static_cast<Eigen::Index>(j)]; }, f, mj.grid,
                rtol);
            P(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(j)) = r.value;
        }
    }
    ev.alpha = VectorXc::Zero(ni);
    const double pref = 1.0 / std::sqrt(2.0 * sys.mass * mj.omega_ref);
    for (Eigen::Index i = 0; i < ni; ++i) {
        cplx s = 0.0;
        for (Eigen::Index m = 0; m < ni; ++m)
            for (Eigen::Index j = 0; j < ni; ++j)
                s += mj.A(i, m) * std::conj(P(m, j)) - std::conj(mj.B(i, m)) * P(m, j);
        ev.alpha[i] = cplx(0.0, 1.0) * std::polar(1.0, -mj.omegas[static_cast<std::size_t>(i)] * t) * pref * s;
    }
    return ev;
}

/// Mean quanta per mode from vacuum: diag(V V^dagger) + |alpha|^2.
inline Eigen::VectorXd multimode_occupations(const MultimodeEvolution& ev) {
    const Eigen::VectorXd vv = (ev.V * ev.V.adjoint()).diagonal().real();
    return vv + ev.alpha.cwiseAbs2();
}

} // namespace vacrad

#endif // VACRAD_MULTIMODE_HPP
