#ifndef VACRAD_ODE_HPP
#define VACRAD_ODE_HPP

// Explicit one-step integrators for complex first-order systems y' = f(t, y).
// State types are Eigen column vectors.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include <Eigen/Core>

#include "vacrad/errors.hpp"

namespace vacrad::ode {

/// Classical fourth-order Runge-Kutta step.
template <class State, class Rhs>
State rk4_step(const Rhs& f, double t, const State& y, double h) {
    const State k1 = f(t, y);
    const State k2 = f(t + 0.5 * h, State(y + 0.5 * h * k1));
    const State k3 = f(t + 0.5 * h, State(y + 0.5 * h * k2));
    const State k4 = f(t + h, State(y + h * k3));
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// `substeps` equal RK4 steps from t0 to t1 (t1 < t0 integrates backwards).
template <class State, class Rhs>
State rk4_advance(const Rhs& f, double t0, const State& y0, double t1, std::size_t substeps) {
    const double h = (t1 - t0) / static_cast<double>(substeps);
    State y = y0;
    for (std::size_t i = 0; i < substeps; ++i) {
        const double t = (i + 1 == substeps) ? t1 - h : t0 + static_cast<double>(i) * h;
        y = rk4_step(f, t, y, h);
    }
    return y;
}

struct Tolerance {
    double rtol = 1e-13;
    double atol = 1e-15;
};

/// max_i |delta_i| / (atol + rtol * |y_i|)
template <class State>
double scaled_error(const State& delta, const State& y, const Tolerance& tol) {
    double e = 0.0;
    for (Eigen::Index i = 0; i < delta.size(); ++i)
        e = std::max(e, std::abs(delta[i]) / (tol.atol + tol.rtol * std::abs(y[i])));
    return e;
}

/// Extrapolated modified-midpoint (Bulirsch-Stoer) integration between two
/// fixed points. Each call lands exactly on the requested end time; intervals
/// that do not converge within the extrapolation table are halved.
template <class State>
class BulirschStoer {
public:
    static constexpr std::size_t kMaxColumns = 8;

    explicit BulirschStoer(Tolerance tol = {}, double h_min = 1e-12, std::size_t max_depth = 30)
        : tol_(tol), h_min_(h_min), max_depth_(max_depth) {}

    /// Integrates from (t0, y0) to t1. Returns the state at t1; `error_out`
    /// receives the largest scaled error estimate over accepted sub-intervals.
    template <class Rhs>
    State advance(const Rhs& f, double t0, const State& y0, double t1, double* error_out = nullptr) const {
        double worst = 0.0;
        State y = advance_recursive(f, t0, y0, t1, 0, worst);
        if (error_out) *error_out = worst;
        return y;
    }

    const Tolerance& tolerance() const { return tol_; }

private:
    template <class Rhs>
    State advance_recursive(const Rhs& f, double t0, const State& y0, double t1, std::size_t depth,
                            double& worst) const {
        double err = 0.0;
        State y;
        if (try_interval(f, t0, y0, t1, y, err)) {
            worst = std::max(worst, err);
            return y;
        }
        if (depth >= max_depth_ || std::abs(t1 - t0) < 2.0 * h_min_)
            throw ConvergenceError("Bulirsch-Stoer step size underflow near t = " + std::to_string(t0),
                                   err * tol_.rtol);
        const double tm = 0.5 * (t0 + t1);
        const State ym = advance_recursive(f, t0, y0, tm, depth + 1, worst);
        return advance_recursive(f, tm, ym, t1, depth + 1, worst);
    }

    template <class Rhs>
    static State modified_midpoint(const Rhs& f, double t0, const State& y0, double H, int n) {
        const double h = H / n;
        State z0 = y0;
        State z1 = y0 + h * f(t0, y0);
        for (int m = 1; m < n; ++m) {
            State z2 = z0 + 2.0 * h * f(t0 + m * h, z1);
            z0 = std::move(z1);
            z1 = std::move(z2);
        }
        return 0.5 * (z0 + z1 + h * f(t0 + H, z1));
    }

    template <class Rhs>
    bool try_interval(const Rhs& f, double t0, const State& y0, double t1, State& out, double& err) const {
        static constexpr std::array<int, kMaxColumns> seq = {2, 4, 6, 8, 10, 12, 14, 16};
        const double H = t1 - t0;
        std::array<State, kMaxColumns> prev;
        std::array<State, kMaxColumns> cur;
        for (std::size_t j = 0; j < kMaxColumns; ++j) {
            cur[0] = modified_midpoint(f, t0, y0, H, seq[j]);
            // Aitken-Neville extrapolation in h^2.
            for (std::size_t k = 1; k <= j; ++k) {
                const double r = static_cast<double>(seq[j]) / seq[j - k];
                cur[k] = cur[k - 1] + (cur[k - 1] - prev[k - 1]) / (r * r - 1.0);
            }
            if (j >= 2) {
                err = scaled_error(State(cur[j] - cur[j - 1]), cur[j], tol_);
                if (err <= 1.0) {
                    out = cur[j];
                    return true;
                }
            }
            std::swap(prev, cur);
        }
        return false;
    }

    Tolerance tol_;
    double h_min_;
    std::size_t max_depth_;
};

} // namespace vacrad::ode

#endif // VACRAD_ODE_HPP
