#ifndef VACRAD_QUANTUM_HPP
#define VACRAD_QUANTUM_HPP

// Ladder-operator evolution a(t) = u a0 + v a0^dagger + alpha built from the
// classical Jost data, occupation numbers and squeezed-coherent-state parameters.

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>

#include "vacrad/errors.hpp"
#include "vacrad/jost.hpp"
#include "vacrad/profiles.hpp"
#include "vacrad/quadrature.hpp"

namespace vacrad {

struct LadderMap {
    cplx u{1.0, 0.0};
    cplx v{0.0, 0.0};
    cplx alpha{0.0, 0.0};
    double t0 = 0.0;
    double t = 0.0;
    double mass = 1.0;

    double bogolyubov_defect() const { return std::abs(std::norm(u) - std::norm(v) - 1.0); }
};

struct OscillatorState {
    double squeeze_r = 0.0;
    double squeeze_phase = 0.0;
    cplx displacement{0.0, 0.0};
    double occupation = 0.0;
};

/// u = A e^{-i w (t - t0)}, v = B* e^{-i w (t + t0)}
inline std::pair<cplx, cplx> bogolyubov_from_scattering(cplx A, cplx B, double omega0, double t0, double t) {
    return {A * std::polar(1.0, -omega0 * (t - t0)), std::conj(B) * std::polar(1.0, -omega0 * (t + t0))};
}

/// alpha = (i e^{-i w t} / sqrt(2 m w)) \int_{t0}^t dtau F(tau) [A xi*(tau) - B* xi(tau)]
/// for any Jost solution given through `xi_at`, quadrature on `grid`.
template <class XiFn>
cplx displacement_with(const XiFn& xi_at, cplx A, cplx B, double omega0, const ForceProfile& force,
                       const TimeGrid& grid, double t0, double t, double rtol = 1e-10) {
    if (!(t0 < t)) throw PreconditionError("displacement requires t0 < t");
    const auto supp = force.support();
    if (!supp) return 0.0;
    if (supp->lo < t0 || supp->hi > t) throw PreconditionError("force support must lie within [t0, t]");
    const cplx Bc = std::conj(B);
    const auto kernel = [&](double tau) {
        const cplx x = xi_at(tau);
        return A * std::conj(x) - Bc * x;
    };
    const auto integral = quad::integrate_against_force(kernel, force, grid, rtol);
    return cplx(0.0, 1.0) * std::polar(1.0, -omega0 * t) / std::sqrt(2.0 * force.mass() * omega0) * integral.value;
}

inline cplx displacement(const JostSolution& jost, const ForceProfile& force, double t0, double t,
                         double rtol = 1e-10) {
    return displacement_with([&](double tau) { return jost.xi_at(tau); }, jost.A, jost.B, jost.omega0(), force,
                             jost.grid, t0, t, rtol);
}

/// Complete map from a Jost solution at the asymptotic times t0 < drive < t.
inline LadderMap ladder_map(const JostSolution& jost, const ForceProfile& force, double t0, double t) {
    LadderMap m;
    std::tie(m.u, m.v) = bogolyubov_from_scattering(jost.A, jost.B, jost.omega0(), t0, t);
    m.alpha = displacement(jost, force, t0, t);
    m.t0 = t0;
    m.t = t;
    m.mass = force.mass();
    return m;
}

/// Mean number of quanta at t starting from the vacuum: |v|^2 + |alpha|^2.
inline double occupation_vacuum(const LadderMap& map) { return std::norm(map.v) + std::norm(map.alpha); }

/// Gain <n| a^dagger a |n> - n = (2n + 1)|B|^2 for an unforced map.
inline double occupation_fock(std::size_t n, const LadderMap& map) {
    if (map.alpha != cplx(0.0, 0.0))
        throw PreconditionError("Fock-state gain is defined only without a classical force");
    return (2.0 * static_cast<double>(n) + 1.0) * std::norm(map.v);
}

/// Gain for an initial coherent state |alpha0> at t0:
///     (2|alpha0|^2 + 1)|B|^2 + 2|A||B||alpha0|^2 cos(2 w t0 + 2 phi),
/// with alpha0^2 A B = |alpha0|^2 |A||B| e^{2 i phi}.
inline double occupation_coherent(cplx alpha0, cplx A, cplx B, double omega0, double t0) {
    const double a2 = std::norm(alpha0);
    double gain = (2.0 * a2 + 1.0) * std::norm(B);
    const cplx z = alpha0 * alpha0 * A * B;
    if (std::abs(z) > 0.0) gain += 2.0 * std::abs(A) * std::abs(B) * a2 * std::cos(2.0 * omega0 * t0 + std::arg(z));
    return gain;
}

/// Squeezed-coherent-state parameters: r = asinh|v|, phase = arg(u* v).
inline OscillatorState state_from_map(const LadderMap& map, double tol = 1e-8) {
    const double defect = map.bogolyubov_defect();
    if (!(defect <= tol))
        throw InconsistencyError("|u|^2 - |v|^2 = 1 violated by " + std::to_string(defect));
    OscillatorState s;
    s.squeeze_r = std::asinh(std::abs(map.v));
    s.squeeze_phase = std::arg(std::conj(map.u) * map.v);
    s.displacement = map.alpha;
    s.occupation = occupation_vacuum(map);
    return s;
}

/// Force entirely after the drive: (i e^{-i w t} / sqrt(2 m w)) e^{i w t_f} f~(w).
inline cplx late_force_displacement(double omega0, const ForceProfile& force, double t) {
    if (force.is_null()) return 0.0;
    return cplx(0.0, 1.0) * std::polar(1.0, -omega0 * t) / std::sqrt(2.0 * force.mass() * omega0) *
           std::polar(1.0, omega0 * force.center()) * force_fourier(force, omega0);
}

/// Force entirely before the drive:
///     (i e^{-i w t} / sqrt(2 m w)) [A f~(w) e^{i w t_f} - B* f~*(w) e^{-i w t_f}].
inline cplx early_force_displacement(double omega0, cplx A, cplx B, const ForceProfile& force, double t) {
    if (force.is_null()) return 0.0;
    const cplx f = force_fourier(force, omega0);
    const double tf = force.center();
    const cplx bracket = A * f * std::polar(1.0, omega0 * tf) - std::conj(B) * std::conj(f) * std::polar(1.0, -omega0 * tf);
    return cplx(0.0, 1.0) * std::polar(1.0, -omega0 * t) / std::sqrt(2.0 * force.mass() * omega0) * bracket;
}

} // namespace vacrad

#endif // VACRAD_QUANTUM_HPP
