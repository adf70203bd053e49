#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vacrad/exact_sech.hpp"
#include "vacrad/jost.hpp"

using namespace vacrad;

namespace {

FrequencyProfile bump(double w0, double Om, double T, BumpSign s = BumpSign::Plus) {
    return FrequencyProfile::sech_bump(w0, Om, T, s);
}

} // namespace

TEST(Jost, ConstantProfileIsFree) {
    const auto p = FrequencyProfile::constant(2.0);
    const auto sol = solve_jost(p, TimeGrid(-10.0, 10.0, 2000));
    EXPECT_NEAR(std::abs(sol.A - 1.0), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(sol.B), 0.0, 1e-10);
    for (double t : {-3.3, 0.0, 7.1})
        EXPECT_NEAR(std::abs(sol.xi_at(t) - std::polar(1.0, -2.0 * t)), 0.0, 1e-10);
}

TEST(Jost, MatchesIndependentIntegration) {
    for (auto [w0, Om, T] : {std::tuple{1.0, 1.0, 1.0}, std::tuple{2.0, 0.5, 3.0}, std::tuple{1.0, 3.0, 0.5}}) {
        const auto p = bump(w0, Om, T);
        const auto sol = solve_jost(p, default_grid(p));
        const auto [A, B] = oracle::jost_coefficients(p, sol.grid.t_min, sol.grid.t_max);
        EXPECT_NEAR(std::abs(sol.A - A), 0.0, 1e-8);
        EXPECT_NEAR(std::abs(sol.B - B), 0.0, 1e-8 * std::max(1.0, std::abs(B)) + 1e-10);
    }
}

TEST(Jost, SharpResonantBumpReflectsAlmostNothing) {
    const auto p = bump(6.0 * pi, 1.0, 0.5);
    const auto sol = solve_jost(p, default_grid(p));
    EXPECT_LT(std::abs(sol.B), 1e-12);
    EXPECT_NEAR(std::abs(sol.A), 1.0, 1e-12);
}

TEST(Jost, ReflectionlessAtIntegerS) {
    // Omega^2 T^2 = s (s + 1) with s = 2.
    const double T = 1.0, Om = std::sqrt(6.0);
    const auto p = bump(0.8, Om, T);
    const auto sol = solve_jost(p, default_grid(p));
    EXPECT_LT(std::abs(sol.B), 1e-9);
    EXPECT_NEAR(std::abs(sol.A), 1.0, 1e-9);
}

class JostInvariants : public ::testing::TestWithParam<std::tuple<double, double, double, BumpSign>> {};

TEST_P(JostInvariants, WronskianAndFlux) {
    const auto [w0, Om, T, sign] = GetParam();
    const auto p = bump(w0, Om, T, sign);
    const auto sol = solve_jost(p, default_grid(p));
    EXPECT_LT(sol.wronskian_drift, 1e-8 * w0);
    EXPECT_LT(scattering_flux_defect(sol), 1e-8);
}

TEST_P(JostInvariants, TimeReversal) {
    const auto [w0, Om, T, sign] = GetParam();
    const auto p = bump(w0, Om, T, sign);
    const auto g = default_grid(p);
    const auto sol = solve_jost(p, g);
    const auto [Ab, Bb] = solve_backward_amplitudes(p, g);
    EXPECT_NEAR(std::abs(Ab - std::conj(sol.A)), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(Bb - std::conj(sol.B)), 0.0, 1e-9);
}

TEST_P(JostInvariants, MatchesClosedForm) {
    const auto [w0, Om, T, sign] = GetParam();
    const auto p = bump(w0, Om, T, sign);
    const auto sol = solve_jost(p, default_grid(p));
    const auto [A, B] = exact_coefficients(SechParams::from_profile(p));
    EXPECT_NEAR(std::abs(sol.A - A), 0.0, 1e-8);
    EXPECT_NEAR(std::abs(sol.B - B), 0.0, 1e-8);
    for (double t : {-2.0 * T, 0.0, 0.7 * T, 3.0 * T})
        EXPECT_NEAR(std::abs(sol.xi_at(t) - exact_xi(SechParams::from_profile(p), t)), 0.0, 1e-8);
}

INSTANTIATE_TEST_SUITE_P(Profiles, JostInvariants,
                         ::testing::Values(std::tuple{1.0, 1.0, 1.0, BumpSign::Plus},
                                           std::tuple{2.0, 0.5, 3.0, BumpSign::Plus},
                                           std::tuple{1.0, 3.0, 0.5, BumpSign::Plus},
                                           std::tuple{1.0, 0.5, 10.0, BumpSign::Minus},
                                           std::tuple{3.0, 2.0, 0.4, BumpSign::Minus}));

TEST(Jost, ImpulseResponseOfFreeOscillator) {
    const double w0 = 1.7;
    const auto sol = solve_jost(FrequencyProfile::constant(w0), TimeGrid(-20.0, 20.0, 4000));
    for (auto [t, tau] : {std::pair{1.0, -2.0}, std::pair{5.3, 5.0}, std::pair{-4.0, -9.0}})
        EXPECT_NEAR(impulse_response(sol, t, tau), std::sin(w0 * (t - tau)) / w0, 1e-10);
    EXPECT_EQ(impulse_response(sol, 1.0, 1.0), 0.0);
    EXPECT_EQ(impulse_response(sol, 1.0, 2.0), 0.0);
}

TEST(Jost, ImpulseResponseSolvesEquationInT) {
    // g(t, tau) -> 0 and dg/dt -> 1 as t -> tau+, under any drive.
    const auto p = bump(1.0, 2.0, 0.7);
    const auto sol = solve_jost(p, default_grid(p));
    const double tau = 0.3, eps = 1e-5;
    EXPECT_NEAR(impulse_response(sol, tau + eps, tau), eps, 1e-9);
    const double d = (impulse_response(sol, tau + 2e-4, tau) - impulse_response(sol, tau + 1e-4, tau)) / 1e-4;
    EXPECT_NEAR(d, 1.0, 1e-3);
}

TEST(Jost, Rk4ConvergesAtFourthOrder) {
    const auto p = bump(1.0, 1.0, 1.0);
    const auto [A, B] = exact_coefficients(SechParams::from_profile(p));
    JostOptions opt;
    opt.integrator = Integrator::RungeKutta4;
    opt.tol = 1.0;
    const double e1 = std::abs(solve_jost(p, TimeGrid(-30.0, 30.0, 1500), opt).A - A);
    const double e2 = std::abs(solve_jost(p, TimeGrid(-30.0, 30.0, 3000), opt).A - A);
    EXPECT_NEAR(e1 / e2, 16.0, 3.2);
}

TEST(Jost, Rk4ReportsInsufficientResolution) {
    const auto p = bump(1.0, 1.0, 1.0);
    JostOptions opt;
    opt.integrator = Integrator::RungeKutta4;
    opt.tol = 1e-10;
    EXPECT_THROW(solve_jost(p, TimeGrid(-30.0, 30.0, 300), opt), ConvergenceError);
}

TEST(Jost, RejectsGridInsideDrive) {
    const auto p = bump(1.0, 1.0, 1.0);
    EXPECT_THROW(solve_jost(p, TimeGrid(-5.0, 5.0, 1000)), PreconditionError);
}

TEST(Jost, StateOutsideGridThrows) {
    const auto p = bump(1.0, 1.0, 1.0);
    const auto sol = solve_jost(p, default_grid(p));
    EXPECT_THROW(sol.xi_at(31.0), OutOfRangeError);
    EXPECT_THROW(sol.xi_at(-30.5), OutOfRangeError);
    EXPECT_NO_THROW(sol.xi_at(30.0));
}

TEST(Jost, InterpolationBetweenNodes) {
    const auto p = bump(1.0, 1.0, 1.0);
    const auto sol = solve_jost(p, default_grid(p));
    const SechParams sp = SechParams::from_profile(p);
    // Value is sixth order in the node spacing, derivative fifth.
    for (double t : {-1.2345, 0.0123, 2.71828}) {
        EXPECT_NEAR(std::abs(sol.xi_at(t) - exact_xi(sp, t)), 0.0, 1e-8);
        EXPECT_NEAR(std::abs(sol.xi_dot_at(t) - exact_xi_dot(sp, t)), 0.0, 1e-7);
    }
}

TEST(Jost, TabulatedProfileMatchesAnalytic) {
    const auto p = bump(1.0, 1.0, 1.0);
    std::vector<Sample> s;
    for (int i = -30000; i <= 30000; ++i) s.push_back({0.001 * i, p.omega_squared(0.001 * i)});
    const auto tab = FrequencyProfile::tabulated(1.0, s);
    const auto sol = solve_jost(tab, TimeGrid(-30.0, 30.0, 6000), 1e-10);
    const auto ref = solve_jost(p, TimeGrid(-30.0, 30.0, 6000));
    EXPECT_NEAR(std::abs(sol.A - ref.A), 0.0, 1e-5);
    EXPECT_NEAR(std::abs(sol.B - ref.B), 0.0, 1e-5);
}

TEST(ClassicalTrajectory, FreeCosine) {
    const double w0 = 2.0;
    const auto sol = solve_jost(FrequencyProfile::constant(w0), TimeGrid(-5.0, 5.0, 1000));
    const auto tr = classical_trajectory(sol, 1.0, 0.0, -5.0, ForceProfile::null());
    for (std::size_t k = 0; k < tr.t.size(); k += 97) {
        EXPECT_NEAR(tr.x[k], std::cos(w0 * (tr.t[k] + 5.0)), 1e-10);
        EXPECT_NEAR(tr.p[k], -w0 * std::sin(w0 * (tr.t[k] + 5.0)), 1e-10);
    }
}

TEST(ClassicalTrajectory, MatchesIndependentIntegration) {
    const auto p = bump(1.0, 1.0, 1.0);
    const auto f = ForceProfile::gauss_cos(0.8, 1.5, 2.0, 1.2, 1.3);
    const auto sol = solve_jost(p, default_grid(p));
    const auto tr = classical_trajectory(sol, 0.0, 0.0, -30.0, f);
    for (double t : {-1.0, 2.0, 4.5, 15.0}) {
        const auto k = static_cast<std::size_t>(std::lround((t - sol.grid.t_min) / sol.grid.step())) + 0;
        const double tk = sol.grid.at(k);
        const auto [x, mom] = oracle::forced_from_rest(p, f, -30.0, tk);
        // record 0 is t0 itself, which coincides with node 0
        EXPECT_NEAR(tr.x[k], x, 1e-6) << tk;
        EXPECT_NEAR(tr.p[k], mom, 1e-6) << tk;
    }
}

TEST(ClassicalTrajectory, Preconditions) {
    const auto p = bump(1.0, 1.0, 1.0);
    const auto sol = solve_jost(p, default_grid(p));
    const auto f = ForceProfile::gauss_cos(1.0, 1.0, 0.0, 1.0);
    EXPECT_THROW(classical_trajectory(sol, 0.0, 0.0, -3.0, f), PreconditionError);
    EXPECT_THROW(classical_trajectory(sol, 0.0, 0.0, -40.0, f), OutOfRangeError);
    EXPECT_THROW(classical_trajectory(sol, 0.0, 0.0, -2.0, ForceProfile::null()), PreconditionError);
}
