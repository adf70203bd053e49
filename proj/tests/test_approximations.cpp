#include <cmath>
#include <complex>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vacrad/approximations.hpp"
#include "vacrad/exact_sech.hpp"
#include "vacrad/jost.hpp"

using namespace vacrad;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

} // namespace

// ---------------------------------------------------------------------------
// Born
// ---------------------------------------------------------------------------

TEST(Born, CoefficientsClosedForm) {
    const auto p = FrequencyProfile::sech_bump(1.3, 0.4, 0.9);
    const auto [A, B] = born_coefficients(p);
    EXPECT_NEAR(std::abs(A - cplx(1.0, -0.16 * 0.9 / 1.3)), 0.0, 1e-15);
    EXPECT_NEAR(B.imag(), pi * 0.16 * 0.81 / std::sinh(pi * 1.3 * 0.9), 1e-15);
    EXPECT_EQ(B.real(), 0.0);
}

TEST(Born, CoefficientsAgreeWithExactToSecondOrder) {
    for (double Om : {0.2, 0.1, 0.05}) {
        const SechParams sp{1.0, Om, 1.0, BumpSign::Plus};
        const auto [A, B] = exact_coefficients(sp);
        const auto [Ab, Bb] = born_coefficients(FrequencyProfile::sech_bump(1.0, Om, 1.0));
        const double o4 = std::pow(Om, 4);
        EXPECT_LT(std::abs(A - Ab), 2.0 * o4) << Om;
        EXPECT_LT(std::abs(B - Bb), 2.0 * o4) << Om;
    }
}

TEST(Born, TabulatedCoefficientsMatchClosedForm) {
    const auto p = FrequencyProfile::sech_bump(1.0, 0.3, 1.0);
    std::vector<Sample> s;
    for (int i = -4000; i <= 4000; ++i) s.push_back({0.01 * i, p.omega_squared(0.01 * i)});
    const auto tab = FrequencyProfile::tabulated(1.0, s);
    const auto [A, B] = born_coefficients(p);
    const auto [At, Bt] = born_coefficients(tab);
    EXPECT_LT(std::abs(A - At), 1e-5);
    EXPECT_LT(std::abs(B - Bt), 1e-5);
}

TEST(Born, XiMatchesDirectIntegral) {
    const auto p = FrequencyProfile::sech_bump(1.0, 0.3, 0.8);
    const double w = 1.0, t = 0.7;
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const auto kern = [&](double tau, bool im) {
        const cplx v = std::sin(w * (t - tau)) / w * p.perturbation(tau) * std::polar(1.0, -w * tau);
        return im ? v.imag() : v.real();
    };
    const double re = GK::integrate([&](double x) { return kern(x, false); }, -32.0, t, 15, 1e-14);
    const double im = GK::integrate([&](double x) { return kern(x, true); }, -32.0, t, 15, 1e-14);
    const cplx want = std::polar(1.0, -w * t) - cplx(re, im);
    EXPECT_NEAR(std::abs(born_xi(p, t) - want), 0.0, 1e-10);
}

TEST(Born, XiAsymptoticsReproduceCoefficients) {
    const auto p = FrequencyProfile::sech_bump(1.0, 0.3, 0.8);
    const auto [A, B] = born_coefficients(p);
    const double t = 40.0;
    EXPECT_NEAR(std::abs(born_xi(p, t) - (A * std::polar(1.0, -t) + B * std::polar(1.0, t))), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(born_xi(p, -40.0) - std::polar(1.0, 40.0)), 0.0, 1e-15);
}

class BornDisplacement : public ::testing::TestWithParam<double> {};

TEST_P(BornDisplacement, MatchesIndependentIntegration) {
    const double tf = GetParam();
    const auto p = FrequencyProfile::sech_bump(1.0, 0.2, 1.0);
    const auto f = ForceProfile::gauss_cos(1.0, 1.5, tf, 1.0);
    const cplx b = born_displacement(p, f, 40.0);
    const cplx o = oracle::alpha_from_rest(p, f, -40.0, 40.0);
    EXPECT_LT(rel(b, o), 0.05);
}

INSTANTIATE_TEST_SUITE_P(ForceCentres, BornDisplacement, ::testing::Values(-5.0, -2.0, 0.0, 1.0, 4.0));

TEST(Born, ErrorIsSecondOrderInDriveStrength) {
    const auto f = ForceProfile::gauss_cos(1.0, 1.5, -2.0, 1.0);
    double last = INFINITY;
    for (double Om : {0.4, 0.2, 0.1}) {
        const auto p = FrequencyProfile::sech_bump(1.0, Om, 1.0);
        const double err = std::abs(born_displacement(p, f, 40.0) - oracle::alpha_from_rest(p, f, -40.0, 40.0));
        if (std::isfinite(last)) EXPECT_GE(last / err, 4.0) << Om;
        last = err;
    }
}

TEST(Born, PrincipalValueIndependentOfPanel) {
    const auto p = FrequencyProfile::sech_bump(1.0, 0.2, 1.0);
    const auto f = ForceProfile::gauss_cos(1.0, 1.5, 1.0, 1.0);
    const cplx a = born_displacement(p, f, 0.0, {0.5, 1e-11});
    for (double h : {0.1, 0.25, 0.8}) EXPECT_LT(std::abs(born_displacement(p, f, 0.0, {h, 1e-11}) - a), 1e-6) << h;
}

TEST(Born, ResponseSingularAtResonance) {
    const auto p = FrequencyProfile::sech_bump(1.0, 0.5, 1.0);
    EXPECT_GT(std::abs(born_response(p, 1.0 - 1e-8)), 1e6);
    EXPECT_LT(born_response(p, 1.0 - 1e-3) * born_response(p, 1.0 + 1e-3), 0.0);
    EXPECT_NEAR(born_response(p, 0.0), pi * 0.25 / std::sinh(pi / 2.0), 1e-15);
}

TEST(Born, NullForceAndTabulatedProfile) {
    const auto p = FrequencyProfile::sech_bump(1.0, 0.2, 1.0);
    EXPECT_EQ(born_displacement(p, ForceProfile::null(), 3.0), cplx(0.0, 0.0));
    const auto tab = FrequencyProfile::tabulated(1.0, {{-1.0, 1.0}, {0.0, 1.2}, {1.0, 1.0}});
    EXPECT_THROW(born_displacement(tab, ForceProfile::gauss_cos(1.0, 1.0, 0.0, 1.0), 3.0), DomainError);
}

TEST(Born, ConstantProfileIsFreeResponse) {
    const auto p = FrequencyProfile::constant(1.3);
    const auto f = ForceProfile::gauss_cos(0.7, 1.0, 2.0, 0.8);
    EXPECT_LT(rel(born_displacement(p, f, 30.0), oracle::alpha_from_rest(p, f, -10.0, 30.0)), 1e-8);
}

// ---------------------------------------------------------------------------
// Abrupt
// ---------------------------------------------------------------------------

TEST(Abrupt, Coefficients) {
    const auto [A, B] = abrupt_coefficients(2.0, 0.6);
    EXPECT_EQ(A, cplx(1.0, -0.3));
    EXPECT_EQ(B, cplx(0.0, 0.3));
    EXPECT_NEAR(std::norm(A) - std::norm(B), 1.0, 1e-15);
}

TEST(Abrupt, XiContinuousWithDerivativeJump) {
    const double w = 1.7, W = 0.8;
    EXPECT_NEAR(std::abs(abrupt_xi(w, W, 1e-12) - abrupt_xi(w, W, -1e-12)), 0.0, 1e-11);
    const cplx jump = abrupt_xi_dot(w, W, 1e-14) - abrupt_xi_dot(w, W, -1e-14);
    EXPECT_NEAR(std::abs(jump + 2.0 * W), 0.0, 1e-12);
}

TEST(Abrupt, XiLateMatchesCoefficients) {
    const double w = 1.7, W = 0.8;
    const auto [A, B] = abrupt_coefficients(w, W);
    for (double t : {0.3, 5.0, 11.1})
        EXPECT_NEAR(std::abs(abrupt_xi(w, W, t) - (A * std::polar(1.0, -w * t) + B * std::polar(1.0, w * t))), 0.0,
                    1e-13);
}

TEST(Abrupt, NarrowSechApproachesDelta) {
    const double W = 0.5;
    double last = INFINITY;
    for (double T : {0.04, 0.02, 0.01}) {
        const auto [A, B] = exact_coefficients({1.0, std::sqrt(W / T), T, BumpSign::Plus});
        const auto [Aa, Ba] = abrupt_coefficients(1.0, W);
        const double err = std::abs(A - Aa) + std::abs(B - Ba);
        EXPECT_LT(err, last);
        last = err;
    }
    EXPECT_LT(last, 0.02);
}

TEST(Abrupt, IntegralClosedFormMatchesQuadrature) {
    for (double tf : {-3.0, -0.5, 0.0, 0.7, 4.0})
        for (double wf : {0.0, 1.0, 10.0 * pi}) {
            const auto f = ForceProfile::gauss_cos(1.2, wf, tf, 0.6);
            EXPECT_NEAR(abrupt_integral(10.0 * pi, f), abrupt_integral_quadrature(10.0 * pi, f), 1e-9)
                << tf << ' ' << wf;
            EXPECT_NEAR(abrupt_integral(1.3, f), abrupt_integral_quadrature(1.3, f), 1e-9) << tf << ' ' << wf;
        }
}

TEST(Abrupt, TabulatedForceFallsBackToQuadrature) {
    const auto g = ForceProfile::gauss_cos(1.0, 2.0, 0.5, 0.7);
    std::vector<Sample> s;
    for (int i = -1200; i <= 1200; ++i) s.push_back({0.5 + 0.005 * i, g.value(0.5 + 0.005 * i)});
    const auto tab = ForceProfile::tabulated(s, 1.0, 0.5);
    EXPECT_NEAR(abrupt_integral(1.5, tab), abrupt_integral(1.5, g), 1e-5);
    EXPECT_LT(rel(abrupt_displacement(1.5, 0.3, tab, 20.0), abrupt_displacement(1.5, 0.3, g, 20.0)), 1e-5);
}

TEST(Abrupt, DisplacementMatchesNarrowDriveIntegration) {
    const double W = 0.5, T = 0.005;
    const auto p = FrequencyProfile::sech_bump(1.0, std::sqrt(W / T), T);
    for (double tf : {-1.0, 0.5, 2.0}) {
        const auto f = ForceProfile::gauss_cos(1.0, 1.0, tf, 0.5);
        const cplx o = oracle::alpha_from_rest(p, f, -10.0, 40.0);
        EXPECT_LT(rel(abrupt_displacement(1.0, W, f, 40.0), o), 0.01) << tf;
    }
}

TEST(Abrupt, ObservationPhaseReadingDisagreesWithDynamics) {
    const double W = 0.5, T = 0.005;
    const auto p = FrequencyProfile::sech_bump(1.0, std::sqrt(W / T), T);
    const auto f = ForceProfile::gauss_cos(1.0, 1.0, 2.0, 0.5);
    const cplx o = oracle::alpha_from_rest(p, f, -10.0, 40.0);
    EXPECT_GT(rel(abrupt_displacement(1.0, W, f, 40.0, AbruptPhase::Observation), o), 0.1);
    // The two readings coincide when the observation time equals t_f.
    EXPECT_LT(std::abs(abrupt_displacement(1.0, W, f, 2.0, AbruptPhase::Observation) -
                       abrupt_displacement(1.0, W, f, 2.0, AbruptPhase::ForceCenter)),
              1e-15);
}

TEST(Abrupt, ForceLongAfterKickIsFreeResponse) {
    const auto f = ForceProfile::gauss_cos(1.0, 1.0, 30.0, 0.5);
    const cplx free = oracle::alpha_from_rest(FrequencyProfile::constant(1.0), f, 10.0, 50.0);
    EXPECT_LT(rel(abrupt_displacement(1.0, 0.5, f, 50.0), free), 1e-8);
}

// ---------------------------------------------------------------------------
// Adiabatic
// ---------------------------------------------------------------------------

TEST(Adiabatic, PredictedReflection) {
    const AdiabaticParams p{1.0, 0.5, 20.0};
    EXPECT_NEAR(adiabatic_B(p), std::exp(-5.0 * pi), 1e-20);
    EXPECT_NEAR(p.g_value(), pi / 4.0, 1e-15);
    EXPECT_NEAR(p.omega_eff(), std::sqrt(0.75), 1e-15);
}

TEST(Adiabatic, Validation) {
    EXPECT_THROW(adiabatic_B({1.0, 1.0, 5.0}), DomainError);
    EXPECT_THROW(AdiabaticParams::from_profile(FrequencyProfile::sech_bump(1.0, 0.5, 5.0)), DomainError);
    EXPECT_NO_THROW(AdiabaticParams::from_profile(FrequencyProfile::sech_bump(1.0, 0.5, 5.0, BumpSign::Minus)));
}

TEST(Adiabatic, StokesSwitchShapes) {
    AdiabaticParams p{1.0, 0.5, 10.0};
    EXPECT_NEAR(p.stokes_switch(0.0), 0.5, 1e-15);
    EXPECT_NEAR(p.stokes_switch(-50.0), 0.0, 1e-15);
    EXPECT_NEAR(p.stokes_switch(50.0), 1.0, 1e-15);
    p.stokes = StokesSwitch::RawErf;
    EXPECT_NEAR(p.stokes_switch(0.0), 0.0, 1e-15);
    EXPECT_NEAR(p.stokes_switch(-50.0), -1.0, 1e-15);
}

// The exponent (pi/2)(w - Omega)T underestimates the decay of the true
// reflection by a factor close to two; this pins the observed ratio.
TEST(Adiabatic, ObservedExponentIsAboutTwicePredicted) {
    for (double T : {6.0, 10.0}) {
        const auto prof = FrequencyProfile::sech_bump(1.0, 0.5, T, BumpSign::Minus);
        const auto [A, B] = exact_coefficients(SechParams::from_profile(prof));
        const double ratio = std::log(std::abs(B)) / std::log(adiabatic_B(AdiabaticParams::from_profile(prof)));
        EXPECT_GT(ratio, 1.8) << T;
        EXPECT_LT(ratio, 2.2) << T;
    }
}

TEST(Adiabatic, XiNearDriveCentreMatchesNumeric) {
    const auto prof = FrequencyProfile::sech_bump(1.0, 0.5, 10.0, BumpSign::Minus);
    const auto sol = solve_jost(prof, default_grid(prof));
    const auto p = AdiabaticParams::from_profile(prof);
    for (double t : {-5.0, 0.0, 3.0}) EXPECT_LT(rel(adiabatic_xi(p, t), sol.xi_at(t)), 0.01) << t;
}

TEST(Adiabatic, XiIsFreeWaveBeforeDrive) {
    const AdiabaticParams p{1.0, 0.5, 4.0};
    EXPECT_LT(std::abs(adiabatic_xi(p, -200.0) - std::polar(1.0, 200.0)), 1e-9);
}

TEST(Adiabatic, XiLateReflectedAmplitudeIsPredicted) {
    const AdiabaticParams p{1.0, 0.5, 4.0};
    const double t = 200.0;
    const cplx x = adiabatic_xi(p, t);
    const double h = 1e-4;
    const cplx xd = (adiabatic_xi(p, t + h) - adiabatic_xi(p, t - h)) / (2.0 * h);
    const auto [A, B] = decompose_free_wave(x, xd, 1.0, t);
    EXPECT_NEAR(std::abs(B), adiabatic_B(p), 1e-6);
    EXPECT_NEAR(std::abs(A), 1.0, 1e-6);
}

class AdiabaticDisplacement : public ::testing::TestWithParam<double> {};

TEST_P(AdiabaticDisplacement, MatchesIndependentIntegration) {
    const double tf = GetParam();
    const auto prof = FrequencyProfile::sech_bump(1.0, 0.5, 10.0, BumpSign::Minus);
    const auto p = AdiabaticParams::from_profile(prof);
    const auto f = ForceProfile::gauss_cos(1.0, p.omega_eff(), tf, 1.0);
    ASSERT_TRUE(adiabatic_window(p, f));
    const cplx o = oracle::alpha_from_rest(prof, f, -400.0, 400.0);
    EXPECT_LT(rel(adiabatic_displacement(p, f, 400.0), o), 0.02);
}

INSTANTIATE_TEST_SUITE_P(ForceCentres, AdiabaticDisplacement, ::testing::Values(-2.0, 0.0, 1.0, 3.0));

TEST(Adiabatic, WindowRejectsDistantOrWideForces) {
    const AdiabaticParams p{1.0, 0.5, 10.0};
    EXPECT_FALSE(adiabatic_window(p, ForceProfile::gauss_cos(1.0, 1.0, 15.0, 1.0)));
    EXPECT_FALSE(adiabatic_window(p, ForceProfile::gauss_cos(1.0, 1.0, 0.0, 4.0)));
    EXPECT_TRUE(adiabatic_window(p, ForceProfile::null()));
}

TEST(Adiabatic, RawErfDoublesReflectedForceTerm) {
    AdiabaticParams p{1.0, 0.5, 3.0};
    const auto f = ForceProfile::gauss_cos(1.0, 0.0, -1.0, 0.3);
    const cplx a_step = adiabatic_displacement(p, f, 0.0);
    p.stokes = StokesSwitch::RawErf;
    const cplx a_raw = adiabatic_displacement(p, f, 0.0);
    const double we = p.omega_eff();
    const cplx direct = cplx(0.0, 1.0) * std::polar(1.0, -detail::adiabatic_phase_defect(p, -120.0, 0.0)) /
                        std::sqrt(2.0 * we) * std::polar(1.0, -we) * force_fourier(f, we);
    EXPECT_LT(std::abs((a_raw - direct) - 2.0 * (a_step - direct)), 1e-14);
}
