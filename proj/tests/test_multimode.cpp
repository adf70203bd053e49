#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vacrad/exact_sech.hpp"
#include "vacrad/jost.hpp"
#include "vacrad/multimode.hpp"

using namespace vacrad;

namespace {

MultimodeSystem two_mode() {
    MultimodeSystem s;
    s.omegas = {1.0, 1.6};
    s.pulses = {{0, 0, 0.8, 1.0, 0.0}, {0, 1, 0.5, 0.7, 0.3}, {1, 1, -0.4, 1.2, -0.5}};
    s.forces = {ForceProfile::gauss_cos(1.0, 1.1, -1.0, 1.0), ForceProfile::gauss_cos(0.6, 1.5, 1.5, 0.8)};
    return s;
}

std::vector<double> coupling_rowmajor(const MultimodeSystem& s, double t) {
    const Eigen::MatrixXd c = s.coupling(t);
    std::vector<double> out;
    for (Eigen::Index i = 0; i < c.rows(); ++i)
        for (Eigen::Index j = 0; j < c.cols(); ++j) out.push_back(c(i, j));
    return out;
}

} // namespace

TEST(Multimode, DecoupledModesAreFree) {
    MultimodeSystem s;
    s.omegas = {1.0, 2.0, 3.5};
    const auto mj = solve_multimode_jost(s, TimeGrid(-10.0, 10.0, 2000));
    EXPECT_LT((mj.A - MatrixXc::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT(mj.B.cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Multimode, SingleModeReducesToScalarSolution) {
    MultimodeSystem s;
    s.omegas = {1.0};
    s.pulses = {{0, 0, 1.0, 1.0, 0.0}};
    const auto mj = solve_multimode_jost(s, s.default_grid());
    const auto [A, B] = exact_coefficients({1.0, 1.0, 1.0, BumpSign::Plus});
    EXPECT_NEAR(std::abs(mj.A(0, 0) - A), 0.0, 1e-6);
    EXPECT_NEAR(std::abs(mj.B(0, 0) - B), 0.0, 1e-6);
}

TEST(Multimode, SingleModeGreenIsImpulseResponse) {
    MultimodeSystem s;
    s.omegas = {1.0};
    s.pulses = {{0, 0, 1.0, 1.0, 0.0}};
    const auto g = s.default_grid();
    const auto mj = solve_multimode_jost(s, g);
    const auto sol = solve_jost(FrequencyProfile::sech_bump(1.0, 1.0, 1.0), g);
    for (auto [t, tau] : {std::pair{1.0, -2.0}, std::pair{5.0, 0.5}, std::pair{-1.0, -1.5}})
        EXPECT_NEAR(multimode_green(mj, t, tau)(0, 0), impulse_response(sol, t, tau), 1e-8);
    EXPECT_EQ(multimode_green(mj, 0.0, 1.0)(0, 0), 0.0);
}

TEST(Multimode, TwoModeUnitarity) {
    const auto s = two_mode();
    const auto mj = solve_multimode_jost(s, s.default_grid());
    EXPECT_LT(unitarity_defect(mj), 1e-8);
    EXPECT_GT(mj.B.cwiseAbs().maxCoeff(), 1e-3);
    EXPECT_GT(std::abs(mj.A(0, 1)), 1e-3);
}

TEST(Multimode, ReferenceFrequencyDoesNotChangeScattering) {
    auto s = two_mode();
    const auto g = s.default_grid();
    const auto a = solve_multimode_jost(s, g);
    s.omega_ref = 1.6;
    const auto b = solve_multimode_jost(s, g);
    EXPECT_LT((a.A - b.A).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((a.B - b.B).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Multimode, ThreadCountDoesNotChangeResults) {
    const auto s = two_mode();
    const auto g = s.default_grid();
    MultimodeOptions o1, o4;
    o4.threads = 4;
    const auto a = solve_multimode_jost(s, g, o1);
    const auto b = solve_multimode_jost(s, g, o4);
    EXPECT_EQ((a.A - b.A).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ((a.B - b.B).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Multimode, EvolutionIsSymplectic) {
    const auto s = two_mode();
    const auto g = s.default_grid();
    const auto mj = solve_multimode_jost(s, g);
    const auto ev = multimode_evolution(s, mj, g.t_min, g.t_max);
    const MatrixXc I = MatrixXc::Identity(2, 2);
    EXPECT_LT((ev.U * ev.U.adjoint() - ev.V * ev.V.adjoint() - I).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((ev.U * ev.V.transpose() - ev.V * ev.U.transpose()).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Multimode, DisplacementMatchesIndependentIntegration) {
    const auto s = two_mode();
    const auto g = s.default_grid();
    const auto mj = solve_multimode_jost(s, g);
    const auto ev = multimode_evolution(s, mj, g.t_min, g.t_max);
    const auto ref = oracle::multimode_alpha_from_rest(
        s.omegas, [&](double t) { return coupling_rowmajor(s, t); },
        [&](std::size_t i, double t) { return s.force(i).value(t); }, s.mass, g.t_min, g.t_max, 0.02);
    for (Eigen::Index i = 0; i < 2; ++i)
        EXPECT_NEAR(std::abs(ev.alpha[i] - ref[static_cast<std::size_t>(i)]), 0.0, 1e-6) << i;
}

TEST(Multimode, DisplacementWithMassMatchesIndependentIntegration) {
    auto s = two_mode();
    s.mass = 2.5;
    const auto g = s.default_grid();
    const auto mj = solve_multimode_jost(s, g);
    const auto ev = multimode_evolution(s, mj, g.t_min, g.t_max);
    const auto ref = oracle::multimode_alpha_from_rest(
        s.omegas, [&](double t) { return coupling_rowmajor(s, t); },
        [&](std::size_t i, double t) { return s.force(i).value(t); }, s.mass, g.t_min, g.t_max, 0.02);
    for (Eigen::Index i = 0; i < 2; ++i)
        EXPECT_NEAR(std::abs(ev.alpha[i] - ref[static_cast<std::size_t>(i)]), 0.0, 1e-6) << i;
}

TEST(Multimode, OccupationsFromVacuum) {
    const auto s = two_mode();
    const auto g = s.default_grid();
    const auto mj = solve_multimode_jost(s, g);
    const auto ev = multimode_evolution(s, mj, g.t_min, g.t_max);
    const Eigen::VectorXd n = multimode_occupations(ev);
    for (Eigen::Index i = 0; i < 2; ++i) {
        double vv = 0.0;
        for (Eigen::Index m = 0; m < 2; ++m) vv += std::norm(mj.B(i, m));
        EXPECT_NEAR(n[i], vv + std::norm(ev.alpha[i]), 1e-12);
    }
}

TEST(Multimode, UnitarityDefectGrowsLinearly) {
    const auto s = two_mode();
    const auto mj = solve_multimode_jost(s, s.default_grid());
    MatrixXc E = MatrixXc::Zero(2, 2);
    E(0, 1) = cplx(0.3, -0.2);
    E(1, 1) = 0.1;
    const double d1 = unitarity_defect(mj.A + 1e-4 * E, mj.B);
    const double d2 = unitarity_defect(mj.A + 2e-4 * E, mj.B);
    EXPECT_GT(d1, 1e-6);
    EXPECT_NEAR(d2 / d1, 2.0, 0.01);
}

TEST(Multimode, Validation) {
    MultimodeSystem s;
    EXPECT_THROW(s.validate(), DomainError);
    s.omegas = {1.0, -1.0};
    EXPECT_THROW(s.validate(), DomainError);
    s.omegas = {1.0, 2.0};
    s.pulses = {{0, 2, 1.0, 1.0, 0.0}};
    EXPECT_THROW(s.validate(), DomainError);
    s.pulses = {{0, 1, 1.0, 1.0, 0.0}};
    EXPECT_THROW(solve_multimode_jost(s, TimeGrid(-3.0, 3.0, 100)), PreconditionError);
}

TEST(Multimode, StateOutsideGridThrows) {
    const auto s = two_mode();
    const auto g = s.default_grid();
    const auto mj = solve_multimode_jost(s, g);
    EXPECT_THROW(mj.state_at(0, g.t_max + 1.0), OutOfRangeError);
}
