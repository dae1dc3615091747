#include "qhe/counter_rotating.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace {

using namespace qhe;
using std::numbers::pi;

EvolveOptions grid(double t_end, std::size_t n) {
    EvolveOptions opts;
    opts.output_times = uniform_grid(t_end, n);
    return opts;
}

TEST(CRMoments, VacuumGrowthAtZeroFrequency) {
    const auto traj = evolve_cr_moments(FrequencyProfile::constant(0.0, 0.0), 0.0, 0.0, 2.0, grid(2.0, 21));
    for (const auto& s : traj.states) {
        const double sh = std::sinh(s.t);
        EXPECT_NEAR(s.n_a, sh * sh, 1e-9 * std::max(1.0, sh * sh));
        EXPECT_NEAR(s.n_b, s.n_a, 1e-12);
        EXPECT_NEAR(s.m.imag(), -0.5 * std::sinh(2.0 * s.t), 1e-9 * std::max(1.0, sh * sh));
    }
}

TEST(CRMoments, MatchesFockOracle) {
    for (auto [wa, wb] : {std::pair{0.0, 0.0}, std::pair{1.0, 0.5}, std::pair{3.0, 2.0}, std::pair{0.4, 0.3}}) {
        const auto traj = evolve_cr_moments(FrequencyProfile::constant(wa, wb), 0.0, 0.0, 2.0, grid(2.0, 9));
        for (const auto& s : traj.states) {
            const auto fock = fock_oracle_cr_auto(wa, wb, s.t);
            EXPECT_NEAR(s.n_a, fock.n_a, 1e-7) << "wa=" << wa << " t=" << s.t;
            EXPECT_NEAR(s.n_b, fock.n_b, 1e-7);
        }
    }
}

TEST(FockOracle, KnownValuesAndTruncation) {
    EXPECT_EQ(fock_oracle_cr(0.0, 0.0, 0.0, 20).n_a, 0.0);
    const auto one = fock_oracle_cr_auto(0.0, 0.0, 1.0);
    EXPECT_NEAR(one.n_a, 1.381098, 1e-6);
    EXPECT_EQ(one.n_a, one.n_b);
    EXPECT_LT(one.tail, 1e-10);
    const auto two = fock_oracle_cr_auto(0.0, 0.0, 2.0);
    EXPECT_GT(two.n_max, 60u);
    EXPECT_NEAR(two.n_a, std::pow(std::sinh(2.0), 2), 1e-7);
    EXPECT_THROW(fock_oracle_cr(0.0, 0.0, 2.0, 60), TruncationError);
    EXPECT_THROW(fock_oracle_cr(0.0, 0.0, 1.0, 10), DomainError);
}

// For constant omega_a + omega_b = w > 2g the sum oscillates with amplitude
// 4 g^2 / (w^2 - 4 g^2) (1 + S0) per oscillator.
TEST(CRMoments, LargeDetuningStaysBounded) {
    const double w = 20.0, na0 = 0.3, nb0 = 0.7;
    const auto traj = evolve_cr_moments(FrequencyProfile::constant(12.0, 8.0), na0, nb0, 10.0, grid(10.0, 2001));
    const double bound = 4.0 / (w * w - 4.0) * (1.0 + na0 + nb0);
    double peak = 0.0;
    for (const auto& s : traj.states) peak = std::max(peak, s.n_a - na0);
    EXPECT_LE(peak, bound + 1e-9);
    EXPECT_GT(peak, 0.9 * bound);
}

TEST(CRMoments, InvariantsOnRandomProfiles) {
    test::Gen gen(61);
    for (int i = 0; i < 30; ++i) {
        const auto profile = i % 2 ? gen.modulated_profile() : gen.closed_tabulated_profile(8.0);
        const double na0 = gen.uniform(0.0, 2.0), nb0 = gen.uniform(0.0, 2.0);
        const auto traj = evolve_cr_moments(profile, na0, nb0, 8.0, grid(8.0, 801));
        for (const auto& s : traj.states) {
            EXPECT_NEAR(s.n_a - s.n_b, na0 - nb0, 1e-9);
            EXPECT_GE(s.n_a + s.n_b, na0 + nb0 - 1e-9);
        }
    }
}

TEST(SumIdentity, ConstantFrequencies) {
    EvolveOptions opts = grid(3.0, 10000);
    opts.integrator.tol = 1e-10;
    const auto traj = evolve_cr_moments(FrequencyProfile::constant(1.5, 1.0), 0.4, 0.2, 3.0, opts);
    const auto check = verify_sum_identity(traj);
    EXPECT_LE(check.max_residual(), 1e-5);
    EXPECT_EQ(check.rhs[0], 0.0);
    EXPECT_NEAR(check.lhs[0], 0.0, 1e-6);
}

// The residual is pure discretization error, second order in the spacing
// because the trapezoid rule dominates.
TEST(SumIdentity, SecondOrderConvergence) {
    const auto profile = FrequencyProfile::constant(4.0, 3.0);
    const auto coarse = verify_sum_identity(evolve_cr_moments(profile, 0.5, 0.5, 3.0, grid(3.0, 5000)));
    const auto fine = verify_sum_identity(evolve_cr_moments(profile, 0.5, 0.5, 3.0, grid(3.0, 20000)));
    const double ratio = coarse.max_residual() / fine.max_residual();
    EXPECT_GT(ratio, 14.0);
    EXPECT_LT(ratio, 18.0);
}

// Stable regime with margin, omega_a + omega_b >= 3 g: near 2 g the sum swings
// widely and the absolute discretization error grows with it.
TEST(SumIdentity, ModulatedAndUnstable) {
    test::Gen gen(67);
    for (int i = 0; i < 5; ++i) {
        std::vector<ProfileRow> rows;
        for (int k = 0; k <= 6; ++k) rows.push_back({0.5 * k, gen.uniform(1.5, 2.5), gen.uniform(1.5, 2.5)});
        const auto profile = FrequencyProfile::tabulated(rows);
        const auto traj = evolve_cr_moments(profile, gen.uniform(0.0, 0.5), gen.uniform(0.0, 0.5), 3.0, grid(3.0, 10000));
        EXPECT_LE(verify_sum_identity(traj).max_residual(), 1e-5);
    }
    // omega_a + omega_b < 2g: exponential growth; compare relative to the scale.
    const auto traj = evolve_cr_moments(FrequencyProfile::constant(0.3, 0.2), 0.0, 0.0, 3.0, grid(3.0, 10000));
    const auto check = verify_sum_identity(traj);
    EXPECT_LE(check.max_residual() / std::max(1.0, check.rhs.back()), 1e-5);
}

TEST(SumIdentity, CoarseGridRejected) {
    const auto traj = evolve_cr_moments(FrequencyProfile::constant(5.0, 5.0), 0.0, 0.0, 3.0, grid(3.0, 20));
    EXPECT_THROW(verify_sum_identity(traj), ResolutionError);
}

TEST(CRCycle, NoPositiveWork) {
    test::Gen gen(71);
    for (int i = 0; i < 100; ++i) {
        const double t_c = gen.uniform(0.5, 6.0);
        const auto profile = gen.closed_tabulated_profile(t_c);
        const double na0 = gen.uniform(0.0, 3.0), nb0 = gen.uniform(0.0, 3.0);
        const auto r = run_cr_cycle(profile, na0, nb0, t_c);
        EXPECT_LE(r.W, 1e-9);
        EXPECT_NEAR(r.W, r.W_alt, 1e-8 * std::max(1.0, std::abs(r.W)));
        EXPECT_GE(r.n_a_final, na0 - 1e-9);
        EXPECT_GE(r.n_b_final, nb0 - 1e-9);
    }
}

TEST(CRCycle, SinusoidalCyclesAndVacuum) {
    test::Gen gen(73);
    for (int i = 0; i < 20; ++i) {
        const double nu = gen.uniform(0.5, 4.0);
        const auto profile = FrequencyProfile::sinusoidal(gen.uniform(0.5, 3.0), gen.uniform(0.5, 3.0), gen.uniform(0.0, 0.4), nu);
        const double t_c = gen.integer(1, 10) * pi / nu;
        const auto r = run_cr_cycle(profile, 0.0, 0.0, t_c);
        EXPECT_NEAR(r.W, -(profile.omega_a0() + profile.omega_b0()) * r.n_a_final, 1e-12);
        EXPECT_LE(r.W, 0.0);
    }
}

TEST(CRCycle, TrivialAndOpenCycles) {
    const auto p = FrequencyProfile::sinusoidal(2.0, 1.0, 0.3, 2.0);
    EXPECT_EQ(run_cr_cycle(p, 0.5, 0.2, 0.0).W, 0.0);
    EXPECT_THROW(run_cr_cycle(p, 0.5, 0.2, 1.0), CycleClosureError);
    EXPECT_THROW(run_cr_cycle(p, -0.5, 0.2, pi), DomainError);
}

}  // namespace
