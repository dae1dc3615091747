#include "qhe/photonic_engine.hpp"
#include "qhe/three_mode.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace {

using namespace qhe;
using std::numbers::pi;

CycleSpec resonant_spec() {
    CycleSpec s;
    s.omega_a0 = 3.0;
    s.omega_b0 = 1.0;
    s.delta = 0.2;
    s.nu = 2.0 * std::sqrt(2.0);
    return s;
}

TEST(Resonance, Frequency) {
    EXPECT_DOUBLE_EQ(resonance_frequency(1.7, 1.7), 2.0);
    EXPECT_NEAR(resonance_frequency(3.0, 1.0), 2.828427, 1e-6);
    EXPECT_DOUBLE_EQ(resonance_frequency(4.0, 1.0), std::sqrt(13.0));
    EXPECT_THROW(resonance_frequency(-1.0, 1.0), DomainError);
}

TEST(Resonance, EstimatedDuration) {
    auto s = resonant_spec();
    EXPECT_NEAR(estimate_cycle_duration(s), 22.214, 1e-3);
    s.delta = 0.1;
    s.nu = 2.0;
    EXPECT_NEAR(estimate_cycle_duration(s), 31.416, 1e-3);
    const double base = estimate_cycle_duration(s);
    s.delta = 0.2;
    EXPECT_DOUBLE_EQ(estimate_cycle_duration(s), base / 2);
    s.delta = 0.0;
    EXPECT_THROW(estimate_cycle_duration(s), ResonanceMissError);
}

TEST(Optimizer, ReproducesFigure2Zero) {
    const auto opt = optimize_cycle_duration(resonant_spec());
    EXPECT_NEAR(opt.t_c, 22.26, 0.10);
    EXPECT_LE(opt.abs_C, 0.02);
    EXPECT_NEAR(opt.d_sq, 1.0 - opt.abs_C * opt.abs_C, 1e-15);
    // Independent recomputation of |C| at the located time.
    const auto m = advance_modes(resonant_spec().profile(), ModeCoefficients::identity(), 0.0, opt.t_c,
                                 ode::Options{});
    EXPECT_NEAR(std::abs(m.C), opt.abs_C, 1e-8);
}

TEST(Optimizer, ConstantDegenerateProfileGivesRabiSwap) {
    CycleSpec s;
    s.omega_a0 = s.omega_b0 = 1.3;
    s.delta = 0.0;
    const auto opt = optimize_cycle_duration(s);
    EXPECT_NEAR(opt.t_c, pi / 2, 1e-6);
    EXPECT_NEAR(opt.d_sq, 1.0, 1e-10);
}

TEST(Optimizer, NoDriveMissesResonance) {
    auto s = resonant_spec();
    s.delta = 1e-6;
    EXPECT_THROW(optimize_cycle_duration(s), ResonanceMissError);
}

TEST(Optimizer, OffResonanceDriveMissesWithDiagnostics) {
    auto s = resonant_spec();
    s.omega_a0 = 4.0;  // undriven minimum of |C|^2 is 9/13
    s.nu = 1.0;        // far from sqrt(13)
    try {
        optimize_cycle_duration(s);
        FAIL() << "expected a resonance miss";
    } catch (const ResonanceMissError& e) {
        EXPECT_NE(std::string(e.what()).find("window"), std::string::npos);
    }
}

// On resonance |C|^2 is a fast carrier under a slow envelope. Strobed at
// t_k = 2 pi k / nu the carrier phase is fixed and |C(t_k)|^2 ~ cos^2(delta t / nu),
// so the first zero of the strobed envelope is located by a signed square root.
TEST(Optimizer, MathieuEnvelopeZero) {
    test::Gen gen(5);
    for (int i = 0; i < 8; ++i) {
        CycleSpec s;
        s.omega_b0 = gen.uniform(0.5, 2.0);
        s.omega_a0 = s.omega_b0 + gen.uniform(0.5, 3.0);
        s.delta = gen.uniform(0.1, 0.25);
        s.nu = resonance_frequency(s.omega_a0, s.omega_b0);
        const double est = estimate_cycle_duration(s);

        const double period = 2.0 * pi / s.nu;
        const auto strobes = static_cast<std::size_t>(1.5 * est / period);
        EvolveOptions opts;
        for (std::size_t k = 1; k <= strobes; ++k) opts.output_times.push_back(period * k);
        const auto traj = evolve_modes(s.profile(), period * strobes, opts);
        std::size_t k_min = 1;
        for (std::size_t k = 1; k < traj.size(); ++k) {
            if (std::norm(traj.samples[k].C) < std::norm(traj.samples[k_min].C)) k_min = k;
        }
        ASSERT_GT(k_min, 0u);
        ASSERT_LT(k_min + 1, traj.size());
        const double e0 = std::abs(traj.samples[k_min].C);
        const double before = std::abs(traj.samples[k_min - 1].C);
        const double after = std::abs(traj.samples[k_min + 1].C);
        const std::size_t k_other = before < after ? k_min - 1 : k_min + 1;
        const double e1 = std::min(before, after);
        const double zero = traj.times[k_min] + (traj.times[k_other] - traj.times[k_min]) * e0 / (e0 + e1);
        EXPECT_NEAR(zero, est, 0.05 * est) << "delta=" << s.delta << " nu=" << s.nu;
    }
}

TEST(Cycle, ZeroDurationDoesNothing) {
    const auto r = run_photonic_cycle(resonant_spec(), 0.0);
    EXPECT_EQ(r.W, 0.0);
    EXPECT_EQ(r.n_a_final, r.n_a_initial);
    EXPECT_TRUE(r.zero_heat);
    EXPECT_DOUBLE_EQ(r.eta, 1.0 - 1.0 / 3.0);
}

TEST(Cycle, EqualQuantaProduceNoWork) {
    CycleSpec s = resonant_spec();
    s.omega_b0 = s.omega_a0 * s.T_c / s.T_h;
    s.nu = resonance_frequency(s.omega_a0, s.omega_b0);
    for (double t_c : {1.0, 7.3, 22.0}) {
        EXPECT_NEAR(run_photonic_cycle(s, t_c).W, 0.0, 1e-8);
    }
}

TEST(Cycle, FullSwapWork) {
    // q = 0.5, p = 1.0, omega_a0 - omega_b0 = 0.5
    CycleSpec s;
    s.omega_a0 = 1.0;
    s.omega_b0 = 0.5;
    s.T_h = 2.0;
    s.T_c = 0.5;
    s.delta = 0.1;
    s.nu = resonance_frequency(s.omega_a0, s.omega_b0);
    const auto opt = optimize_cycle_duration(s);
    const auto r = run_photonic_cycle(s, opt.t_c);
    EXPECT_NEAR(r.W_alt, 0.479758 * r.d_sq, 1e-6);
    EXPECT_NEAR(r.W, r.W_alt, 1e-8);
    EXPECT_GT(r.d_sq, 0.99);
    EXPECT_LE(std::abs(r.frequency_offset), s.delta);
}

TEST(Cycle, RandomCyclesObeyEfficiencyAndWorkLaws) {
    test::Gen gen(23);
    int checked = 0;
    while (checked < 50) {
        CycleSpec s;
        s.omega_b0 = gen.uniform(0.3, 3.0);
        s.omega_a0 = s.omega_b0 + gen.uniform(0.1, 3.0);
        s.T_c = gen.uniform(0.2, 2.0);
        s.T_h = s.T_c + gen.uniform(0.1, 4.0);
        s.delta = gen.uniform(0.0, 0.5);
        s.nu = gen.uniform(0.5, 4.0);
        const auto r = run_photonic_cycle(s, gen.uniform(0.5, 30.0));
        EXPECT_GE(r.d_sq, 0.0);
        EXPECT_LE(r.d_sq, 1.0 + 1e-10);
        EXPECT_NEAR(r.W, r.W_alt, 1e-8);
        EXPECT_NEAR(r.W, r.Q * r.eta, 1e-14);
        if (r.zero_heat) continue;
        EXPECT_NEAR(r.eta, 1.0 - s.omega_b0 / s.omega_a0, 1e-10);
        if (r.d_sq > 1e-6) {
            const double gap = s.p() - s.q();
            if (std::abs(gap) > 1e-9) {
                EXPECT_EQ(r.W > 0.0, gap > 0.0);
            }
        }
        if (r.W > 0.0) {
            EXPECT_LE(r.eta, r.eta_carnot + 1e-12);
        }
        ++checked;
    }
}

TEST(Cycle, RejectsInvalidSpecs) {
    auto s = resonant_spec();
    s.T_h = 0.5;
    EXPECT_THROW(run_photonic_cycle(s, 1.0), DomainError);
    s = resonant_spec();
    s.omega_b0 = 4.0;
    EXPECT_THROW(run_photonic_cycle(s, 1.0), DomainError);
    s = resonant_spec();
    EXPECT_THROW(run_photonic_cycle(s, -1.0), DomainError);
    s.integrator.tol = 1.0;
    EXPECT_THROW(run_photonic_cycle(s, 1.0), DomainError);
}

TEST(CarnotSweep, SignChangeAtBoundaryAndCeiling) {
    SweepSpec sweep;  // omega_a0 = 3, T_h = 2, T_c = 1: boundary at omega_b = 1.5
    sweep.threads = 2;
    std::vector<double> grid;
    for (int i = 1; i <= 11; ++i) grid.push_back(0.25 * i);  // 0.25 .. 2.75
    const auto out = carnot_sweep(sweep, grid);
    ASSERT_EQ(out.rows.size(), grid.size());
    ASSERT_TRUE(out.sign_change.has_value());
    EXPECT_TRUE(out.sign_change_brackets_boundary);
    EXPECT_DOUBLE_EQ(out.omega_b_boundary, 1.5);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& row = out.rows[i];
        EXPECT_EQ(row.omega_b, grid[i]);
        if (row.omega_b == 1.5) {
            EXPECT_NEAR(row.W, 0.0, 1e-8);
        }
        if (row.omega_b > 1.5) {
            EXPECT_GT(row.W, 0.0);
            EXPECT_LE(row.eta, out.eta_carnot + 1e-12);
        }
        if (row.omega_b < 1.5) {
            EXPECT_LT(row.W, 0.0);
        }
        if (row.omega_b == 2.25) {
            EXPECT_NEAR(row.eta, 0.25, 1e-15);
        }
    }
    // Just above the boundary the efficiency approaches Carnot from below.
    const auto near = carnot_sweep(sweep, {1.5001});
    EXPECT_GT(near.rows[0].W, 0.0);
    EXPECT_LT(near.rows[0].eta, out.eta_carnot);
    EXPECT_NEAR(near.rows[0].eta, out.eta_carnot, 1e-4);
}

TEST(CarnotSweep, ResultsIndependentOfThreadCount) {
    SweepSpec sweep;
    const std::vector<double> grid{0.7, 1.2, 1.9, 2.4};
    sweep.threads = 1;
    const auto serial = carnot_sweep(sweep, grid);
    sweep.threads = 4;
    const auto threaded = carnot_sweep(sweep, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_EQ(serial.rows[i].W, threaded.rows[i].W);
        EXPECT_EQ(serial.rows[i].t_c, threaded.rows[i].t_c);
    }
}

TEST(CarnotSweep, RejectsGridOutsideRange) {
    SweepSpec sweep;
    EXPECT_THROW(carnot_sweep(sweep, {0.5, 3.0}), DomainError);
    EXPECT_THROW(carnot_sweep(sweep, {0.0}), DomainError);
}

TEST(ZeroPower, ConservedWhenQuantaMatch) {
    test::Gen gen(31);
    for (int i = 0; i < 10; ++i) {
        CycleSpec s;  // q = p = 0.7
        s.T_h = gen.uniform(1.0, 3.0);
        s.T_c = gen.uniform(0.2, 0.9);
        s.omega_a0 = 0.7 * s.T_h;
        s.omega_b0 = 0.7 * s.T_c;
        s.delta = gen.uniform(0.0, 0.3);
        s.nu = gen.uniform(0.5, 4.0);
        EXPECT_LE(verify_zero_power_conservation(s, 30.0), 1e-8);
    }
}

TEST(ZeroPower, NegativeControlAndTrivialHorizon) {
    CycleSpec s;
    s.omega_a0 = s.omega_b0 = 1.0;
    s.delta = 0.0;
    s.T_h = 2.0;
    s.T_c = 0.5;
    EXPECT_GT(verify_zero_power_conservation(s, 2.0), 0.1);
    EXPECT_EQ(verify_zero_power_conservation(resonant_spec(), 0.0), 0.0);
}

// After the three-mode swap the oscillator a and the collective mode B1 hold
// thermal states with exchanged quanta; running the engine on them behaves as
// an ordinary hot/cold pair.
TEST(WorkEquivalence, PostSwapCollectiveStateDrivesEngine) {
    for (auto [q, p] : {std::pair{0.5, 1.0}, std::pair{1.2, 0.4}}) {
        const double ts = three_mode_swap_time();
        const auto states = simulate_three_mode(q, p, ts, EvolveOptions{});
        const auto& end = states.back();
        const double q_eff = std::log1p(1.0 / end.n_B1);
        const double p_eff = std::log1p(1.0 / end.n_a);
        EXPECT_NEAR(q_eff, q, 1e-7);
        EXPECT_NEAR(p_eff, p, 1e-7);

        CycleSpec s;
        s.omega_a0 = 2.0;
        s.omega_b0 = 1.0;
        s.delta = 0.2;
        s.nu = resonance_frequency(2.0, 1.0);
        s.T_h = s.omega_a0 / q_eff;
        s.T_c = s.omega_b0 / p_eff;
        if (!(s.T_h > s.T_c)) continue;
        const auto r = run_photonic_cycle(s, optimize_cycle_duration(s).t_c);
        EXPECT_EQ(r.W > 0.0, p_eff > q_eff);
    }
}

}  // namespace
