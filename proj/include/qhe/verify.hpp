// verify.hpp - Seeded invariant suites run by `qhe verify`
//
// Every suite draws its random cases from its own stream derived from the
// seed, so adding a suite never shifts another one's cases.

#pragma once

#include "qhe/counter_rotating.hpp"
#include "qhe/mode_dynamics.hpp"
#include "qhe/observables.hpp"
#include "qhe/photonic_engine.hpp"
#include "qhe/sampling.hpp"
#include "qhe/three_mode.hpp"
#include "qhe/tls_engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace qhe {

struct SuiteResult {
    std::string name;
    bool passed = false;
    double worst = 0.0;   // largest deviation as a fraction of its allowance; > 1 fails
    std::string detail;
    double seconds = 0.0;
};

namespace detail {

// Tracks deviations relative to their allowances; a failed law counts as infinite.
struct Gauge {
    double worst = 0.0;
    std::string first_failure;

    void measure(double deviation, double limit, const std::string& where) {
        const double ratio = std::isnan(deviation) ? INFINITY : deviation / limit;
        if (!(ratio <= 1.0) && first_failure.empty()) first_failure = where;
        worst = std::max(worst, ratio);
    }
    void require(bool ok, const std::string& where) { measure(ok ? 0.0 : INFINITY, 1.0, where); }
};

inline std::string at(const char* what, double value) {
    std::ostringstream s;
    s << what << "=" << value;
    return s.str();
}

inline void suite_rabi(Sampler&, const ode::Options& integ, Gauge& g) {
    EvolveOptions opts;
    opts.integrator = integ;
    opts.output_times = uniform_grid(10.0 * std::numbers::pi, 2001);
    const auto traj = evolve_modes(FrequencyProfile::constant(1.0, 1.0), 10.0 * std::numbers::pi, opts);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto ref = rabi_closed_form(1.0, traj.times[i]);
        const auto& m = traj.samples[i];
        const double e = std::max({std::abs(m.C - ref.C), std::abs(m.D - ref.D), std::abs(m.E - ref.E),
                                   std::abs(m.F - ref.F)});
        g.measure(e, 1e-8, at("t", traj.times[i]));
    }
}

inline void suite_unitarity(Sampler& rng, const ode::Options& integ, Gauge& g) {
    for (int i = 0; i < 20; ++i) {
        const auto profile = rng.modulated_profile();
        EvolveOptions opts;
        opts.integrator = integ;
        g.measure(max_unitarity_residual(evolve_modes(profile, 30.0, opts)), 1e-8, at("profile", i));
    }
}

inline void suite_swap(Sampler& rng, const ode::Options& integ, Gauge& g) {
    for (int i = 0; i < 5; ++i) {
        const double omega = rng.uniform(0.5, 3.0);
        const ThermalInit init{rng.uniform(0.2, 2.0), rng.uniform(0.2, 2.0)};
        const auto profile = FrequencyProfile::constant(omega, omega);
        EvolveOptions opts;
        opts.integrator = integ;
        opts.output_times = uniform_grid(std::numbers::pi, 201);
        const auto traj = evolve_modes(profile, std::numbers::pi, opts);
        const auto occ = occupations_from_modes(traj, init);
        const auto temps = effective_temperatures(occ, profile);
        const std::size_t half = 100;  // t = pi/2
        const double T_a0 = temps.T_a.front(), T_b0 = temps.T_b.front();
        g.measure(std::abs(temps.T_a[half] - T_b0), 1e-8, at("case", i));
        g.measure(std::abs(temps.T_b[half] - T_a0), 1e-8, at("case", i));
        if (std::abs(init.q - init.p) > 1e-3) {
            g.require(!temperature_crossings(temps).empty(), at("no crossing, case", i));
        }
    }
}

inline void suite_cross_pipeline(Sampler& rng, const ode::Options& integ, Gauge& g) {
    for (int i = 0; i < 5; ++i) {
        const auto profile = rng.modulated_profile();
        const ThermalInit init{rng.uniform(0.2, 3.0), rng.uniform(0.2, 3.0)};
        EvolveOptions opts;
        opts.integrator = integ;
        opts.output_times = uniform_grid(20.0, 401);
        const auto a = occupations_from_modes(evolve_modes(profile, 20.0, opts), init);
        const auto b = moment_ode_oracle(profile, init, 20.0, opts);
        for (std::size_t k = 0; k < a.size(); ++k) {
            g.measure(std::max(std::abs(a.n_a[k] - b.n_a[k]), std::abs(a.n_b[k] - b.n_b[k])), 1e-7,
                      at("profile", i));
        }
    }
}

inline void suite_three_mode(Sampler& rng, const ode::Options& integ, Gauge& g) {
    for (int i = 0; i < 4; ++i) {
        const double q = i == 0 ? std::log(2.0) : rng.uniform(0.2, 2.0);
        const double p = i == 0 ? std::log(3.0) : rng.uniform(0.2, 2.0);
        EvolveOptions opts;
        opts.integrator = integ;
        const auto states = simulate_three_mode(q, p, three_mode_swap_time(), opts);
        const double expected = 0.5 * (bose_occupation(q) - bose_occupation(p));
        g.measure(std::abs(states.back().coherence_bc - complex(expected, 0.0)), 1e-6, at("q", q));
        for (const auto& s : states) g.measure(std::abs(s.n_B2 - bose_occupation(p)), 1e-9, at("q", q));
    }
}

inline void suite_photonic(Sampler& rng, const ode::Options& integ, Gauge& g) {
    for (int i = 0; i < 20; ++i) {
        CycleSpec s;
        s.omega_b0 = rng.uniform(0.3, 3.0);
        s.omega_a0 = s.omega_b0 + rng.uniform(0.1, 3.0);
        s.T_c = rng.uniform(0.2, 2.0);
        s.T_h = s.T_c + rng.uniform(0.1, 4.0);
        s.delta = rng.uniform(0.0, 0.5);
        s.nu = rng.uniform(0.5, 4.0);
        s.integrator = integ;
        const auto r = run_photonic_cycle(s, rng.uniform(0.5, 30.0));
        const std::string where = at("cycle", i);
        g.measure(std::abs(r.W - r.W_alt), 1e-8, where);
        if (r.zero_heat) continue;
        g.measure(std::abs(r.eta - (1.0 - s.omega_b0 / s.omega_a0)), 1e-10, where);
        if (r.W > 0.0) g.require(r.eta <= r.eta_carnot + 1e-12, where);
        if (r.d_sq > 1e-6 && std::abs(s.p() - s.q()) > 1e-9) g.require((r.W > 0.0) == (s.p() > s.q()), where);
    }
}

inline void suite_resonant_duration(Sampler&, const ode::Options& integ, Gauge& g) {
    CycleSpec s;
    s.integrator = integ;
    const auto opt = optimize_cycle_duration(s);
    g.measure(std::abs(opt.t_c - 22.26), 0.10, at("t_c", opt.t_c));
    g.measure(opt.abs_C, 0.02, at("abs_C", opt.abs_C));
}

inline void suite_tls(Sampler& rng, const ode::Options& integ, Gauge& g) {
    for (int i = 0; i < 10; ++i) {
        CycleSpec s;
        s.omega_b0 = rng.uniform(0.3, 3.0);
        s.omega_a0 = s.omega_b0 + rng.uniform(0.1, 3.0);
        s.T_c = rng.uniform(0.2, 2.0);
        s.T_h = s.T_c + rng.uniform(0.1, 4.0);
        s.delta = rng.uniform(0.0, 0.4);
        s.nu = resonance_frequency(s.omega_a0, s.omega_b0);
        s.integrator = integ;
        const auto r = run_tls_cycle(s, rng.uniform(0.5, 30.0));  // throws on a bracket escape
        const std::string where = at("cycle", i);
        g.measure(std::abs(r.W - r.W_alt), 1e-9, where);
        if (r.n_a_initial > r.n_b_initial) g.require(r.W >= -1e-12, where);
        if (r.n_a_initial < r.n_b_initial) g.require(r.W <= 1e-12, where);
    }
    EvolveOptions opts;
    opts.integrator = integ;
    opts.output_times = uniform_grid(20.0, 10000);
    const auto traj = evolve_two_qubits(rng.modulated_profile(), 2.0, 0.5, 20.0, opts);
    g.measure(verify_atom_identity(traj).max_residual(), 1e-5, "identity residual");
}

inline void suite_counter_rotating(Sampler& rng, const ode::Options& integ, Gauge& g) {
    for (int i = 0; i < 20; ++i) {
        const double t_c = rng.uniform(0.5, 6.0);
        const auto profile = rng.closed_tabulated_profile(t_c);
        const double na0 = rng.uniform(0.0, 3.0), nb0 = rng.uniform(0.0, 3.0);
        EvolveOptions opts;
        opts.integrator = integ;
        opts.output_times = uniform_grid(t_c, 201);
        const auto traj = evolve_cr_moments(profile, na0, nb0, t_c, opts);
        const std::string where = at("cycle", i);
        for (const auto& s : traj.states) {
            g.measure(std::abs((s.n_a - s.n_b) - (na0 - nb0)), 1e-9, where);
            g.require(s.n_a + s.n_b >= na0 + nb0 - 1e-9, where);
        }
        const auto& end = traj.states.back();
        const double W = profile.omega_a0() * (na0 - end.n_a) + profile.omega_b0() * (nb0 - end.n_b);
        g.require(W <= 1e-9, where);
    }
    EvolveOptions opts;
    opts.integrator = integ;
    opts.output_times = uniform_grid(2.0, 9);
    for (const auto& s : evolve_cr_moments(FrequencyProfile::constant(0.0, 0.0), 0.0, 0.0, 2.0, opts).states) {
        g.measure(std::abs(s.n_a - fock_oracle_cr_auto(0.0, 0.0, s.t).n_a), 1e-7, at("fock t", s.t));
    }
}

struct Suite {
    const char* name;
    void (*run)(Sampler&, const ode::Options&, Gauge&);
};

inline const std::vector<Suite>& suites() {
    static const std::vector<Suite> all = {
        {"rabi", suite_rabi},
        {"unitarity", suite_unitarity},
        {"swap", suite_swap},
        {"cross-pipeline", suite_cross_pipeline},
        {"three-mode", suite_three_mode},
        {"photonic-efficiency", suite_photonic},
        {"resonant-duration", suite_resonant_duration},
        {"tls", suite_tls},
        {"counter-rotating", suite_counter_rotating},
    };
    return all;
}

}  // namespace detail

// Runs every suite; a suite that throws is recorded as failed with the message,
// including invalid integrator settings. Results depend only on the seed and
// the integrator settings.
inline std::vector<SuiteResult> verify_all(std::uint64_t seed, const ode::Options& integrator = {}) {
    std::vector<SuiteResult> out;
    std::uint64_t index = 0;
    for (const auto& suite : detail::suites()) {
        Sampler rng(seed * 1000003u + index++);
        detail::Gauge gauge;
        SuiteResult r;
        r.name = suite.name;
        const auto start = std::chrono::steady_clock::now();
        try {
            suite.run(rng, integrator, gauge);
            r.passed = gauge.first_failure.empty();
            r.detail = r.passed ? "" : "first failure at " + gauge.first_failure;
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("error: ") + e.what();
            gauge.worst = INFINITY;
        }
        r.worst = gauge.worst;
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.push_back(r);
    }
    return out;
}

}  // namespace qhe
