// cycle.hpp - Engine cycle parameters and per-cycle results shared by all engines

#pragma once

#include "qhe/errors.hpp"
#include "qhe/ode.hpp"
#include "qhe/profile.hpp"

#include <cmath>

namespace qhe {

struct CycleSpec {
    double omega_a0 = 3.0;
    double omega_b0 = 1.0;
    double T_h = 2.0;
    double T_c = 1.0;
    double delta = 0.2;        // detuning drive amplitude
    double nu = 2.8284271247461903;  // detuning drive angular frequency
    double t_end = 1000.0;     // search horizon for cycle-duration optimization
    ode::Options integrator{};

    // Hot oscillator starts at q = omega_a0 / T_h, cold one at p = omega_b0 / T_c.
    double q() const noexcept { return omega_a0 / T_h; }
    double p() const noexcept { return omega_b0 / T_c; }
    double carnot_efficiency() const noexcept { return 1.0 - T_c / T_h; }

    FrequencyProfile profile() const {
        return delta > 0.0 ? FrequencyProfile::sinusoidal(omega_a0, omega_b0, delta, nu)
                           : FrequencyProfile::constant(omega_a0, omega_b0);
    }

    // Checks only what the frequency modulation needs.
    void validate_modulation() const {
        detail::require(std::isfinite(omega_a0) && omega_a0 > 0.0, "omega_a0 must be > 0");
        detail::require(std::isfinite(omega_b0) && omega_b0 > 0.0, "omega_b0 must be > 0");
        detail::require(std::isfinite(delta) && delta >= 0.0, "delta must be >= 0");
        detail::require(delta == 0.0 || (std::isfinite(nu) && nu > 0.0),
                        "nu must be > 0 when delta > 0");
        detail::require(std::isfinite(t_end) && t_end > 0.0, "t_end (search horizon) must be > 0");
        integrator.validate();
    }

    void validate() const {
        validate_modulation();
        detail::require(std::isfinite(T_c) && T_c > 0.0, "T_c must be > 0");
        detail::require(std::isfinite(T_h) && T_h > T_c, "T_h must exceed T_c");
        detail::require(omega_a0 > omega_b0, "omega_a0 must exceed omega_b0");
    }
};

struct EngineReport {
    double W = 0.0;            // work per cycle, from the occupation change
    double W_alt = 0.0;        // same work through an independent route
    double Q = 0.0;            // heat drawn from the hot reservoir
    double eta = 0.0;
    double eta_carnot = 0.0;
    double t_c = 0.0;
    double d_sq = 0.0;         // |d(t_c)|^2, excitation fraction swapped
    double n_a_initial = 0.0;
    double n_b_initial = 0.0;
    double n_a_final = 0.0;
    double n_b_final = 0.0;
    double frequency_offset = 0.0;  // omega_a(t_c) - omega_a0
    bool zero_heat = false;
};

namespace detail {

// W = (omega_a - omega_b)(n_a(0) - n_a(t_c)), Q = omega_a (n_a(0) - n_a(t_c)).
// Efficiency is W / Q, or 1 - omega_b/omega_a flagged as zero-heat when Q = 0.
inline void fill_work_and_heat(EngineReport& r, double omega_a0, double omega_b0) {
    const double drawn = r.n_a_initial - r.n_a_final;
    r.W = (omega_a0 - omega_b0) * drawn;
    r.Q = omega_a0 * drawn;
    r.zero_heat = drawn == 0.0;
    r.eta = r.zero_heat ? 1.0 - omega_b0 / omega_a0 : r.W / r.Q;
}

}  // namespace detail

}  // namespace qhe
