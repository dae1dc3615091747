// three_mode.hpp - Oscillator a coupled to two mutually uncoupled modes b, c
//
// With B1 = (b + c)/sqrt(2) and B2 = (b - c)/sqrt(2) only B1 couples to a,
// with strength sqrt(2) g; B2 stays in its initial thermal state. The pair
// (a, B1) is therefore the two-mode problem of mode_dynamics.hpp.

#pragma once

#include "qhe/mode_dynamics.hpp"
#include "qhe/observables.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace qhe {

struct ThreeModeState {
    double t;
    double n_a;
    double n_B1;
    double n_B2;
    complex coherence_bc;  // <b c^dag>
};

// <b c^dag> = (1/2) <(B1 + B2)(B1^dag - B2^dag)> = (n_B1 - n_B2) / 2, since B2 is
// never correlated with B1. At the swap time this is (n(q) - n(p)) / 2; at other
// times the same expression extends it.
inline complex coherence_bc(const ThreeModeState& s) {
    return {0.5 * (s.n_B1 - s.n_B2), 0.0};
}

// First time at which a and B1 have fully exchanged their thermal states.
inline double three_mode_swap_time(double coupling = 1.0) {
    return std::numbers::pi / (2.0 * std::numbers::sqrt2 * coupling);
}

// q = omega / T_h for mode a, p = omega / T_c for modes b and c.
inline std::vector<ThreeModeState> simulate_three_mode(double q, double p, double t_end,
                                                       EvolveOptions options = {},
                                                       double omega = 1.0) {
    const ThermalInit init{q, p};
    init.validate();
    detail::require(std::isfinite(omega) && omega > 0.0, "omega must be > 0");
    const double g = options.coupling;
    options.coupling = std::numbers::sqrt2 * g;
    const auto traj = evolve_modes(FrequencyProfile::constant(omega, omega), t_end, options);
    const auto occ = occupations_from_modes(traj, init);
    const double n_p = bose_occupation(p);

    std::vector<ThreeModeState> out;
    out.reserve(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        ThreeModeState s{traj.times[i], occ.n_a[i], occ.n_b[i], n_p, {}};
        s.coherence_bc = coherence_bc(s);
        out.push_back(s);
    }
    return out;
}

inline std::vector<ThreeModeState> simulate_three_mode(double q, double p, double t_end, double tol) {
    EvolveOptions options;
    options.integrator.tol = tol;
    return simulate_three_mode(q, p, t_end, options);
}

}  // namespace qhe
