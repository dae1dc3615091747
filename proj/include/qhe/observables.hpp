// observables.hpp - Occupations, energies and effective temperatures
//
// For rho(t) = N exp(-q A^dag A) exp(-p B^dag B) the original mode operators are
// recovered by the inverse (conjugate transpose) of the mode transform:
//   a = c A + d B  with c = C*, d = F*,     b = f A + e B  with f = D*, e = E*,
// so n_a(t) = |C|^2 n(q) + |F|^2 n(p) and n_b(t) = |D|^2 n(q) + |E|^2 n(p).

#pragma once

#include "qhe/errors.hpp"
#include "qhe/mode_dynamics.hpp"
#include "qhe/ode.hpp"
#include "qhe/profile.hpp"

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qhe {

// q = omega_a / T_a and p = omega_b / T_b, both dimensionless.
struct ThermalInit {
    double q;
    double p;

    void validate() const {
        detail::require(std::isfinite(q) && q > 0.0, "q must be > 0");
        detail::require(std::isfinite(p) && p > 0.0, "p must be > 0");
    }
};

struct OccupationSeries {
    std::vector<double> times;
    std::vector<double> n_a;
    std::vector<double> n_b;

    std::size_t size() const noexcept { return times.size(); }
};

inline double bose_occupation(double x) {
    detail::require(!std::isnan(x) && x > 0.0, "bose_occupation needs x > 0");
    return 1.0 / std::expm1(x);
}

inline double effective_temperature(double energy, double omega) {
    detail::require(std::isfinite(omega) && omega > 0.0, "omega must be > 0");
    detail::require(!std::isnan(energy) && energy > 0.0, "energy must be > 0");
    if (energy < 1e-300) return 0.0;  // frozen mode
    return omega / std::log1p(omega / energy);
}

struct ModeEnergies {
    double a;
    double b;
};

// Closed form for equal constant frequencies omega (g = 1).
inline ModeEnergies mode_energies_equal_frequency(const ThermalInit& init, double omega, double t) {
    init.validate();
    detail::require(std::isfinite(omega) && omega > 0.0, "omega must be > 0");
    const double c2 = std::cos(t) * std::cos(t);
    const double s2 = std::sin(t) * std::sin(t);
    const double nq = bose_occupation(init.q);
    const double np = bose_occupation(init.p);
    return {omega * (c2 * nq + s2 * np), omega * (c2 * np + s2 * nq)};
}

namespace detail {

// Tolerance on | |F| - |D| |, which unitarity pins to the integration accuracy.
inline double inverse_coefficient_tolerance(const ModeTrajectory& traj) {
    return std::max(1e-9, 100.0 * traj.nominal_tol());
}

}  // namespace detail

struct Occupations {
    double n_a;
    double n_b;
};

inline Occupations occupations_at(const ModeCoefficients& m, double n_q, double n_p) {
    return {std::norm(m.C) * n_q + std::norm(m.F) * n_p,
            std::norm(m.D) * n_q + std::norm(m.E) * n_p};
}

inline OccupationSeries occupations_from_modes(const ModeTrajectory& traj, const ThermalInit& init) {
    init.validate();
    const double n_q = bose_occupation(init.q);
    const double n_p = bose_occupation(init.p);
    const double check_tol = detail::inverse_coefficient_tolerance(traj);

    OccupationSeries out;
    out.times = traj.times;
    out.n_a.reserve(traj.size());
    out.n_b.reserve(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto& m = traj.samples[i];
        const double gap = std::abs(std::abs(m.F) - std::abs(m.D));
        if (gap > check_tol) {
            throw NumericalError("inverse coefficient |d| = |F| disagrees with |D| by " +
                                 std::to_string(gap) + " at t=" + std::to_string(traj.times[i]));
        }
        const auto n = occupations_at(m, n_q, n_p);
        out.n_a.push_back(n.n_a);
        out.n_b.push_back(n.n_b);
    }
    return out;
}

// Independent route: closed first-moment equations for n_a, n_b and x = <a^dag b>
//   dn_a/dt = 2 g Im x,   dn_b/dt = -2 g Im x,
//   dx/dt   = i (Delta(t) x + g (n_b - n_a)),
// integrated in the Schrodinger picture from the thermal product state (x = 0).
inline OccupationSeries moment_ode_oracle(const FrequencyProfile& profile, const ThermalInit& init,
                                          double t_end, const EvolveOptions& options = {}) {
    init.validate();
    detail::check_evolve_inputs(profile, t_end, options.integrator, options.coupling);
    const double g = options.coupling;
    auto rhs = [&](double t, const ode::State<4>& y, ode::State<4>& dy) {
        const double delta = profile.detuning(t);
        dy[0] = 2.0 * g * y[3];
        dy[1] = -2.0 * g * y[3];
        dy[2] = -delta * y[3];
        dy[3] = delta * y[2] + g * (y[1] - y[0]);
    };
    ode::State<4> y{bose_occupation(init.q), bose_occupation(init.p), 0.0, 0.0};
    OccupationSeries out;
    ode::integrate<4>(rhs, y, 0.0, t_end, std::span<const double>(options.output_times),
                      options.integrator, [&](double t, const ode::State<4>& s) {
                          out.times.push_back(t);
                          out.n_a.push_back(s[0]);
                          out.n_b.push_back(s[1]);
                      });
    return out;
}

struct TemperatureSeries {
    std::vector<double> times;
    std::vector<double> T_a;
    std::vector<double> T_b;
};

// Effective temperatures at the instantaneous frequencies omega_a(t), omega_b(t).
inline TemperatureSeries effective_temperatures(const OccupationSeries& occ,
                                                const FrequencyProfile& profile) {
    TemperatureSeries out;
    out.times = occ.times;
    for (std::size_t i = 0; i < occ.size(); ++i) {
        const auto w = profile.at(occ.times[i]);
        out.T_a.push_back(effective_temperature(w.a * occ.n_a[i], w.a));
        out.T_b.push_back(effective_temperature(w.b * occ.n_b[i], w.b));
    }
    return out;
}

// Times where T_a - T_b changes sign, located by linear interpolation.
inline std::vector<double> temperature_crossings(const TemperatureSeries& temps) {
    std::vector<double> out;
    for (std::size_t i = 1; i < temps.times.size(); ++i) {
        const double d0 = temps.T_a[i - 1] - temps.T_b[i - 1];
        const double d1 = temps.T_a[i] - temps.T_b[i];
        if (d0 == 0.0) {
            if (i == 1) out.push_back(temps.times[0]);
            continue;
        }
        if ((d0 < 0.0) != (d1 < 0.0) || d1 == 0.0) {
            const double s = d0 / (d0 - d1);
            out.push_back(temps.times[i - 1] + s * (temps.times[i] - temps.times[i - 1]));
        }
    }
    return out;
}

struct Interval {
    double begin;
    double end;
};

// Stretches where the colder oscillator cools while the hotter one heats up,
// i.e. where heat appears to flow from cold to hot.
inline std::vector<Interval> apparent_reverse_flow_intervals(const TemperatureSeries& temps) {
    std::vector<Interval> out;
    bool open = false;
    for (std::size_t i = 1; i < temps.times.size(); ++i) {
        const bool a_colder = temps.T_a[i - 1] < temps.T_b[i - 1];
        const auto& cold = a_colder ? temps.T_a : temps.T_b;
        const auto& hot = a_colder ? temps.T_b : temps.T_a;
        const bool reverse = cold[i] < cold[i - 1] && hot[i] > hot[i - 1];
        if (reverse && !open) {
            out.push_back({temps.times[i - 1], temps.times[i]});
            open = true;
        } else if (reverse) {
            out.back().end = temps.times[i];
        } else {
            open = false;
        }
    }
    return out;
}

}  // namespace qhe
