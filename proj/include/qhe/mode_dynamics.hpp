// mode_dynamics.hpp - Evolution of the mode coefficients C, D, E, F
//
// A thermal two-mode state evolves as rho(t) = rho_0(A(t), B(t)) with
//   A(t) = C(t) a + D(t) b,   B(t) = E(t) b + F(t) a,
// where the coefficients obey the time-reversed Heisenberg equations
//   i dC/dt = -omega_a C - g D,   i dD/dt = -omega_b D - g C,
//   i dE/dt = -omega_b E - g F,   i dF/dt = -omega_a F - g E,
// with C(0) = E(0) = 1 and D(0) = F(0) = 0.

#pragma once

#include "qhe/errors.hpp"
#include "qhe/ode.hpp"
#include "qhe/profile.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

namespace qhe {

using complex = std::complex<double>;

struct ModeCoefficients {
    complex C{1.0, 0.0};
    complex D{0.0, 0.0};
    complex E{1.0, 0.0};
    complex F{0.0, 0.0};

    static ModeCoefficients identity() { return {}; }
};

struct UnitarityResidual {
    double r1;  // | |C|^2 + |D|^2 - 1 |
    double r2;  // | |E|^2 + |F|^2 - 1 |
    double r3;  // | C F* + D E* |

    double max() const noexcept { return std::max({r1, r2, r3}); }
};

inline UnitarityResidual unitarity_residual(const ModeCoefficients& m) {
    return {std::abs(std::norm(m.C) + std::norm(m.D) - 1.0),
            std::abs(std::norm(m.E) + std::norm(m.F) - 1.0),
            std::abs(m.C * std::conj(m.F) + m.D * std::conj(m.E))};
}

struct ModeTrajectory {
    std::vector<double> times;
    std::vector<ModeCoefficients> samples;
    FrequencyProfile profile = FrequencyProfile::constant(1.0, 1.0);
    double coupling = 1.0;
    ode::Options integrator;

    std::size_t size() const noexcept { return times.size(); }
    const ModeCoefficients& back() const { return samples.back(); }

    // Accuracy the samples are expected to honor; fixed-step runs get a
    // nominal value since the step, not a tolerance, controls them.
    double nominal_tol() const noexcept {
        return integrator.is_fixed() ? 1e-8 : integrator.tol;
    }
};

struct EvolveOptions {
    ode::Options integrator;
    // When non-empty, samples are taken exactly at these times (plus t = 0 and
    // t_end) instead of at every accepted step.
    std::vector<double> output_times;
    double coupling = 1.0;
};

namespace detail {

using ModeState = ode::State<8>;

inline ModeState pack(const ModeCoefficients& m) {
    return {m.C.real(), m.C.imag(), m.D.real(), m.D.imag(),
            m.E.real(), m.E.imag(), m.F.real(), m.F.imag()};
}

inline ModeCoefficients unpack(const ModeState& y) {
    return {{y[0], y[1]}, {y[2], y[3]}, {y[4], y[5]}, {y[6], y[7]}};
}

struct ModeRhs {
    const FrequencyProfile* profile;
    double g;

    void operator()(double t, const ModeState& y, ModeState& dy) const {
        const auto w = profile->at(t);
        // d/dt X = i * (omega X + g Y)  ->  (Re, Im)' = (-(omega Im X + g Im Y), omega Re X + g Re Y)
        auto rot = [&](std::size_t x, std::size_t partner, double omega) {
            dy[x] = -(omega * y[x + 1] + g * y[partner + 1]);
            dy[x + 1] = omega * y[x] + g * y[partner];
        };
        rot(0, 2, w.a);  // C with D
        rot(2, 0, w.b);  // D with C
        rot(4, 6, w.b);  // E with F
        rot(6, 4, w.a);  // F with E
    }
};

inline void check_evolve_inputs(const FrequencyProfile& profile, double t_end,
                                const ode::Options& opts, double coupling) {
    require(std::isfinite(t_end) && t_end > 0.0, "t_end must be > 0");
    require(t_end <= profile.horizon(), "t_end exceeds the tabulated profile range");
    require(std::isfinite(coupling) && coupling > 0.0, "coupling must be > 0");
    opts.validate();
}

}  // namespace detail

// Propagates a coefficient set from t0 to t1 under the profile.
inline ModeCoefficients advance_modes(const FrequencyProfile& profile, const ModeCoefficients& start,
                                      double t0, double t1, const ode::Options& opts,
                                      double coupling = 1.0) {
    auto y = detail::pack(start);
    ode::integrate<8>(detail::ModeRhs{&profile, coupling}, y, t0, t1, opts);
    return detail::unpack(y);
}

inline ModeTrajectory evolve_modes(const FrequencyProfile& profile, double t_end,
                                   const EvolveOptions& options) {
    detail::check_evolve_inputs(profile, t_end, options.integrator, options.coupling);
    ModeTrajectory traj;
    traj.profile = profile;
    traj.coupling = options.coupling;
    traj.integrator = options.integrator;
    auto y = detail::pack(ModeCoefficients::identity());
    ode::integrate<8>(detail::ModeRhs{&profile, options.coupling}, y, 0.0, t_end,
                      std::span<const double>(options.output_times), options.integrator,
                      [&](double t, const detail::ModeState& s) {
                          traj.times.push_back(t);
                          traj.samples.push_back(detail::unpack(s));
                      });
    return traj;
}

inline ModeTrajectory evolve_modes(const FrequencyProfile& profile, double t_end, double tol) {
    EvolveOptions options;
    options.integrator.tol = tol;
    return evolve_modes(profile, t_end, options);
}

// Resonant closed form for omega_a = omega_b = omega and g = 1.
inline ModeCoefficients rabi_closed_form(double omega, double t) {
    detail::require(std::isfinite(omega) && omega > 0.0, "omega must be > 0");
    const complex phase = std::polar(1.0, omega * t);
    const complex c = phase * std::cos(t);
    const complex d = phase * complex(0.0, std::sin(t));
    return {c, d, c, d};
}

// Exact exponential of the constant coefficient matrix. Writing
// M = [[omega_a, g], [g, omega_b]] = wbar I + K with K^2 = Omega^2 I,
// exp(i M t) = e^{i wbar t} (cos(Omega t) I + i sin(Omega t)/Omega K).
// (C, D) = exp(iMt) (1, 0) and (F, E) = exp(iMt) (0, 1).
inline ModeCoefficients constant_profile_oracle(double omega_a, double omega_b, double t,
                                                double coupling = 1.0) {
    detail::require(std::isfinite(omega_a) && std::isfinite(omega_b) && std::isfinite(t),
                    "oracle inputs must be finite");
    const double wbar = 0.5 * (omega_a + omega_b);
    const double half_delta = 0.5 * (omega_a - omega_b);
    const double big_omega = std::hypot(coupling, half_delta);
    const complex phase = std::polar(1.0, wbar * t);
    const double cs = std::cos(big_omega * t);
    const double sn = std::sin(big_omega * t) / big_omega;
    const complex i{0.0, 1.0};
    ModeCoefficients m;
    m.C = phase * (cs + i * half_delta * sn);
    m.D = phase * i * coupling * sn;
    m.F = phase * i * coupling * sn;
    m.E = phase * (cs - i * half_delta * sn);
    return m;
}

inline std::vector<UnitarityResidual> unitarity_residuals(const ModeTrajectory& traj) {
    detail::require(!traj.samples.empty(), "trajectory is empty");
    std::vector<UnitarityResidual> out;
    out.reserve(traj.samples.size());
    for (const auto& s : traj.samples) out.push_back(unitarity_residual(s));
    return out;
}

inline double max_unitarity_residual(const ModeTrajectory& traj) {
    double m = 0.0;
    for (const auto& r : unitarity_residuals(traj)) m = std::max(m, r.max());
    return m;
}

}  // namespace qhe
