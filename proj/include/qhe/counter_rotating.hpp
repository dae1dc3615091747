// counter_rotating.hpp - Oscillators coupled by pair creation, g (a^dag b^dag + a b)
//
// From [a^dag b^dag, a b] = -(a^dag a + b^dag b + 1) the first moments close:
//   dn_a/dt = dn_b/dt = -2 g Im m,
//   i dm/dt = (omega_a + omega_b) m + g (1 + n_a + n_b),        m = <a b>.
// Gaussian states stay Gaussian, so these four real equations are exact.

#pragma once

#include "qhe/cycle.hpp"
#include "qhe/errors.hpp"
#include "qhe/finite_difference.hpp"
#include "qhe/mode_dynamics.hpp"
#include "qhe/ode.hpp"
#include "qhe/profile.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <sstream>
#include <vector>

namespace qhe {

struct CRMomentState {
    double t = 0.0;
    double n_a = 0.0;
    double n_b = 0.0;
    complex m{};  // <a b>
};

struct CRTrajectory {
    std::vector<CRMomentState> states;
    FrequencyProfile profile = FrequencyProfile::constant(1.0, 1.0);
    double coupling = 1.0;

    std::size_t size() const noexcept { return states.size(); }
};

inline CRTrajectory evolve_cr_moments(const FrequencyProfile& profile, double n_a0, double n_b0,
                                      double t_end, const EvolveOptions& options = {}) {
    detail::require(std::isfinite(n_a0) && n_a0 >= 0.0, "n_a0 must be >= 0");
    detail::require(std::isfinite(n_b0) && n_b0 >= 0.0, "n_b0 must be >= 0");
    detail::check_evolve_inputs(profile, t_end, options.integrator, options.coupling);
    const double g = options.coupling;

    auto rhs = [&](double t, const ode::State<4>& y, ode::State<4>& dy) {
        const auto w = profile.at(t);
        const double sum = w.a + w.b;
        dy[0] = -2.0 * g * y[3];
        dy[1] = dy[0];
        dy[2] = sum * y[3];
        dy[3] = -sum * y[2] - g * (1.0 + y[0] + y[1]);
    };
    CRTrajectory traj;
    traj.profile = profile;
    traj.coupling = g;
    ode::State<4> y{n_a0, n_b0, 0.0, 0.0};
    ode::integrate<4>(rhs, y, 0.0, t_end, std::span<const double>(options.output_times),
                      options.integrator, [&](double t, const ode::State<4>& s) {
                          traj.states.push_back({t, s[0], s[1], {s[2], s[3]}});
                      });
    return traj;
}

// Residual of
//   (dS/dt)^2 + (int_0^t phi'(t') dS/dt' dt')^2 = 4 g^2 ((S + 1)^2 - (S(0) + 1)^2),
// S = n_a + n_b, phi' = omega_a + omega_b, on the trajectory's own grid.
inline IdentityCheck verify_sum_identity(const CRTrajectory& traj) {
    const auto& profile = traj.profile;
    const double g = traj.coupling;
    IdentityCheck out;
    for (const auto& s : traj.states) out.times.push_back(s.t);
    const double fastest = std::max(2.0 * g, profile.max_sum_frequency());
    detail::require_resolution(out.times, 2.0 * std::numbers::pi / fastest, "verify_sum_identity");

    std::vector<double> S;
    for (const auto& s : traj.states) S.push_back(s.n_a + s.n_b);
    const auto dS = fd::derivative(out.times, S);
    std::vector<double> weighted(S.size());
    for (std::size_t i = 0; i < S.size(); ++i) {
        const auto w = profile.at(out.times[i]);
        weighted[i] = (w.a + w.b) * dS[i];
    }
    const auto inner = fd::cumulative_trapezoid(out.times, weighted);
    const double s0 = S.front() + 1.0;
    for (std::size_t i = 0; i < S.size(); ++i) {
        const double l = dS[i] * dS[i] + inner[i] * inner[i];
        const double r = 4.0 * g * g * ((S[i] + 1.0) * (S[i] + 1.0) - s0 * s0);
        out.lhs.push_back(l);
        out.rhs.push_back(r);
        out.residual.push_back(std::abs(l - r));
    }
    return out;
}

// Oscillators are decoupled from the reservoirs at t = 0 and t = t_c, so the
// profile must return to its starting frequencies.
inline EngineReport run_cr_cycle(const FrequencyProfile& profile, double n_a0, double n_b0,
                                 double t_c, const EvolveOptions& options = {}) {
    detail::require(std::isfinite(t_c) && t_c >= 0.0, "t_c must be >= 0");
    const double wa0 = profile.omega_a0();
    const double wb0 = profile.omega_b0();
    const auto w_end = profile.at(t_c);
    const double closure = std::max(std::abs(w_end.a - wa0), std::abs(w_end.b - wb0));
    if (closure > 1e-9 * std::max(1.0, std::max(wa0, wb0))) {
        std::ostringstream msg;
        msg << "profile does not return to its initial frequencies at t_c=" << t_c
            << " (offset " << closure << ")";
        throw CycleClosureError(msg.str());
    }

    EngineReport r;
    r.t_c = t_c;
    r.n_a_initial = r.n_a_final = n_a0;
    r.n_b_initial = r.n_b_final = n_b0;
    if (t_c > 0.0) {
        const auto traj = evolve_cr_moments(profile, n_a0, n_b0, t_c, options);
        r.n_a_final = traj.states.back().n_a;
        r.n_b_final = traj.states.back().n_b;
    }
    const double da = n_a0 - r.n_a_final;
    const double db = n_b0 - r.n_b_final;
    r.W = wa0 * da + wb0 * db;
    // n_a - n_b is conserved, so both oscillators change by half the sum.
    r.W_alt = -(wa0 + wb0) * 0.5 * ((r.n_a_final + r.n_b_final) - (n_a0 + n_b0));
    r.Q = wa0 * da;
    r.zero_heat = da == 0.0;
    r.eta = r.zero_heat ? 0.0 : r.W / r.Q;
    if (r.W > 1e-9) {
        std::ostringstream msg;
        msg << "counter-rotating cycle produced positive work W=" << r.W;
        throw NumericalError(msg.str());
    }
    return r;
}

struct FockResult {
    double n_a = 0.0;
    double n_b = 0.0;
    double tail = 0.0;  // probability in the top tenth of the kept levels
    std::size_t n_max = 0;
};

// Brute-force propagation of the vacuum in the pair basis |n, n>, n <= n_max,
// where H is tridiagonal: (omega_a + omega_b) n on the diagonal and g (n + 1)
// linking |n, n> with |n + 1, n + 1>.
inline FockResult fock_oracle_cr(double omega_a, double omega_b, double t, std::size_t n_max,
                                 double coupling = 1.0) {
    detail::require(n_max >= 20, "n_max must be >= 20");
    detail::require(std::isfinite(omega_a) && std::isfinite(omega_b) && omega_a >= 0.0 &&
                        omega_b >= 0.0,
                    "frequencies must be >= 0");
    detail::require(std::isfinite(t) && t >= 0.0, "t must be >= 0");
    FockResult out;
    out.n_max = n_max;
    if (t == 0.0) return out;

    const Eigen::Index dim = static_cast<Eigen::Index>(n_max) + 1;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index n = 0; n < dim; ++n) {
        h(n, n) = (omega_a + omega_b) * static_cast<double>(n);
        if (n + 1 < dim) h(n, n + 1) = h(n + 1, n) = coupling * static_cast<double>(n + 1);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const Eigen::MatrixXd& v = es.eigenvectors();
    // psi(t) = V exp(-i Lambda t) V^T e_0
    Eigen::VectorXcd coeff(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        coeff(k) = std::exp(complex(0.0, -es.eigenvalues()(k) * t)) * v(0, k);
    }
    const Eigen::VectorXcd psi = v.cast<complex>() * coeff;

    const auto top = static_cast<Eigen::Index>(std::floor(0.9 * static_cast<double>(n_max)));
    double mean = 0.0;
    for (Eigen::Index n = 0; n < dim; ++n) {
        const double p = std::norm(psi(n));
        mean += static_cast<double>(n) * p;
        if (n >= top) out.tail += p;
    }
    out.n_a = out.n_b = mean;
    if (!(out.tail < 1e-10)) {
        std::ostringstream msg;
        msg << "Fock truncation tail " << out.tail << " at n_max=" << n_max << "; raise n_max";
        throw TruncationError(msg.str());
    }
    return out;
}

// Starts at n_max = 60 and doubles until the tail is below 1e-10.
inline FockResult fock_oracle_cr_auto(double omega_a, double omega_b, double t,
                                      double coupling = 1.0, std::size_t limit = 4096) {
    for (std::size_t n_max = 60;; n_max *= 2) {
        try {
            return fock_oracle_cr(omega_a, omega_b, t, n_max, coupling);
        } catch (const TruncationError&) {
            if (2 * n_max > limit) throw;
        }
    }
}

}  // namespace qhe
