// tls_engine.hpp - Two coupled two-level atoms as the working substance
//
// H = omega_a sigma_z / 2 + omega_b pi_z / 2 + g (sigma^dag pi + sigma pi^dag)
// in the basis |ee>, |eg>, |ge>, |gg>, with sigma_z |e> = +|e>. The density
// matrix is propagated directly (d rho/dt = -i [H, rho]); excitation
// probabilities are n_a = rho_ee,ee + rho_eg,eg and n_b = rho_ee,ee + rho_ge,ge.

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
#include <string>
#include <vector>

namespace qhe {

using Matrix4c = Eigen::Matrix<std::complex<double>, 4, 4>;

inline double fermi_occupation(double omega, double T) {
    detail::require(std::isfinite(omega) && omega > 0.0, "omega must be > 0");
    detail::require(!std::isnan(T) && T > 0.0, "T must be > 0");
    return 1.0 / (std::exp(omega / T) + 1.0);
}

struct TwoQubitState {
    double t = 0.0;
    Matrix4c rho = Matrix4c::Zero();
    double n_a = 0.0;
    double n_b = 0.0;
};

struct TwoQubitTrajectory {
    std::vector<TwoQubitState> states;
    FrequencyProfile profile = FrequencyProfile::constant(1.0, 1.0);
    double coupling = 1.0;

    std::size_t size() const noexcept { return states.size(); }
};

namespace detail {

inline constexpr double kPositivityTolerance = 1e-8;

inline Matrix4c tls_hamiltonian(double omega_a, double omega_b, double g) {
    Matrix4c h = Matrix4c::Zero();
    h(0, 0) = 0.5 * (omega_a + omega_b);
    h(1, 1) = 0.5 * (omega_a - omega_b);
    h(2, 2) = 0.5 * (omega_b - omega_a);
    h(3, 3) = -0.5 * (omega_a + omega_b);
    h(1, 2) = h(2, 1) = g;
    return h;
}

using RhoState = ode::State<32>;

inline RhoState pack_rho(const Matrix4c& rho) {
    RhoState y{};
    for (int k = 0; k < 16; ++k) {
        y[2 * k] = rho(k / 4, k % 4).real();
        y[2 * k + 1] = rho(k / 4, k % 4).imag();
    }
    return y;
}

inline Matrix4c unpack_rho(const RhoState& y) {
    Matrix4c rho;
    for (int k = 0; k < 16; ++k) rho(k / 4, k % 4) = {y[2 * k], y[2 * k + 1]};
    return rho;
}

inline TwoQubitState make_state(double t, const Matrix4c& rho) {
    return {t, rho, rho(0, 0).real() + rho(1, 1).real(), rho(0, 0).real() + rho(2, 2).real()};
}

inline double min_eigenvalue(const Matrix4c& rho) {
    const Matrix4c herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace detail

// Product of single-atom Gibbs states at (omega_a, T_a) and (omega_b, T_b).
inline Matrix4c gibbs_product(double omega_a, double T_a, double omega_b, double T_b) {
    const double pa = fermi_occupation(omega_a, T_a);
    const double pb = fermi_occupation(omega_b, T_b);
    Matrix4c rho = Matrix4c::Zero();
    rho(0, 0) = pa * pb;
    rho(1, 1) = pa * (1.0 - pb);
    rho(2, 2) = (1.0 - pa) * pb;
    rho(3, 3) = (1.0 - pa) * (1.0 - pb);
    return rho;
}

// Samples at options.output_times (plus t = 0 and t_end), or at every
// accepted step when none are given. Positivity is checked on every sample.
inline TwoQubitTrajectory evolve_two_qubits(const FrequencyProfile& profile, double T_h, double T_c,
                                            double t_end, const EvolveOptions& options = {}) {
    detail::require(!std::isnan(T_h) && T_h > 0.0, "T_h must be > 0");
    detail::require(!std::isnan(T_c) && T_c > 0.0, "T_c must be > 0");
    detail::check_evolve_inputs(profile, t_end, options.integrator, options.coupling);
    const double g = options.coupling;

    TwoQubitTrajectory traj;
    traj.profile = profile;
    traj.coupling = g;

    auto rhs = [&](double t, const detail::RhoState& y, detail::RhoState& dy) {
        const auto w = profile.at(t);
        const Matrix4c rho = detail::unpack_rho(y);
        const Matrix4c h = detail::tls_hamiltonian(w.a, w.b, g);
        const Matrix4c d = std::complex<double>(0.0, -1.0) * (h * rho - rho * h);
        dy = detail::pack_rho(d);
    };
    auto y = detail::pack_rho(gibbs_product(profile.omega_a0(), T_h, profile.omega_b0(), T_c));
    ode::integrate<32>(rhs, y, 0.0, t_end, std::span<const double>(options.output_times),
                       options.integrator, [&](double t, const detail::RhoState& s) {
                           const Matrix4c rho = detail::unpack_rho(s);
                           const double lowest = detail::min_eigenvalue(rho);
                           if (lowest < -detail::kPositivityTolerance) {
                               std::ostringstream msg;
                               msg << "density matrix lost positivity at t=" << t
                                   << " (eigenvalue " << lowest << ")";
                               throw NumericalError(msg.str());
                           }
                           traj.states.push_back(detail::make_state(t, rho));
                       });
    return traj;
}

// Checks, sample by sample,
//   (dn_a/dt)^2 + (int_0^t phi'(t') dn_a/dt' dt')^2 = 4 g^2 (n_a(0) - n_a)(n_a - n_b(0)),
// with phi' = omega_b - omega_a. Derivatives use centered differences and the
// integral the trapezoid rule on the trajectory's own grid.
inline IdentityCheck verify_atom_identity(const TwoQubitTrajectory& traj) {
    const auto& profile = traj.profile;
    const double g = traj.coupling;
    const double rabi = std::sqrt(g * g + 0.25 * std::pow(profile.max_abs_detuning(), 2));
    IdentityCheck out;
    for (const auto& s : traj.states) out.times.push_back(s.t);
    detail::require_resolution(out.times, std::numbers::pi / rabi, "verify_atom_identity");

    std::vector<double> n_a;
    for (const auto& s : traj.states) n_a.push_back(s.n_a);
    const auto dn = fd::derivative(out.times, n_a);
    std::vector<double> weighted(n_a.size());
    for (std::size_t i = 0; i < n_a.size(); ++i) weighted[i] = -profile.detuning(out.times[i]) * dn[i];
    const auto inner = fd::cumulative_trapezoid(out.times, weighted);

    const double n_a0 = traj.states.front().n_a;
    const double n_b0 = traj.states.front().n_b;
    for (std::size_t i = 0; i < n_a.size(); ++i) {
        const double l = dn[i] * dn[i] + inner[i] * inner[i];
        const double r = 4.0 * g * g * (n_a0 - n_a[i]) * (n_a[i] - n_b0);
        out.lhs.push_back(l);
        out.rhs.push_back(r);
        out.residual.push_back(std::abs(l - r));
    }
    return out;
}

inline EngineReport run_tls_cycle(const CycleSpec& spec, double t_c) {
    spec.validate();
    detail::require(std::isfinite(t_c) && t_c >= 0.0, "t_c must be >= 0");
    const auto profile = spec.profile();

    EngineReport r;
    r.t_c = t_c;
    r.eta_carnot = spec.carnot_efficiency();
    r.n_a_initial = fermi_occupation(spec.omega_a0, spec.T_h);
    r.n_b_initial = fermi_occupation(spec.omega_b0, spec.T_c);
    r.n_a_final = r.n_a_initial;
    r.n_b_final = r.n_b_initial;
    if (t_c > 0.0) {
        EvolveOptions opts;
        opts.integrator = spec.integrator;
        const auto traj = evolve_two_qubits(profile, spec.T_h, spec.T_c, t_c, opts);
        r.n_a_final = traj.states.back().n_a;
        r.n_b_final = traj.states.back().n_b;
        r.d_sq = std::norm(advance_modes(profile, ModeCoefficients::identity(), 0.0, t_c,
                                         spec.integrator).F);
    }
    r.frequency_offset = profile.at(t_c).a - spec.omega_a0;
    detail::fill_work_and_heat(r, spec.omega_a0, spec.omega_b0);
    // Same work through the cold atom, using conservation of n_a + n_b.
    r.W_alt = (spec.omega_a0 - spec.omega_b0) * (r.n_b_final - r.n_b_initial);

    const double lo = std::min(r.n_a_initial, r.n_b_initial);
    const double hi = std::max(r.n_a_initial, r.n_b_initial);
    if (r.n_a_final < lo - 1e-8 || r.n_a_final > hi + 1e-8) {
        std::ostringstream msg;
        msg << "n_a(t_c) = " << r.n_a_final << " escaped the bracket [" << lo << ", " << hi << "]";
        throw NumericalError(msg.str());
    }
    return r;
}

}  // namespace qhe
