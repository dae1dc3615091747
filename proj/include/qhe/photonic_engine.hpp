// photonic_engine.hpp - Two coupled cavity modes as the working substance of a heat engine
//
// Cycle: cavity a thermalizes with the hot bath (q = omega_a0/T_h), cavity b with
// the cold bath (p = omega_b0/T_c); the cavities are then isolated, coupled, and
// their frequencies driven for a stroke of duration t_c before returning to
// omega_a0, omega_b0. Excitation number is conserved during the stroke, so
//   W   = (omega_a0 - omega_b0)(n_a(0) - n_a(t_c))
//       = (omega_a0 - omega_b0)(n(q) - n(p)) |d(t_c)|^2,
//   eta = 1 - omega_b0/omega_a0.
// Work is largest when |d(t_c)| = 1, reachable by driving the detuning at
// parametric resonance nu = sqrt(4 g^2 + (omega_a0 - omega_b0)^2).

#pragma once

#include "qhe/cycle.hpp"
#include "qhe/errors.hpp"
#include "qhe/mode_dynamics.hpp"
#include "qhe/observables.hpp"
#include "qhe/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace qhe {

inline double resonance_frequency(double omega_a0, double omega_b0) {
    detail::require(std::isfinite(omega_a0) && std::isfinite(omega_b0) && omega_a0 >= 0.0 &&
                        omega_b0 >= 0.0,
                    "frequencies must be finite and >= 0");
    const double d = omega_a0 - omega_b0;
    return std::sqrt(4.0 + d * d);
}

// Slow envelope cos(delta t / nu) of the resonant solution first vanishes here.
inline double estimate_cycle_duration(const CycleSpec& spec) {
    spec.validate_modulation();
    if (spec.delta == 0.0) {
        throw ResonanceMissError("delta = 0: no parametric drive, no resonant swap time");
    }
    return std::numbers::pi * spec.nu / (2.0 * spec.delta);
}

inline EngineReport run_photonic_cycle(const CycleSpec& spec, double t_c) {
    spec.validate();
    detail::require(std::isfinite(t_c) && t_c >= 0.0, "t_c must be >= 0");
    const auto profile = spec.profile();
    const auto modes = t_c > 0.0
                           ? advance_modes(profile, ModeCoefficients::identity(), 0.0, t_c, spec.integrator)
                           : ModeCoefficients::identity();

    const double n_q = bose_occupation(spec.q());
    const double n_p = bose_occupation(spec.p());
    const auto n = occupations_at(modes, n_q, n_p);

    EngineReport r;
    r.t_c = t_c;
    r.eta_carnot = spec.carnot_efficiency();
    r.n_a_initial = n_q;
    r.n_b_initial = n_p;
    r.n_a_final = n.n_a;
    r.n_b_final = n.n_b;
    r.d_sq = std::norm(modes.F);
    r.frequency_offset = profile.at(t_c).a - spec.omega_a0;
    detail::fill_work_and_heat(r, spec.omega_a0, spec.omega_b0);
    r.W_alt = (spec.omega_a0 - spec.omega_b0) * (n_q - n_p) * r.d_sq;

    const double tol = spec.integrator.is_fixed() ? 1e-8 : spec.integrator.tol;
    const double scale = std::max(1.0, (spec.omega_a0 - spec.omega_b0) * n_q);
    const double allowed = std::max(1e-8, 100.0 * tol) * scale;
    if (std::abs(r.W - r.W_alt) > allowed) {
        std::ostringstream msg;
        msg << "work from occupations (" << r.W << ") and from |d|^2 (" << r.W_alt
            << ") disagree beyond " << allowed;
        throw NumericalError(msg.str());
    }
    return r;
}

struct CycleOptimum {
    double t_c = 0.0;
    double d_sq = 0.0;       // 1 - |C(t_c)|^2
    double abs_C = 1.0;      // |C(t_c)|
    double estimate = 0.0;   // analytic envelope estimate (0 without drive)
    double window_lo = 0.0;
    double window_hi = 0.0;
};

namespace detail {

struct ScanSample {
    double t;
    ModeCoefficients m;
};

inline std::string describe_window(double lo, double hi, double best) {
    std::ostringstream os;
    os << "window [" << lo << ", " << hi << "], smallest |C|^2 = " << best;
    return os.str();
}

inline constexpr std::size_t kRefinedCandidates = 6;

// Golden-section search for the minimum of |C(t)|^2 between the scan
// neighbours of sample k, integrating from the left neighbour each time.
inline std::pair<double, double> refine_minimum(const FrequencyProfile& profile,
                                                const ode::Options& integrator,
                                                const std::vector<ScanSample>& scan, std::size_t k,
                                                double lo) {
    const bool from_origin = k == 0 && lo == 0.0;
    const std::size_t left = k > 0 ? k - 1 : 0;
    const double t_anchor = from_origin ? 0.0 : scan[left].t;
    const ModeCoefficients m_anchor = from_origin ? ModeCoefficients::identity() : scan[left].m;
    double a = t_anchor;
    double b = k + 1 < scan.size() ? scan[k + 1].t : scan[k].t;

    auto c2_at = [&](double t) {
        if (t == t_anchor) return std::norm(m_anchor.C);
        return std::norm(advance_modes(profile, m_anchor, t_anchor, t, integrator).C);
    };

    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = c2_at(x1);
    double f2 = c2_at(x2);
    while (b - a > 1e-6) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = c2_at(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = c2_at(x2);
        }
    }
    const double t = 0.5 * (a + b);
    return {t, c2_at(t)};
}

}  // namespace detail

// Minimizes |C(t)|^2 near the envelope zero: a scan with step <= pi/(8 nu) over
// [0.5, 1.5] x estimate, then golden-section refinement to 1e-6 in time. Without
// drive (delta = 0) the first generalized-Rabi minimum is located instead.
inline CycleOptimum optimize_cycle_duration(const CycleSpec& spec) {
    spec.validate_modulation();
    const auto profile = spec.profile();
    CycleOptimum out;

    double lo, hi, carrier;
    if (spec.delta > 0.0) {
        out.estimate = estimate_cycle_duration(spec);
        lo = 0.5 * out.estimate;
        hi = 1.5 * out.estimate;
        carrier = spec.nu;
    } else {
        const double d = spec.omega_a0 - spec.omega_b0;
        const double rabi = std::sqrt(1.0 + 0.25 * d * d);
        lo = 0.0;
        hi = std::numbers::pi / rabi;
        carrier = 2.0 * rabi;
    }
    if (lo >= spec.t_end) {
        throw ResonanceMissError("resonance expected beyond the search horizon: " +
                                 detail::describe_window(lo, hi, 1.0) +
                                 ", horizon = " + std::to_string(spec.t_end));
    }
    hi = std::min(hi, spec.t_end);
    out.window_lo = lo;
    out.window_hi = hi;

    const double max_step = std::numbers::pi / (8.0 * carrier);
    const auto intervals = static_cast<std::size_t>(std::ceil((hi - lo) / max_step));
    std::vector<double> grid;
    grid.reserve(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) {
        const double t = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(intervals);
        if (t > 0.0) grid.push_back(t);
    }

    EvolveOptions opts;
    opts.integrator = spec.integrator;
    opts.output_times = grid;
    const auto traj = evolve_modes(profile, hi, opts);

    std::vector<detail::ScanSample> scan;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (traj.times[i] >= lo && traj.times[i] > 0.0) scan.push_back({traj.times[i], traj.samples[i]});
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < scan.size(); ++i) {
        if (std::norm(scan[i].m.C) < std::norm(scan[best].m.C)) best = i;
    }
    const double best_c2 = std::norm(scan[best].m.C);
    if (!(best_c2 < 0.5)) {
        throw ResonanceMissError("no |C|^2 minimum below 0.5: " +
                                 detail::describe_window(lo, hi, best_c2));
    }

    // The scan can undersample a narrow carrier dip, so the deepest few scan
    // minima are all refined and the smallest refined value wins.
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < scan.size(); ++i) {
        const double c = std::norm(scan[i].m.C);
        const bool left_ok = i == 0 || c <= std::norm(scan[i - 1].m.C);
        const bool right_ok = i + 1 == scan.size() || c <= std::norm(scan[i + 1].m.C);
        if (left_ok && right_ok) candidates.push_back(i);
    }
    std::sort(candidates.begin(), candidates.end(), [&](std::size_t x, std::size_t y) {
        return std::norm(scan[x].m.C) < std::norm(scan[y].m.C);
    });
    if (candidates.size() > detail::kRefinedCandidates) candidates.resize(detail::kRefinedCandidates);

    double best_t = scan[best].t;
    double best_val = best_c2;
    for (std::size_t k : candidates) {
        const auto [t, val] = detail::refine_minimum(profile, spec.integrator, scan, k, lo);
        if (val < best_val) {
            best_val = val;
            best_t = t;
        }
    }
    out.t_c = best_t;
    out.abs_C = std::sqrt(best_val);
    out.d_sq = 1.0 - best_val;
    return out;
}

struct SweepSpec {
    double T_h = 2.0;
    double T_c = 1.0;
    double omega_a0 = 3.0;
    double delta = 0.2;
    double t_end = 1000.0;
    ode::Options integrator{};
    std::size_t threads = 0;  // 0 selects default_thread_count()
};

struct SweepRow {
    double omega_b;
    double q;
    double p;
    double W;
    double eta;
    double t_c;
    double d_sq;
};

struct CarnotSweep {
    std::vector<SweepRow> rows;
    double eta_carnot = 0.0;
    double omega_b_boundary = 0.0;  // omega_a0 T_c / T_h, where q = p
    // Grid points bracketing the change from W <= 0 to W > 0, when one occurs.
    std::optional<std::pair<double, double>> sign_change;
    bool sign_change_brackets_boundary = false;
};

// Each grid point runs a resonantly driven cycle of optimized duration.
inline CarnotSweep carnot_sweep(const SweepSpec& sweep, const std::vector<double>& omega_b_grid) {
    detail::require(std::isfinite(sweep.T_c) && sweep.T_c > 0.0 && sweep.T_h > sweep.T_c,
                    "need T_h > T_c > 0");
    detail::require(std::isfinite(sweep.omega_a0) && sweep.omega_a0 > 0.0, "omega_a0 must be > 0");
    for (double wb : omega_b_grid) {
        detail::require(wb > 0.0 && wb < sweep.omega_a0, "omega_b grid must lie in (0, omega_a0)");
    }

    CarnotSweep out;
    out.eta_carnot = 1.0 - sweep.T_c / sweep.T_h;
    out.omega_b_boundary = sweep.omega_a0 * sweep.T_c / sweep.T_h;
    out.rows.resize(omega_b_grid.size());

    const std::size_t threads = sweep.threads ? sweep.threads : default_thread_count();
    parallel_for(omega_b_grid.size(), threads, [&](std::size_t i) {
        CycleSpec spec;
        spec.omega_a0 = sweep.omega_a0;
        spec.omega_b0 = omega_b_grid[i];
        spec.T_h = sweep.T_h;
        spec.T_c = sweep.T_c;
        spec.delta = sweep.delta;
        spec.nu = resonance_frequency(spec.omega_a0, spec.omega_b0);
        spec.t_end = sweep.t_end;
        spec.integrator = sweep.integrator;
        const auto opt = optimize_cycle_duration(spec);
        const auto report = run_photonic_cycle(spec, opt.t_c);
        out.rows[i] = {spec.omega_b0, spec.q(), spec.p(), report.W, report.eta, opt.t_c, report.d_sq};
    });

    // Signs with |W| at roundoff level count as zero.
    auto sign = [](double w) { return w > 1e-12 ? 1 : (w < -1e-12 ? -1 : 0); };
    std::optional<std::size_t> last_negative;
    for (std::size_t i = 0; i < out.rows.size(); ++i) {
        const int s = sign(out.rows[i].W);
        if (s < 0) last_negative = i;
        if (s > 0 && last_negative) {
            const double w0 = out.rows[*last_negative].omega_b;
            const double w1 = out.rows[i].omega_b;
            out.sign_change = std::make_pair(w0, w1);
            out.sign_change_brackets_boundary =
                std::min(w0, w1) <= out.omega_b_boundary && out.omega_b_boundary <= std::max(w0, w1);
            break;
        }
    }
    return out;
}

// Largest excursion of q n_a(t) + p n_b(t) from its initial value over [0, t_end].
// When q = p this quantity is conserved and the engine produces no power.
inline double verify_zero_power_conservation(const CycleSpec& spec, double t_end) {
    spec.validate_modulation();
    detail::require(std::isfinite(t_end) && t_end >= 0.0, "t_end must be >= 0");
    const ThermalInit init{spec.q(), spec.p()};
    init.validate();
    if (t_end == 0.0) return 0.0;
    EvolveOptions opts;
    opts.integrator = spec.integrator;
    const auto occ = occupations_from_modes(evolve_modes(spec.profile(), t_end, opts), init);
    const double start = init.q * occ.n_a[0] + init.p * occ.n_b[0];
    double worst = 0.0;
    for (std::size_t i = 0; i < occ.size(); ++i) {
        worst = std::max(worst, std::abs(init.q * occ.n_a[i] + init.p * occ.n_b[i] - start));
    }
    return worst;
}

}  // namespace qhe
