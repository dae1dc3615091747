// ode.hpp - Explicit Runge-Kutta integrators for small fixed-size real systems
//
// Two modes share one driver:
//   * adaptive Dormand-Prince 5(4) with a PI step-size controller
//   * classical fixed-step RK4, bit-reproducible for golden outputs
//
// The driver lands exactly on every requested output time, so samples never
// carry interpolation error.

#pragma once

#include "qhe/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <utility>

namespace qhe::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct Options {
    // Adaptive mode: absolute and relative local error target per component.
    double tol = 1e-10;
    // > 0 selects fixed-step RK4 with this step; tol is then ignored.
    double fixed_step = 0.0;
    std::size_t max_steps = 20'000'000;

    bool is_fixed() const noexcept { return fixed_step > 0.0; }

    void validate() const {
        detail::require(fixed_step >= 0.0, "fixed_step must be > 0 (or 0 for adaptive)");
        if (is_fixed()) {
            detail::require(std::isfinite(fixed_step), "fixed_step must be finite");
        } else {
            detail::require(tol >= 1e-13 && tol <= 1e-4,
                            "tol must lie in [1e-13, 1e-4], got " + std::to_string(tol));
        }
    }
};

struct Stats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t evaluations = 0;
};

namespace detail {

// Local error target is tighter than the user tolerance: global error over a
// few hundred carrier periods stays below tol for the oscillatory systems here.
inline constexpr double kLocalTolScale = 0.05;

template <std::size_t N>
inline void axpy(State<N>& out, const State<N>& y, double h,
                 std::initializer_list<std::pair<double, const State<N>*>> terms) {
    for (std::size_t i = 0; i < N; ++i) {
        double acc = 0.0;
        for (const auto& [c, k] : terms) {
            acc += c * (*k)[i];
        }
        out[i] = y[i] + h * acc;
    }
}

template <std::size_t N>
inline bool all_finite(const State<N>& y) {
    return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

// Dormand-Prince 5(4) tableau.
struct DP54 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

class OutputCursor {
public:
    OutputCursor(std::span<const double> times, double t0, double t1) : times_(times) {
        while (next_ < times_.size() && times_[next_] <= t0) ++next_;
        end_ = next_;
        while (end_ < times_.size() && times_[end_] <= t1) ++end_;
    }
    bool empty() const noexcept { return times_.empty(); }
    bool has_next() const noexcept { return next_ < end_; }
    double next() const noexcept { return times_[next_]; }
    void advance() noexcept { ++next_; }

private:
    std::span<const double> times_;
    std::size_t next_ = 0;
    std::size_t end_ = 0;
};

inline void check_outputs(std::span<const double> times) {
    for (std::size_t i = 1; i < times.size(); ++i) {
        qhe::detail::require(times[i] > times[i - 1], "output times must be strictly increasing");
    }
}

}  // namespace detail

// Integrates y' = f(t, y) from t0 to t1 (t1 >= t0), calling observe(t, y) at t0
// and then either at every output time in (t0, t1] followed by t1, or at every
// accepted step when output_times is empty. y holds the state at t1 on return.
template <std::size_t N, class Rhs, class Observer>
Stats integrate(Rhs&& rhs, State<N>& y, double t0, double t1,
                std::span<const double> output_times, const Options& opts, Observer&& observe) {
    using detail::DP54;
    opts.validate();
    qhe::detail::require(std::isfinite(t0) && std::isfinite(t1) && t1 >= t0,
                         "integration interval must be finite with t1 >= t0");
    detail::check_outputs(output_times);

    Stats stats;
    auto eval = [&](double t, const State<N>& s, State<N>& out) {
        rhs(t, s, out);
        ++stats.evaluations;
        if (!detail::all_finite(out)) {
            throw NumericalError("right-hand side produced a non-finite value at t=" +
                                 std::to_string(t));
        }
    };

    observe(t0, std::as_const(y));
    if (t1 == t0) return stats;

    detail::OutputCursor cursor(output_times, t0, t1);
    const bool every_step = cursor.empty();
    double t = t0;

    // Target of the step currently being attempted.
    auto next_stop = [&]() { return cursor.has_next() ? cursor.next() : t1; };
    auto land = [&](double target) {
        t = target;
        if (cursor.has_next() && cursor.next() == target) {
            cursor.advance();
            observe(t, std::as_const(y));
        } else if (target == t1) {
            observe(t, std::as_const(y));
        }
    };

    State<N> k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, tmp{}, y_new{};

    if (opts.is_fixed()) {
        const double dt = opts.fixed_step;
        while (t < t1) {
            if (stats.accepted >= opts.max_steps) throw StiffnessError("max_steps exceeded");
            const double stop = next_stop();
            const bool clipped = t + dt >= stop;
            const double h = clipped ? stop - t : dt;
            eval(t, y, k1);
            detail::axpy<N>(tmp, y, h, {{0.5, &k1}});
            eval(t + 0.5 * h, tmp, k2);
            detail::axpy<N>(tmp, y, h, {{0.5, &k2}});
            eval(t + 0.5 * h, tmp, k3);
            detail::axpy<N>(tmp, y, h, {{1.0, &k3}});
            eval(t + h, tmp, k4);
            detail::axpy<N>(y, y, h, {{1.0 / 6, &k1}, {1.0 / 3, &k2}, {1.0 / 3, &k3}, {1.0 / 6, &k4}});
            ++stats.accepted;
            if (clipped) {
                land(stop);
            } else {
                t += h;
                if (every_step) observe(t, std::as_const(y));
            }
        }
        return stats;
    }

    const double atol = opts.tol * detail::kLocalTolScale;
    const double rtol = atol;
    auto scaled_error = [&](const State<N>& err, const State<N>& a, const State<N>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = atol + rtol * std::max(std::abs(a[i]), std::abs(b[i]));
            const double r = err[i] / sc;
            s += r * r;
        }
        return std::sqrt(s / static_cast<double>(N));
    };

    eval(t, y, k1);

    // Initial step guess (Hairer, Norsett & Wanner, II.4).
    double h;
    {
        State<N> sc{};
        for (std::size_t i = 0; i < N; ++i) sc[i] = atol + rtol * std::abs(y[i]);
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            d0 += (y[i] / sc[i]) * (y[i] / sc[i]);
            d1 += (k1[i] / sc[i]) * (k1[i] / sc[i]);
        }
        d0 = std::sqrt(d0 / N);
        d1 = std::sqrt(d1 / N);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, t1 - t0);
        detail::axpy<N>(tmp, y, h0, {{1.0, &k1}});
        eval(t + h0, tmp, k2);
        double d2 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double r = (k2[i] - k1[i]) / sc[i];
            d2 += r * r;
        }
        d2 = std::sqrt(d2 / N) / h0;
        const double dmax = std::max(d1, d2);
        const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
        h = std::min(100.0 * h0, h1);
    }

    // PI controller constants from DOPRI5.
    constexpr double beta = 0.04;
    constexpr double expo1 = 0.2 - beta * 0.75;
    constexpr double safe = 0.9;
    constexpr double fac_min = 0.2;   // largest shrink per step is 1/5
    constexpr double fac_max = 10.0;  // largest growth per step
    double err_old = 1e-4;
    bool last_rejected = false;

    std::size_t steps = 0;
    while (t < t1) {
        if (++steps > opts.max_steps) throw StiffnessError("max_steps exceeded");
        const double stop = next_stop();
        const bool clipped = t + h >= stop;
        const double h_step = clipped ? stop - t : h;
        // A tiny step that only closes the gap to an output time is harmless.
        if (!clipped &&
            h_step < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
            throw StiffnessError("step size underflow at t=" + std::to_string(t));
        }

        detail::axpy<N>(tmp, y, h_step, {{DP54::a21, &k1}});
        eval(t + DP54::c2 * h_step, tmp, k2);
        detail::axpy<N>(tmp, y, h_step, {{DP54::a31, &k1}, {DP54::a32, &k2}});
        eval(t + DP54::c3 * h_step, tmp, k3);
        detail::axpy<N>(tmp, y, h_step, {{DP54::a41, &k1}, {DP54::a42, &k2}, {DP54::a43, &k3}});
        eval(t + DP54::c4 * h_step, tmp, k4);
        detail::axpy<N>(tmp, y, h_step,
                        {{DP54::a51, &k1}, {DP54::a52, &k2}, {DP54::a53, &k3}, {DP54::a54, &k4}});
        eval(t + DP54::c5 * h_step, tmp, k5);
        detail::axpy<N>(tmp, y, h_step,
                        {{DP54::a61, &k1}, {DP54::a62, &k2}, {DP54::a63, &k3}, {DP54::a64, &k4},
                         {DP54::a65, &k5}});
        eval(t + h_step, tmp, k6);
        detail::axpy<N>(y_new, y, h_step,
                        {{DP54::b1, &k1}, {DP54::b3, &k3}, {DP54::b4, &k4}, {DP54::b5, &k5},
                         {DP54::b6, &k6}});
        eval(t + h_step, y_new, k7);

        State<N> err{};
        for (std::size_t i = 0; i < N; ++i) {
            err[i] = h_step * (DP54::e1 * k1[i] + DP54::e3 * k3[i] + DP54::e4 * k4[i] +
                               DP54::e5 * k5[i] + DP54::e6 * k6[i] + DP54::e7 * k7[i]);
        }
        const double en = scaled_error(err, y, y_new);
        if (!std::isfinite(en)) {
            throw NumericalError("non-finite error estimate at t=" + std::to_string(t));
        }

        double fac = std::pow(std::max(en, 1e-300), expo1) / std::pow(err_old, beta);
        fac = std::clamp(fac / safe, 1.0 / fac_max, 1.0 / fac_min);
        double h_new = h_step / fac;

        if (en <= 1.0) {
            err_old = std::max(en, 1e-4);
            ++stats.accepted;
            y = y_new;
            k1 = k7;  // first-same-as-last
            if (last_rejected) h_new = std::min(h_new, h_step);
            last_rejected = false;
            if (clipped) {
                land(stop);
                // A step shortened to hit an output time must not drag the
                // proposal down; a rejection will correct an overshoot.
                h = std::max(h_new, h);
            } else {
                t += h_step;
                h = h_new;
                if (every_step) observe(t, std::as_const(y));
            }
        } else {
            ++stats.rejected;
            h = h_step / std::min(1.0 / fac_min, std::pow(en, expo1) / safe);
            last_rejected = true;
        }
    }
    return stats;
}

template <std::size_t N, class Rhs>
Stats integrate(Rhs&& rhs, State<N>& y, double t0, double t1, const Options& opts) {
    return integrate<N>(std::forward<Rhs>(rhs), y, t0, t1, std::span<const double>{}, opts,
                        [](double, const State<N>&) {});
}

}  // namespace qhe::ode
