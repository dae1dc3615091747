// profile.hpp - Time-dependent oscillator frequencies omega_a(t), omega_b(t)
//
// Reduced units throughout: hbar = k_B = g = 1. Frequencies are in units of g,
// times in units of 1/g.

#pragma once

#include "qhe/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace qhe {

enum class ProfileShape { constant, sinusoidal_detuning, tabulated };

inline const char* to_string(ProfileShape shape) {
    switch (shape) {
        case ProfileShape::constant: return "constant";
        case ProfileShape::sinusoidal_detuning: return "sinusoidal-detuning";
        case ProfileShape::tabulated: return "tabulated";
    }
    return "unknown";
}

struct FrequencyPair {
    double a;
    double b;
};

struct ProfileRow {
    double t;
    double omega_a;
    double omega_b;
};

// The sinusoidal shape splits the detuning drive symmetrically:
//   omega_a(t) = omega_a0 + delta sin(nu t),  omega_b(t) = omega_b0 - delta sin(nu t)
// so that Delta(t) = omega_a0 - omega_b0 + 2 delta sin(nu t).
//
// Frequencies may be zero (the counter-rotating oracle uses omega = 0); modules
// that divide by a frequency check positivity themselves.
class FrequencyProfile {
public:
    static FrequencyProfile constant(double omega_a, double omega_b) {
        FrequencyProfile p;
        p.shape_ = ProfileShape::constant;
        p.omega_a0_ = omega_a;
        p.omega_b0_ = omega_b;
        p.validate_base();
        return p;
    }

    static FrequencyProfile sinusoidal(double omega_a0, double omega_b0, double delta, double nu) {
        FrequencyProfile p;
        p.shape_ = ProfileShape::sinusoidal_detuning;
        p.omega_a0_ = omega_a0;
        p.omega_b0_ = omega_b0;
        p.delta_ = delta;
        p.nu_ = nu;
        p.validate_base();
        detail::require(std::isfinite(delta) && delta >= 0.0, "delta must be >= 0");
        detail::require(std::isfinite(nu) && nu > 0.0, "nu must be > 0 for sinusoidal detuning");
        return p;
    }

    static FrequencyProfile tabulated(std::vector<ProfileRow> rows) {
        detail::require(rows.size() >= 2, "tabulated profile needs at least two rows");
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            detail::require(std::isfinite(r.t) && std::isfinite(r.omega_a) &&
                                std::isfinite(r.omega_b),
                            "tabulated profile rows must be finite");
            detail::require(r.omega_a >= 0.0 && r.omega_b >= 0.0,
                            "tabulated frequencies must be >= 0");
            if (i > 0) {
                detail::require(r.t > rows[i - 1].t,
                                "tabulated profile times must be strictly increasing");
            }
        }
        detail::require(rows.front().t <= 0.0, "tabulated profile must cover t = 0");
        FrequencyProfile p;
        p.shape_ = ProfileShape::tabulated;
        p.table_ = std::move(rows);
        const auto w0 = p.interpolate(0.0);
        p.omega_a0_ = w0.a;
        p.omega_b0_ = w0.b;
        return p;
    }

    ProfileShape shape() const noexcept { return shape_; }
    double omega_a0() const noexcept { return omega_a0_; }
    double omega_b0() const noexcept { return omega_b0_; }
    double delta() const noexcept { return delta_; }
    double nu() const noexcept { return nu_; }
    const std::vector<ProfileRow>& table() const noexcept { return table_; }

    // Same detuning, common mode shifted by `shift` on both oscillators.
    FrequencyProfile shifted(double shift) const {
        FrequencyProfile p = *this;
        p.omega_a0_ += shift;
        p.omega_b0_ += shift;
        for (auto& r : p.table_) {
            r.omega_a += shift;
            r.omega_b += shift;
        }
        p.validate_base();
        return p;
    }

    FrequencyPair at(double t) const {
        FrequencyPair w{omega_a0_, omega_b0_};
        switch (shape_) {
            case ProfileShape::constant:
                break;
            case ProfileShape::sinusoidal_detuning: {
                const double s = delta_ * std::sin(nu_ * t);
                w = {omega_a0_ + s, omega_b0_ - s};
                break;
            }
            case ProfileShape::tabulated:
                w = interpolate(t);
                break;
        }
        if (!std::isfinite(w.a) || !std::isfinite(w.b)) {
            throw ProfileEvaluationError("non-finite frequency at t=" + std::to_string(t));
        }
        return w;
    }

    double detuning(double t) const {
        const auto w = at(t);
        return w.a - w.b;
    }

    // Largest |Delta(t)| the profile can reach; used for resolution checks.
    double max_abs_detuning() const {
        switch (shape_) {
            case ProfileShape::constant:
                return std::abs(omega_a0_ - omega_b0_);
            case ProfileShape::sinusoidal_detuning:
                return std::abs(omega_a0_ - omega_b0_) + 2.0 * delta_;
            case ProfileShape::tabulated: {
                double m = 0.0;
                for (const auto& r : table_) m = std::max(m, std::abs(r.omega_a - r.omega_b));
                return m;
            }
        }
        return 0.0;
    }

    // Largest omega_a + omega_b over the profile.
    double max_sum_frequency() const {
        switch (shape_) {
            case ProfileShape::constant:
            case ProfileShape::sinusoidal_detuning:
                return omega_a0_ + omega_b0_;
            case ProfileShape::tabulated: {
                double m = 0.0;
                for (const auto& r : table_) m = std::max(m, r.omega_a + r.omega_b);
                return m;
            }
        }
        return 0.0;
    }

    // Last time at which the profile is defined.
    double horizon() const noexcept {
        return shape_ == ProfileShape::tabulated ? table_.back().t
                                                 : std::numeric_limits<double>::infinity();
    }

private:
    FrequencyProfile() = default;

    void validate_base() const {
        detail::require(std::isfinite(omega_a0_) && omega_a0_ >= 0.0, "omega_a0 must be >= 0");
        detail::require(std::isfinite(omega_b0_) && omega_b0_ >= 0.0, "omega_b0 must be >= 0");
    }

    FrequencyPair interpolate(double t) const {
        if (!(t >= table_.front().t && t <= table_.back().t)) {
            throw ProfileEvaluationError("t=" + std::to_string(t) +
                                         " lies outside the tabulated profile range");
        }
        auto hi = std::upper_bound(table_.begin(), table_.end(), t,
                                   [](double v, const ProfileRow& r) { return v < r.t; });
        if (hi == table_.end()) return {table_.back().omega_a, table_.back().omega_b};
        auto lo = std::prev(hi);
        const double s = (t - lo->t) / (hi->t - lo->t);
        return {lo->omega_a + s * (hi->omega_a - lo->omega_a),
                lo->omega_b + s * (hi->omega_b - lo->omega_b)};
    }

    ProfileShape shape_ = ProfileShape::constant;
    double omega_a0_ = 1.0;
    double omega_b0_ = 1.0;
    double delta_ = 0.0;
    double nu_ = 0.0;
    std::vector<ProfileRow> table_;
};

// Uniform grid of n points covering [0, t_end].
inline std::vector<double> uniform_grid(double t_end, std::size_t n) {
    detail::require(n >= 2, "a uniform grid needs at least two points");
    std::vector<double> ts(n);
    for (std::size_t i = 0; i < n; ++i) {
        ts[i] = t_end * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    ts.back() = t_end;
    return ts;
}

}  // namespace qhe
