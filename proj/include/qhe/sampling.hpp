// sampling.hpp - Seeded random draws for the property suites

#pragma once

#include "qhe/profile.hpp"

#include <cstdint>
#include <random>

namespace qhe {

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    FrequencyProfile constant_profile(double lo = 0.1, double hi = 10.0) {
        return FrequencyProfile::constant(uniform(lo, hi), uniform(lo, hi));
    }

    // omega_a0 > omega_b0 with a modest detuning drive.
    FrequencyProfile modulated_profile() {
        const double wb = uniform(0.5, 3.0);
        const double wa = wb + uniform(0.0, 3.0);
        return FrequencyProfile::sinusoidal(wa, wb, uniform(0.0, 0.5), uniform(0.5, 4.0));
    }

    // Piecewise-linear cycle over [0, t_c] that returns to its starting frequencies.
    FrequencyProfile closed_tabulated_profile(double t_c, double w_max = 5.0) {
        const double wa0 = uniform(0.0, 0.8 * w_max), wb0 = uniform(0.0, 0.8 * w_max);
        std::vector<ProfileRow> rows{{0.0, wa0, wb0}};
        const int knots = integer(1, 5);
        for (int k = 1; k <= knots; ++k) {
            rows.push_back({t_c * k / (knots + 1), uniform(0.0, w_max), uniform(0.0, w_max)});
        }
        rows.push_back({t_c, wa0, wb0});
        return FrequencyProfile::tabulated(rows);
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

}  // namespace qhe
