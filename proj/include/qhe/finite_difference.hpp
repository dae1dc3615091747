// finite_difference.hpp - Derivatives and running integrals of sampled series

#pragma once

#include "qhe/errors.hpp"

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <vector>

namespace qhe::fd {

// Finite-difference weights for the first derivative at x0 from the nodes x
// (Fornberg's recursion).
inline std::vector<double> first_derivative_weights(double x0, const double* x, std::size_t n) {
    std::vector<double> c0(n, 0.0), c1(n, 0.0);  // derivative orders 0 and 1
    c0[0] = 1.0;
    double prod = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        double prod_new = 1.0;
        for (std::size_t j = 0; j < i; ++j) {
            const double diff = x[i] - x[j];
            prod_new *= diff;
            if (j == i - 1) {
                c1[i] = prod * (c0[i - 1] - (x[i - 1] - x0) * c1[i - 1]) / prod_new;
                c0[i] = -prod * (x[i - 1] - x0) * c0[i - 1] / prod_new;
            }
            c1[j] = ((x[i] - x0) * c1[j] - c0[j]) / diff;
            c0[j] = (x[i] - x0) * c0[j] / diff;
        }
        prod = prod_new;
    }
    return c1;
}

// Fourth-order derivative on a possibly non-uniform grid: five-point centered
// stencils inside, shifted five-point stencils near the ends.
inline std::vector<double> derivative(const std::vector<double>& t, const std::vector<double>& y) {
    constexpr std::size_t width = 5;
    const std::size_t n = t.size();
    detail::require(n >= width && y.size() == n, "derivative needs at least five samples");
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t first = std::min(i >= width / 2 ? i - width / 2 : 0, n - width);
        const auto w = first_derivative_weights(t[i], &t[first], width);
        double s = 0.0;
        for (std::size_t k = 0; k < width; ++k) s += w[k] * y[first + k];
        d[i] = s;
    }
    return d;
}

// Running trapezoid integral, starting at 0 on the first sample.
inline std::vector<double> cumulative_trapezoid(const std::vector<double>& t,
                                                const std::vector<double>& f) {
    detail::require(f.size() == t.size() && !t.empty(), "trapezoid needs matching samples");
    std::vector<double> out(t.size(), 0.0);
    for (std::size_t i = 1; i < t.size(); ++i) {
        out[i] = out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
    }
    return out;
}

inline double max_spacing(const std::vector<double>& t) {
    double h = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) h = std::max(h, t[i] - t[i - 1]);
    return h;
}

}  // namespace qhe::fd

namespace qhe {

// Two sides of an integro-differential identity evaluated on a sample grid.
struct IdentityCheck {
    std::vector<double> times;
    std::vector<double> lhs;
    std::vector<double> rhs;
    std::vector<double> residual;

    double max_residual() const {
        double m = 0.0;
        for (double r : residual) m = std::max(m, r);
        return m;
    }
};

namespace detail {

inline void require_resolution(const std::vector<double>& times, double period, const char* what) {
    constexpr double kPointsPerPeriod = 20.0;
    detail::require(times.size() >= 3, "identity check needs at least three samples");
    const double h = fd::max_spacing(times);
    if (h > period / kPointsPerPeriod) {
        std::ostringstream msg;
        msg << what << ": sample spacing " << h << " exceeds " << period / kPointsPerPeriod
            << " (20 points per period " << period << ")";
        throw ResolutionError(msg.str());
    }
}

}  // namespace detail

}  // namespace qhe
