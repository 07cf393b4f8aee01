#pragma once

#include "quadrature.hpp"

#include <cmath>
#include <string>

namespace staticize {

// exp(-1/(1 - 4 (u - 1/2)^2)) on (0, 1), zero elsewhere.
inline double unit_bump(double u) {
    const double g = 1.0 - 4.0 * (u - 0.5) * (u - 0.5);
    return g > 0.0 ? std::exp(-1.0 / g) : 0.0;
}

inline double unit_bump_derivative(double u) {
    const double w = u - 0.5, g = 1.0 - 4.0 * w * w;
    return g > 0.0 ? -8.0 * w * std::exp(-1.0 / g) / (g * g) : 0.0;
}

struct SmoothingConstants {
    double nu;   // integral of unit_bump over [0, 1]
    double mu;   // (1/nu) * integral over [-1, 1] of |v| exp(1/(v^2 - 1))
    double xi;   // max of the normalized bump
    double zeta; // max |d/du| of unit_bump (not normalized by nu)
    // max |d/du| of the normalized bump, zeta / nu; the bump envelope derivative is this over T
    double zeta_normalized() const { return zeta / nu; }
};

namespace detail {

template <class G>
double dense_scan_max(G&& g, double a, double b, int points = 20000) {
    int best = 0;
    double bv = -INFINITY;
    for (int i = 0; i <= points; ++i) {
        double v = g(a + (b - a) * i / points);
        if (v > bv) {
            bv = v;
            best = i;
        }
    }
    double lo = a + (b - a) * std::max(best - 1, 0) / points, hi = a + (b - a) * std::min(best + 1, points) / points;
    const double gr = (std::sqrt(5.0) - 1) / 2;
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    for (int it = 0; it < 100; ++it) {
        if (g(c) > g(d)) {
            hi = d;
        } else {
            lo = c;
        }
        c = hi - gr * (hi - lo);
        d = lo + gr * (hi - lo);
    }
    return std::max(bv, g(0.5 * (lo + hi)));
}

inline SmoothingConstants compute_smoothing_constants() {
    SmoothingConstants c{};
    c.nu = integrate<double>(unit_bump, 0.0, 1.0, 1e-14, 1e-14).value;
    auto mu_int = [](double v) {
        double g = v * v - 1.0;
        return g < 0.0 ? std::abs(v) * std::exp(1.0 / g) : 0.0;
    };
    c.mu = integrate_pieces<double>(mu_int, {-1.0, 0.0, 1.0}, 1e-14, 1e-14).value / c.nu;
    c.xi = dense_scan_max([&](double u) { return unit_bump(u) / c.nu; }, 0.0, 1.0);
    c.zeta = dense_scan_max([](double u) { return std::abs(unit_bump_derivative(u)); }, 0.0, 1.0);
    const double quoted[4] = {0.222, 0.669, 1.657, 1.597};
    const double got[4] = {c.nu, c.mu, c.xi, c.zeta};
    for (int i = 0; i < 4; ++i)
        if (std::abs(got[i] - quoted[i]) > 2e-3)
            fail("self-test", "smoothing constant " + std::to_string(i) + " = " + std::to_string(got[i]) +
                                  " disagrees with its quoted value " + std::to_string(quoted[i]));
    return c;
}

} // namespace detail

inline const SmoothingConstants& smoothing_constants() {
    static const SmoothingConstants c = detail::compute_smoothing_constants();
    return c;
}

} // namespace staticize
