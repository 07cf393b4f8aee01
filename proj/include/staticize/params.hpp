#pragma once

#include "core.hpp"

#include <cmath>
#include <string>

namespace staticize {

// Two-level time discretization of the clock registers.
struct ClockParams {
    // 64-bit: planned clocks routinely exceed 2^31 steps even when never materialized.
    long N_p = 1;
    long N_q = 2;
    long N_c = 2;
    double T = 1.0;
    double delta = 0.5; // T / N_c
    double tau = 1.0;   // T / N_p
    double sigma = 1.0;
    double x = 1.0;     // tau / sigma

    static ClockParams make(long N_p, long N_q, double T, double sigma) {
        require(N_p >= 1 && N_q >= 1, errc::invalid_argument, "N_p and N_q must be positive");
        require(T > 0.0 && sigma > 0.0, errc::invalid_argument, "T and sigma must be positive");
        ClockParams p;
        p.N_p = N_p;
        p.N_q = N_q;
        p.N_c = N_p * N_q;
        require(p.N_c % 2 == 0, errc::invalid_argument, "N_c = N_p * N_q must be even");
        p.T = T;
        p.delta = T / double(p.N_c);
        p.tau = T / double(N_p);
        p.sigma = sigma;
        p.x = p.tau / sigma;
        return p;
    }

    // sigma given in units of the clock spacing delta.
    static ClockParams with_ratio(long N_p, long N_q, double T, double sigma_over_delta) {
        return make(N_p, N_q, T, sigma_over_delta * T / double(N_p * N_q));
    }

    // Clock-only parameters (no coarse grouping): N_p = 1, N_q = N_c.
    static ClockParams clock_only(long N_c, double T, double sigma) { return make(1, N_c, T, sigma); }

    // 3 delta <= sigma <= T / 3, with a relative slack for exact boundary cases.
    bool in_window() const {
        const double eps = 1e-12;
        return 3.0 * delta <= sigma * (1 + eps) && sigma <= T / 3.0 * (1 + eps);
    }

    std::string window_warning() const {
        if (in_window()) return {};
        return "outside the validity window 3*delta <= sigma <= T/3 (delta = " + std::to_string(delta) +
               ", sigma = " + std::to_string(sigma) + ", T = " + std::to_string(T) + ")";
    }
};

} // namespace staticize
