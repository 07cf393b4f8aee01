#pragma once

#include "params.hpp"
#include "smoothing_constants.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>

namespace staticize {

struct BoundConstants {
    double A = 1.0;
    double B = 1.0;
    double D = 1.0;
    bool in_window = true;
};

// A = sqrt(1 + 3 delta/sigma), B = sqrt(1 - [sigma/T e^{-T^2/2sigma^2} + delta/sigma]),
// D = 1 + 2^{-3/2} delta/sigma + (delta/sigma)^2.
inline BoundConstants constants(double delta, double sigma, double T) {
    const double r = delta / sigma;
    const double radicand = 1.0 - (sigma / T * std::exp(-T * T / (2 * sigma * sigma)) + r);
    require(radicand > 0.0, errc::out_of_domain,
            "B is not real (radicand " + std::to_string(radicand) + "); parameters are far outside the validity window");
    BoundConstants c;
    c.A = std::sqrt(1.0 + 3.0 * r);
    c.B = std::sqrt(radicand);
    c.D = 1.0 + std::pow(2.0, -1.5) * r + r * r;
    c.in_window = 3.0 * delta <= sigma * (1 + 1e-12) && sigma <= T / 3.0 * (1 + 1e-12);
    return c;
}

inline BoundConstants constants(const ClockParams& p) { return constants(p.delta, p.sigma, p.T); }

struct ErrorBudget {
    double trotter_term = 0.0;
    double controlled_term = 0.0;
    double translation_term = 0.0;
    double wraparound_term = 0.0;
    std::optional<double> smoothing_term;
    double total = 0.0;
    std::optional<double> measured;
    bool in_window = true;

    void finalize() {
        total = trotter_term + controlled_term + translation_term + wraparound_term + smoothing_term.value_or(0.0);
    }
    double term(int i) const {
        switch (i) {
        case 0: return trotter_term;
        case 1: return controlled_term;
        case 2: return translation_term;
        default: return wraparound_term;
        }
    }
};

namespace detail {

inline double controlled_term(double h, double T, double N, const ClockParams& p, const BoundConstants& c) {
    return 2.0 * T * h * std::sqrt(N * p.sigma / p.tau) * std::exp(-p.tau * p.tau / (4 * p.sigma * p.sigma)) / c.B;
}

inline double translation_term(double T, double N, const ClockParams& p, const BoundConstants& c) {
    return 4.0 * T * std::sqrt(N) * (c.A * c.D / c.B) * p.delta / (p.sigma * p.sigma);
}

inline double wraparound_term(double T, const ClockParams& p, const BoundConstants& c) {
    const double a = T - 6.0 * p.delta;
    return 2.0 * std::sqrt(p.N_c * T / p.sigma) * std::exp(-a * a / (4 * p.sigma * p.sigma)) / c.B;
}

} // namespace detail

// Four-term total-error bound for the staticized evolution over one period.
// The first term is h1 T^2 / N_p (printed as 2 h1 T^2 / (2 N_p)).
inline ErrorBudget theorem_bound(double h, double h1, const ClockParams& p, int N) {
    const BoundConstants c = constants(p);
    const double T = p.T;
    ErrorBudget b;
    b.trotter_term = 2.0 * h1 * T * T / (2.0 * p.N_p);
    b.controlled_term = detail::controlled_term(h, T, N, p, c);
    b.translation_term = detail::translation_term(T, N, p, c);
    b.wraparound_term = detail::wraparound_term(T, p, c);
    b.in_window = c.in_window;
    b.finalize();
    return b;
}

// The planner's stricter reading of the first term: 2 h1 T^2 / N_p.
inline double trotter_term_conservative(double h1, double T, int N_p) { return 2.0 * h1 * T * T / N_p; }

// ceil that ignores floating noise just above an integer.
inline long guarded_ceil(double v) { return static_cast<long>(std::ceil(v * (1.0 - 1e-12))); }

struct PlanResult {
    ClockParams params;
    double x_squared_terms[3] = {0, 0, 0};
    bool window_ok = true;
    bool n_q_bumped_for_parity = false;
};

// Parameter choice guaranteeing total error <= eps.
inline PlanResult plan_parameters(double h, double h1, double T, int N, double eps) {
    require(eps > 0.0, errc::invalid_argument, "epsilon must be positive");
    require(std::isfinite(h) && std::isfinite(h1) && std::isfinite(T) && T > 0.0 && h >= 0.0 && h1 >= 0.0,
            errc::invalid_argument, "h, h1 must be finite and nonnegative, T positive");
    require(N >= 1, errc::invalid_argument, "N must be positive");
    PlanResult r;
    const long N_p = std::max(3L, guarded_ceil(8.0 * h1 * T * T / eps));
    const double sN = std::sqrt(static_cast<double>(N));
    const double hts = h * T * sN;
    double t1 = -INFINITY;
    if (hts > 0.0) {
        const double corr = 1.0 + std::pow(eps / (16.0 * hts), 4) / 8.0;
        t1 = 4.0 * std::log(20.0 * hts / eps * corr);
    }
    const double t2 = 10.0 / (double(N_p) * N_p) * std::log(1536.0 * std::cbrt(double(N)) / (eps * eps));
    const double t3 = 12.0 / (double(N_p) * N_p) * std::log(20.0 * std::sqrt(double(N_p)) / eps);
    r.x_squared_terms[0] = t1;
    r.x_squared_terms[1] = t2;
    r.x_squared_terms[2] = t3;
    const double x2 = std::max({t1, t2, t3, 0.0});
    const double x = std::sqrt(x2);
    long N_q = std::max(4L, guarded_ceil(45.0 * sN * x2 * N_p / eps));
    if ((N_p * N_q) % 2 != 0) {
        ++N_q;
        r.n_q_bumped_for_parity = true;
    }
    const double tau = T / double(N_p);
    r.params = ClockParams::make(N_p, N_q, T, x > 0.0 ? tau / x : INFINITY);
    r.window_ok = r.params.in_window();
    return r;
}

// Bound for the mollifier-smoothed pipeline (includes the smoothing error).
inline ErrorBudget mollified_bound(double h, int N, const ClockParams& p, double s) {
    const double T = p.T;
    require(s > 0.0 && s <= T / 4.0 * (1 + 1e-12), errc::invalid_argument, "mollifier width s must lie in (0, T/4]");
    const BoundConstants c = constants(p);
    const double nu = smoothing_constants().nu;
    ErrorBudget b;
    b.trotter_term = 3.0 * h * T * T / (2.0 * p.N_p * nu * s);
    b.controlled_term = 2.0 * detail::controlled_term(h, T, N, p, c);
    b.translation_term = detail::translation_term(T, N, p, c);
    b.wraparound_term = detail::wraparound_term(T, p, c);
    b.smoothing_term = 1.5 * h * h * s * T;
    b.in_window = c.in_window;
    b.finalize();
    return b;
}

// Smoothed-norm bounds after mollification: h~ <= 2h, h~1 <= 3h/(2 nu s).
inline double mollified_h(double h) { return 2.0 * h; }
inline double mollified_h1(double h, double s) { return 3.0 * h / (2.0 * smoothing_constants().nu * s); }

inline double choose_s(double h, double T, double eps) {
    require(h > 0.0 && T > 0.0 && eps > 0.0, errc::invalid_argument, "h, T, eps must be positive");
    return std::min(T / 4.0, eps / (3.0 * h * h * T));
}

// ---- lemma right-hand sides -------------------------------------------------

struct LemmaInputs {
    ClockParams p;
    double N = 1;          // number of sites / tensor power
    double distance = 0;   // S1: ||psi - phi||
    double window = 1;     // S3: half-width of the kept window, in slots
    int order = 1;         // S4, S5
    double step = 0;       // S4: finite-difference step
    double max_deriv = 0;  // S4: max |f'''| (order 1) or |f''''| (order 2) on the stencil
    double t = 0;          // S8
    double comm_norm = 0;  // S8: ||[A, B]||
    double T = 1;          // S9
    double n_steps = 1;    // S9
    double max_hdot = 0;   // S9
    double h = 0, h1 = 0;  // S10, S12
    double m = 1;          // S11: number of delta-translations
    double eta = 0;        // S12: evolution time
};

inline double lemma_rhs(const std::string& id, const LemmaInputs& in) {
    const auto& p = in.p;
    auto C = [&] { return constants(p); };
    const double r = p.delta / p.sigma;
    if (id == "S1") return std::sqrt(in.N) * in.distance;
    if (id == "S2") return std::sqrt(r) / C().B;
    if (id == "S3") {
        const double w = in.window;
        return std::exp(-w * w * p.delta * p.delta / (p.sigma * p.sigma)) / (std::sqrt(2.0) * C().B) *
               std::sqrt(p.sigma / (w * p.delta));
    }
    if (id == "S4") {
        require(in.order == 1 || in.order == 2, errc::invalid_argument, "finite-difference order must be 1 or 2");
        return (in.order == 1 ? 1.0 / 6.0 : 1.0 / 3.0) * in.step * in.step * in.max_deriv;
    }
    if (id == "S5") {
        auto c = C();
        if (in.order == 1) return std::sqrt(2.0) * p.delta * p.delta / std::pow(p.sigma, 3) * (c.A / c.B);
        require(in.order == 2, errc::invalid_argument, "derivative-state order must be 1 or 2");
        const double a = (p.N_c - 6) * p.delta;
        return 8.0 * p.delta * p.delta / std::pow(p.sigma, 4) * (c.A / c.B) +
               std::exp(-a * a / (4 * p.sigma * p.sigma)) / (c.B * std::sqrt(p.sigma * std::pow(p.delta, 3)));
    }
    if (id == "S6") {
        auto c = C();
        return 4.0 * (c.A / c.B) / (p.sigma * p.sigma);
    }
    if (id == "S7") {
        auto c = C();
        const double a = (p.N_c - 2) * p.delta;
        return 2.0 * (c.A / c.B) * r * r + std::sqrt(r) * std::exp(-a * a / (4 * p.sigma * p.sigma)) / c.B;
    }
    if (id == "S8") return 0.5 * in.t * in.t * in.comm_norm;
    if (id == "S9") return in.T * in.T / in.n_steps * in.max_hdot;
    if (id == "S10") return in.h1;
    if (id == "S11") {
        auto c = C();
        const double a = p.T - 6.0 * p.delta;
        return in.m * std::sqrt(in.N) *
               (4.0 * (c.A * c.D / c.B) * r * r + 2.0 * std::sqrt(r) * std::exp(-a * a / (4 * p.sigma * p.sigma)) / c.B);
    }
    if (id == "S12") {
        auto c = C();
        return 0.5 * in.eta * p.tau * in.h1 + 2.0 * in.eta * in.h * std::sqrt(in.N * p.sigma / p.tau) *
                                                   std::exp(-p.tau * p.tau / (4 * p.sigma * p.sigma)) / c.B;
    }
    fail(errc::unknown_lemma, "no right-hand side registered for '" + id + "'");
}

// ---- ancilla reports -------------------------------------------------------

struct ScalingInputs {
    double N = 1, h = 1, h1 = 1, T = 1, eps = 0.1, alpha = 2.0;
};

struct AncillaReport {
    int N_c = 2;
    int qubits_per_site = 1;
    std::string context;
    std::string scaling;              // reference curve as printed
    std::string scaling_bump;         // bump-function variant, when one exists
    std::optional<double> z_c;
    std::optional<double> reference_value; // the curve evaluated at the inputs, constants dropped
};

inline int ceil_log2(long n) {
    int k = 0;
    while ((1L << k) < n) ++k;
    return k;
}

inline std::string fmt_num(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

inline AncillaReport ancilla_report(int N_c, const std::string& context, const ScalingInputs& in = {}) {
    require(N_c >= 2, errc::invalid_argument, "N_c must be at least 2");
    AncillaReport r;
    r.N_c = N_c;
    r.qubits_per_site = ceil_log2(N_c);
    r.context = context;
    const double sN = std::sqrt(in.N);
    if (context == "generic") {
        r.scaling = "N_c = Theta(sqrt(N) h_1^2 T^4/eps^3 log(h T sqrt(N)/eps))";
        r.reference_value = sN * in.h1 * in.h1 * std::pow(in.T, 4) / std::pow(in.eps, 3) * std::log(in.h * in.T * sN / in.eps);
    } else if (context == "mollified") {
        r.scaling = "N_c = O(sqrt(N) h^6 T^6/eps^5 log(h T sqrt(N)/eps))";
        r.reference_value = sN * std::pow(in.h * in.T, 6) / std::pow(in.eps, 5) * std::log(in.h * in.T * sN / in.eps);
    } else if (context == "longrange") {
        r.scaling = "N_c = O(N^{13/2} T^6/eps^5 log(N^{3/2} T/eps))";
        r.scaling_bump = "N_c = O(N^{5/2} T^4/eps^3 log(N^{3/2} T/eps))";
        r.reference_value = std::pow(in.N, 6.5) * std::pow(in.T, 6) / std::pow(in.eps, 5) *
                            std::log(std::pow(in.N, 1.5) * in.T / in.eps);
    } else if (context == "strong-longrange") {
        const double L = std::log(in.N);
        r.scaling = "N_c = O(N^{13/2} log^{12} N log[N^{3/2} log^2 N])";
        r.scaling_bump = "N_c = O(N^{5/2} log^4 N log[N log^2 N])";
        r.reference_value = std::pow(in.N, 6.5) * std::pow(L, 12) * std::log(std::pow(in.N, 1.5) * L * L);
    } else if (context == "disordered") {
        const double zc = std::max(1.0, 1.0 / in.alpha);
        r.z_c = zc;
        r.scaling = "N_c = O(N^{0.5+6.6z_c}/eps^5 log(N^{0.5+1.1z_c}/eps)), z_c = " + fmt_num(zc) + ": N^{" +
                    fmt_num(0.5 + 6.6 * zc) + "}";
        r.scaling_bump = "N_c = O(N^{0.5+4.4z_c}/eps^3 log(N^{0.5+1.1z_c}/eps)), z_c = " + fmt_num(zc) + ": N^{" +
                         fmt_num(0.5 + 4.4 * zc) + "}";
        r.reference_value = std::pow(in.N, 0.5 + 6.6 * zc) / std::pow(in.eps, 5) *
                            std::log(std::pow(in.N, 0.5 + 1.1 * zc) / in.eps);
    } else {
        fail(errc::invalid_argument, "unknown ancilla context '" + context + "'");
    }
    return r;
}

} // namespace staticize
