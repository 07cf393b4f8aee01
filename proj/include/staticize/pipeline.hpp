#pragma once

#include "bounds.hpp"
#include "clocks.hpp"
#include "evolve.hpp"
#include "smoothing.hpp"

#include <chrono>
#include <limits>
#include <optional>
#include <string>

namespace staticize {

struct MeasureOptions {
    double timeordered_tol = 1e-12;
    KrylovOptions krylov{1e-11, 30, 512, ExpMethod::Auto};
    AssemblyOptions assembly{};
};

struct TheoremCheck {
    ClockParams params;
    HamiltonianNorms norms;
    ErrorBudget budget;
    bool bound_available = true; // false when the constants are out of domain; budget.total is then +inf
    double measured = 0.0;
    double certificate = 0.0; // time-ordered certificate + Krylov estimate
    Index dim = 0;
    std::string warning;
    double wall_seconds = 0.0;
};

// ||U(T) psi (x) Phi_0 - exp(-i Hbar T) psi (x) Phi_0|| against the Theorem bound.
inline TheoremCheck check_theorem(const TimeDepHamiltonian& H, const ClockParams& p, const Vec& psi,
                                  const MeasureOptions& opt = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    TheoremCheck c;
    c.params = p;
    c.warning = p.window_warning();
    c.norms = compute_norms(H);
    try {
        c.budget = theorem_bound(c.norms.h, c.norms.h1, p, H.n_sites());
    } catch (const Error& e) {
        if (e.kind() != errc::out_of_domain) throw;
        c.bound_available = false;
        c.budget.in_window = false;
        c.budget.total = std::numeric_limits<double>::infinity();
    }
    const StaticizedHamiltonian s = assemble_staticized(H, p, opt.assembly);
    c.dim = s.total.rows();
    TimeOrderedOptions to;
    to.tol = opt.timeordered_tol;
    const TimeOrderedReport exact = evolve_timeordered(H, psi, p.T, to);
    const Vec phi0 = product_clock_state(std::vector<int>(H.n_sites(), 0), p).state;
    const StaticReport st = evolve_static(s.total, joint_state(psi, phi0), p.T, opt.krylov);
    c.measured = (joint_state(exact.state, phi0) - st.state).norm();
    c.certificate = exact.certificate + st.error_estimate;
    c.budget.measured = c.measured;
    c.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return c;
}

enum class SmoothingMethod { Bump, Mollify };

inline SmoothingMethod parse_method(const std::string& s) {
    if (s == "bump") return SmoothingMethod::Bump;
    if (s == "mollify") return SmoothingMethod::Mollify;
    fail(errc::config, "method must be 'bump' or 'mollify', got '" + s + "'");
}

struct StaticizeRequest {
    SmoothingMethod method = SmoothingMethod::Bump;
    std::optional<ClockParams> params; // explicit parameters
    std::optional<double> eps;         // or an error target for the planner
    std::optional<double> s;           // mollifier width; default T/8 with explicit params
    int mollifier_grid = 4096;
    AssemblyOptions assembly{};
};

struct ProtocolStaticization {
    TimeDepHamiltonian smoothed;
    ClockParams params;
    double h = 0.0, h1 = 0.0; // norms entering the bound
    std::optional<double> s;
    ErrorBudget budget;
    StaticizedHamiltonian hbar;
    std::string warning;
};

// Smooth a protocol, pick or accept clock parameters, assemble Hbar and the matching bound.
inline ProtocolStaticization staticize_protocol(const ProtocolSchedule& sched, const StaticizeRequest& req) {
    require(req.params.has_value() != req.eps.has_value(), errc::config, "give exactly one of params or eps");
    sched.validate();
    ProtocolStaticization out;
    const double T = sched.total_time();
    const int N = sched.graph.n;
    if (req.method == SmoothingMethod::Bump) {
        out.smoothed = bump_staticize_schedule(sched);
        const BumpNorms b = bump_norms(sched);
        out.h = b.h;
        out.h1 = b.h1;
        out.params = req.params ? *req.params : plan_parameters(out.h, out.h1, T, N, *req.eps).params;
        out.budget = theorem_bound(out.h, out.h1, out.params, N);
        out.budget.smoothing_term = 0.0;
        out.budget.finalize();
    } else {
        const TimeDepHamiltonian base = sched.as_piecewise();
        NormOptions no;
        no.accept_nonsmooth = true;
        no.want_h1 = false;
        const double h = compute_norms(base, no).h;
        double s = req.s.value_or(T / 8.0);
        if (req.eps) {
            if (!req.s) s = choose_s(h, T, *req.eps);
            out.params = plan_parameters(mollified_h(h), mollified_h1(h, s), T, N, *req.eps / 2.0).params;
        } else {
            out.params = *req.params;
        }
        MollifierConfig mc;
        mc.s = s;
        mc.grid_points = req.mollifier_grid;
        out.smoothed = mollify(base, mc);
        out.h = h;
        out.h1 = mollified_h1(h, s);
        out.s = s;
        out.budget = mollified_bound(h, N, out.params, s);
    }
    out.warning = out.params.window_warning();
    out.hbar = assemble_staticized(out.smoothed, out.params, req.assembly);
    return out;
}

struct ProtocolMeasurement {
    double measured = 0.0;
    double certificate = 0.0;
    double wall_seconds = 0.0;
};

// Distance between the staticized evolution and the exact protocol unitary on psi (x) Phi_0.
inline ProtocolMeasurement measure_protocol(const ProtocolStaticization& ps, const ProtocolSchedule& sched, const Vec& psi,
                                            const KrylovOptions& k = {1e-11, 30, 512, ExpMethod::Auto}) {
    const auto t0 = std::chrono::steady_clock::now();
    ProtocolMeasurement m;
    const Vec phi0 = product_clock_state(std::vector<int>(sched.graph.n, 0), ps.params).state;
    KrylovOptions ex;
    ex.tol = 1e-13;
    const Vec ideal = sched.apply(psi, ex);
    const StaticReport st = evolve_static(ps.hbar.total, joint_state(psi, phi0), ps.params.T, k);
    m.measured = (joint_state(ideal, phi0) - st.state).norm();
    m.certificate = st.error_estimate;
    m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return m;
}

} // namespace staticize
