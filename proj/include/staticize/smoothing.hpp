#pragma once

#include "evolve.hpp"
#include "ham_model.hpp"
#include "quadrature.hpp"
#include "smoothing_constants.hpp"

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace staticize {

// ---- piecewise time-independent protocols ---------------------------------

struct ProtocolStep {
    std::vector<std::pair<Support, Mat>> terms; // constant terms, at most one per support
    double duration = 0.0;
    std::string label;
};

struct ProtocolSchedule {
    SiteGraph graph;
    std::vector<ProtocolStep> steps;

    double total_time() const {
        double t = 0.0;
        for (const auto& s : steps) t += s.duration;
        return t;
    }

    void validate() const {
        graph.validate();
        for (const auto& s : steps) {
            require(s.duration > 0.0, errc::invalid_argument, "step '" + s.label + "' has nonpositive duration");
            for (size_t i = 0; i < s.terms.size(); ++i)
                for (size_t j = 0; j < i; ++j)
                    require(!(s.terms[i].first == s.terms[j].first), errc::invalid_argument,
                            "step '" + s.label + "' has two terms on one support");
        }
    }

    SpMat step_operator(size_t i) const {
        std::vector<Triplet> t;
        for (const auto& [sup, m] : steps[i].terms) {
            std::vector<int> sites = sup.is_edge ? std::vector<int>{graph.edges[sup.index].first, graph.edges[sup.index].second}
                                                 : std::vector<int>{sup.index};
            add_local_action(t, m, sites, graph.n);
        }
        const Index dim = Index{1} << graph.n;
        SpMat out(dim, dim);
        out.setFromTriplets(t.begin(), t.end());
        return out;
    }

    // Exact product of step exponentials applied to psi (first step first).
    Vec apply(const Vec& psi, const KrylovOptions& k = {}) const {
        KrylovOptions kk = k;
        kk.tol = std::min(kk.tol, 1e-12);
        Vec y = psi;
        for (size_t i = 0; i < steps.size(); ++i) y = evolve_static(step_operator(i), y, steps[i].duration, kk).state;
        return y;
    }

    Mat unitary() const {
        const Index dim = Index{1} << graph.n;
        require(dim <= 256, errc::dimension_cap, "dense step unitary limited to dimension 256");
        Mat u = Mat::Identity(dim, dim);
        for (size_t i = 0; i < steps.size(); ++i) u = expm_herm(Mat(step_operator(i)), steps[i].duration) * u;
        return u;
    }

    std::vector<Support> supports() const {
        std::vector<Support> out;
        for (const auto& s : steps)
            for (const auto& [sup, m] : s.terms)
                if (std::find(out.begin(), out.end(), sup) == out.end()) out.push_back(sup);
        std::sort(out.begin(), out.end(), [](const Support& a, const Support& b) {
            return std::pair(a.is_edge, a.index) < std::pair(b.is_edge, b.index);
        });
        return out;
    }

    // Piecewise-constant Hamiltonian with period = total time.
    TimeDepHamiltonian as_piecewise() const {
        validate();
        std::vector<TermSchedule> terms;
        for (const Support& sup : supports()) {
            const int ld = sup.is_edge ? 4 : 2;
            std::vector<double> starts;
            std::vector<Mat> mats;
            double t = 0.0;
            for (const auto& s : steps) {
                Mat m = Mat::Zero(ld, ld);
                for (const auto& [x, mm] : s.terms)
                    if (x == sup) m = mm;
                starts.push_back(t);
                mats.push_back(m);
                t += s.duration;
            }
            terms.push_back(TermSchedule::piecewise(sup, starts, mats));
        }
        return TimeDepHamiltonian(graph, terms, total_time(), Smoothness::PiecewiseContinuous);
    }

    // Inverse sequence: negated Hamiltonians in reverse order.
    ProtocolSchedule inverse() const {
        ProtocolSchedule r;
        r.graph = graph;
        for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
            ProtocolStep s = *it;
            for (auto& [sup, m] : s.terms) m = -m;
            s.label = "~" + s.label;
            r.steps.push_back(std::move(s));
        }
        return r;
    }
};

// Copy of g with every cap multiplied by f; power-law labelling is dropped
// because the scaled weights no longer equal |i-j|^-alpha.
inline SiteGraph scale_caps(SiteGraph g, double f) {
    for (double& w : g.weight) w *= f;
    if (g.vertex_cap) *g.vertex_cap *= f;
    g.alpha.reset();
    return g;
}

// ---- mollifier ---------------------------------------------------------------

struct MollifierValue {
    double value = 0.0;
    double derivative = 0.0;
};

// phi_s(t) = exp(1/((t/s)^2 - 1)) / (2 nu s) on |t| < s.
inline MollifierValue mollifier_value(double s, double t) {
    require(s > 0.0, errc::invalid_argument, "mollifier width must be positive");
    const double u = t / s, g = u * u - 1.0;
    if (g >= 0.0) return {};
    const double nu = smoothing_constants().nu;
    const double e = std::exp(1.0 / g);
    MollifierValue r;
    r.value = e / (2.0 * nu * s);
    r.derivative = -t * e / (nu * s * s * s * g * g);
    return r;
}

// int_{-s}^{x} phi_s.
inline double mollifier_cdf(double s, double x) {
    if (x <= -s) return 0.0;
    if (x >= s) return 1.0;
    auto f = [s](double t) { return mollifier_value(s, t).value; };
    if (x <= 0.0) return integrate<double>(f, -s, x, 1e-14, 1e-14).value;
    return 1.0 - integrate<double>(f, x, s, 1e-14, 1e-14).value;
}

struct MollifierConfig {
    double s = 0.0;
    int grid_points = 4096;
    double quad_tol = 1e-10;
};

inline double choose_s_value(double h, double T, double eps) { return std::min(T / 4.0, eps / (3.0 * h * h * T)); }

// 2 H_base(2 (t - T/4)) on [T/4, 3T/4), zero elsewhere. Same U(T); twice the norms.
inline TimeDepHamiltonian compress_support(const TimeDepHamiltonian& base) {
    const double T = base.period();
    std::vector<TermSchedule> terms;
    for (const auto& term : base.terms()) {
        const int ld = term.local_dim();
        const Mat zero = Mat::Zero(ld, ld);
        if (term.kind == TermKind::Constant || term.kind == TermKind::Piecewise) {
            std::vector<double> starts{0.0};
            std::vector<Mat> mats{zero};
            const std::vector<double> bs = term.kind == TermKind::Constant ? std::vector<double>{0.0} : term.times;
            for (size_t i = 0; i < term.values.size(); ++i) {
                starts.push_back(T / 4.0 + bs[i] / 2.0);
                mats.push_back(2.0 * term.values[i]);
            }
            starts.push_back(3.0 * T / 4.0);
            mats.push_back(zero);
            terms.push_back(TermSchedule::piecewise(term.support, starts, mats));
        } else {
            TermSchedule src = term;
            auto f = [src, T, zero](double t) -> Mat {
                if (t < T / 4.0 || t >= 3.0 * T / 4.0) return zero;
                return 2.0 * src.value(2.0 * (t - T / 4.0));
            };
            terms.push_back(TermSchedule::closed_form(term.support, f));
        }
    }
    return TimeDepHamiltonian(scale_caps(base.graph(), 2.0), terms, T, Smoothness::PiecewiseContinuous);
}

struct MollifyReport {
    double max_quad_error = 0.0;
    bool converged = true;
};

// phi_s * H_hat, sampled on a uniform grid with derivative samples phi_s' * H_hat.
// Piecewise-constant inputs use exact jump formulas: the value weights are
// mollifier CDF differences and the derivative is a sum of phi_s at the jumps.
inline TimeDepHamiltonian mollify(const TimeDepHamiltonian& base, const MollifierConfig& cfg,
                                  MollifyReport* report = nullptr) {
    const double T = base.period(), s = cfg.s;
    require(s > 0.0 && s <= T / 4.0 * (1 + 1e-12), errc::invalid_argument, "mollifier width must lie in (0, T/4]");
    require(cfg.grid_points >= 8, errc::invalid_argument, "mollifier grid too coarse");
    const TimeDepHamiltonian hat = compress_support(base);
    const int G = cfg.grid_points;
    std::vector<double> grid(G + 1);
    for (int i = 0; i <= G; ++i) grid[i] = T * i / G;
    MollifyReport rep;
    std::vector<TermSchedule> terms;
    for (const auto& term : hat.terms()) {
        const int ld = term.local_dim();
        std::vector<Mat> vals(G + 1, Mat::Zero(ld, ld)), ders(G + 1, Mat::Zero(ld, ld));
        if (term.kind == TermKind::Piecewise) {
            const size_t np = term.times.size();
            for (int i = 0; i <= G; ++i) {
                const double t = grid[i];
                for (size_t p = 0; p < np; ++p) {
                    const double a = term.times[p], b = p + 1 < np ? term.times[p + 1] : T;
                    if (t + s <= a || t - s >= b) continue;
                    const double w = mollifier_cdf(s, t - a) - mollifier_cdf(s, t - b);
                    const double dw = mollifier_value(s, t - a).value - mollifier_value(s, t - b).value;
                    vals[i] += w * term.values[p];
                    ders[i] += dw * term.values[p];
                }
            }
        } else {
            for (int i = 0; i <= G; ++i) {
                const double t = grid[i];
                const double lo = std::max(0.0, t - s), hi = std::min(T, t + s);
                if (hi <= lo) continue;
                std::vector<double> cuts{lo};
                for (double c : {T / 4.0, 3.0 * T / 4.0})
                    if (c > lo && c < hi) cuts.push_back(c);
                cuts.push_back(hi);
                auto fv = [&](double u) { return Mat(mollifier_value(s, t - u).value * term.value(u)); };
                auto fd = [&](double u) { return Mat(mollifier_value(s, t - u).derivative * term.value(u)); };
                auto rv = integrate_pieces<Mat>(fv, cuts, cfg.quad_tol);
                auto rd = integrate_pieces<Mat>(fd, cuts, cfg.quad_tol);
                vals[i] = rv.value;
                ders[i] = rd.value;
                rep.max_quad_error = std::max({rep.max_quad_error, rv.error, rd.error});
                rep.converged = rep.converged && rv.converged && rd.converged;
            }
        }
        for (int i = 0; i <= G; ++i) {
            vals[i] = 0.5 * (vals[i] + vals[i].adjoint()).eval();
            ders[i] = 0.5 * (ders[i] + ders[i].adjoint()).eval();
        }
        terms.push_back(TermSchedule::sampled(term.support, grid, vals, ders));
    }
    if (!rep.converged)
        fail(errc::quadrature, "mollifier convolution did not converge; achieved error " + std::to_string(rep.max_quad_error));
    if (report) *report = rep;
    return TimeDepHamiltonian(hat.graph(), terms, T, Smoothness::DifferentiablePeriodic);
}

// ---- bump envelopes ------------------------------------------------------

// phi_{T,t0}(t) = (1/nu) exp(-1/(1 - 4((t - t0)/T - 1/2)^2)) on (t0, t0 + T).
inline double bump_value(double T, double t0, double t) { return unit_bump((t - t0) / T) / smoothing_constants().nu; }

inline double bump_derivative(double T, double t0, double t) {
    return unit_bump_derivative((t - t0) / T) / (smoothing_constants().nu * T);
}

struct BumpNorms {
    double h = 0.0;  // xi * sum_x max_i ||H_x^(i)||
    double h1 = 0.0; // (zeta / nu) * sum_x max_i ||H_x^(i)|| / T_i
};

inline BumpNorms bump_norms(const ProtocolSchedule& sched) {
    const auto& c = smoothing_constants();
    BumpNorms b;
    for (const Support& sup : sched.supports()) {
        double mh = 0.0, mh1 = 0.0;
        for (const auto& st : sched.steps)
            for (const auto& [x, m] : st.terms)
                if (x == sup) {
                    mh = std::max(mh, herm_norm(m));
                    mh1 = std::max(mh1, herm_norm(m) / st.duration);
                }
        b.h += c.xi * mh;
        b.h1 += c.zeta_normalized() * mh1;
    }
    return b;
}

// Each step's constant Hamiltonian multiplied by a smooth envelope of unit
// mean over its interval: the step unitaries are reproduced exactly.
inline TimeDepHamiltonian bump_staticize_schedule(const ProtocolSchedule& sched) {
    require(!sched.steps.empty(), errc::invalid_argument, "schedule is empty");
    sched.validate();
    std::vector<double> starts, durs;
    double t = 0.0;
    for (const auto& st : sched.steps) {
        starts.push_back(t);
        durs.push_back(st.duration);
        t += st.duration;
    }
    const double T = t;
    std::vector<TermSchedule> terms;
    for (const Support& sup : sched.supports()) {
        const int ld = sup.is_edge ? 4 : 2;
        std::vector<Mat> mats;
        for (const auto& st : sched.steps) {
            Mat m = Mat::Zero(ld, ld);
            for (const auto& [x, mm] : st.terms)
                if (x == sup) m = mm;
            mats.push_back(m);
        }
        auto locate = [starts](double tt) {
            auto it = std::upper_bound(starts.begin(), starts.end(), tt);
            return it == starts.begin() ? size_t{0} : static_cast<size_t>(it - starts.begin()) - 1;
        };
        auto f = [=](double tt) -> Mat {
            size_t i = locate(tt);
            return bump_value(durs[i], starts[i], tt) * mats[i];
        };
        auto df = [=](double tt) -> Mat {
            size_t i = locate(tt);
            return bump_derivative(durs[i], starts[i], tt) * mats[i];
        };
        terms.push_back(TermSchedule::closed_form(sup, f, df));
    }
    return TimeDepHamiltonian(scale_caps(sched.graph, smoothing_constants().xi), terms, T,
                              Smoothness::DifferentiablePeriodic);
}

} // namespace staticize
