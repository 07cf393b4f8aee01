#pragma once

#include "bounds.hpp"
#include "rng.hpp"
#include "smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace staticize {

namespace gates {
// Projector onto the -1 eigenvector of the Hadamard gate: exp(-i pi P) = Hadamard.
inline Mat hadamard_minus_projector() {
    const double s = 1.0 / std::sqrt(2.0);
    Mat h(2, 2);
    h << s, s, s, -s;
    return 0.5 * (Mat::Identity(2, 2) - h);
}
inline Mat hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    Mat h(2, 2);
    h << s, s, s, -s;
    return h;
}
inline Mat swap_generator() { return 0.25 * (kron(pauli::x(), pauli::x()) + kron(pauli::y(), pauli::y()) + kron(pauli::z(), pauli::z())); }
} // namespace gates

// Index of edge {i, j} in SiteGraph::complete / power_law_lattice ordering.
inline int complete_edge_index(int n, int i, int j) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

// ---- long-range GHZ protocol ---------------------------------------------

enum class LongRangeRegime { Sub, Critical, Super }; // alpha in (d,2d), = 2d, in (2d,2d+1]

// Which sites receive the Hadamard step at level j. SigmaOnly targets rho(C)
// for C in Sigma(B), B in the level-(j+1) partition (the sub-cubes that were
// just phase-coupled). AllButSpine targets every level-j cube except C_j.
enum class HadamardTargets { SigmaOnly, AllButSpine };

struct LongRangeConfig {
    int d = 1;
    double alpha = 2.5;
    int q = 1;
    LongRangeRegime regime = LongRangeRegime::Super;
    std::vector<long> m; // m[1..q]; m[0] unused
    std::vector<long> r; // r[0..q], r[0] = 1
    std::vector<double> V;
    long side = 1;
    double N = 1;
    bool reflected = false; // rooted at the far corner
    HadamardTargets targets = HadamardTargets::SigmaOnly;

    std::vector<long> coords(long site) const {
        std::vector<long> c(d);
        for (int k = 0; k < d; ++k) {
            c[k] = site % side;
            site /= side;
        }
        return c;
    }
    long site_index(const std::vector<long>& c) const {
        long s = 0;
        for (int k = d - 1; k >= 0; --k) s = s * side + c[k];
        return s;
    }
    // Physical site of a point in the (possibly reflected) hierarchy frame.
    long physical(std::vector<long> c) const {
        if (reflected)
            for (auto& x : c) x = side - 1 - x;
        return site_index(c);
    }
};

inline LongRangeRegime classify_regime(int d, double alpha) {
    require(d >= 1, errc::invalid_argument, "dimension must be positive");
    require(alpha > d && alpha <= 2.0 * d + 1.0 + 1e-12, errc::invalid_argument,
            "alpha must lie in (d, 2d+1] for the long-range protocol");
    if (std::abs(alpha - 2.0 * d) <= 1e-12) return LongRangeRegime::Critical;
    return alpha < 2.0 * d ? LongRangeRegime::Sub : LongRangeRegime::Super;
}

inline LongRangeConfig build_longrange_hierarchy(int d, double alpha, int q) {
    require(q >= 1, errc::invalid_argument, "recursion depth q must be at least 1");
    LongRangeConfig c;
    c.d = d;
    c.alpha = alpha;
    c.q = q;
    c.regime = classify_regime(d, alpha);
    c.m.assign(q + 1, 0);
    c.r.assign(q + 1, 1);
    c.V.assign(q + 1, 1.0);
    for (int j = 1; j <= q; ++j) {
        long mj = 0;
        const double rp = static_cast<double>(c.r[j - 1]);
        switch (c.regime) {
        case LongRangeRegime::Sub:
            mj = j == 1 ? 3 : guarded_ceil(std::pow(rp, 2.0 * d / alpha - 1.0));
            break;
        case LongRangeRegime::Critical:
            mj = j == 1 ? guarded_ceil(std::exp(8.0 / d))
                        : guarded_ceil(std::exp(3.0 * std::sqrt(std::log(rp)) / (2.0 * std::sqrt(double(d)))));
            break;
        case LongRangeRegime::Super:
            mj = guarded_ceil(std::pow(3.0, 1.0 / (alpha - 2.0 * d))) + 1;
            break;
        }
        c.m[j] = mj;
        c.r[j] = c.r[j - 1] * mj;
        c.V[j] = std::pow(static_cast<double>(c.r[j]), d);
    }
    c.side = c.r[q];
    c.N = c.V[q];
    return c;
}

inline LongRangeConfig reflected(LongRangeConfig c) {
    c.reflected = !c.reflected;
    return c;
}

inline double longrange_t2(const LongRangeConfig& c, int j) {
    return pi * std::pow(c.d, c.alpha / 2.0) * std::pow(static_cast<double>(c.r[j + 1]), c.alpha) / (c.V[j] * c.V[j]);
}

inline double longrange_h2_coefficient(const LongRangeConfig& c, int j) {
    return std::pow(static_cast<double>(c.r[j + 1]) * std::sqrt(double(c.d)), -c.alpha);
}

// Sites of the level-j cube with corner `corner` (hierarchy frame).
inline void for_each_in_cube(const LongRangeConfig& c, const std::vector<long>& corner, long edge,
                             const std::function<void(const std::vector<long>&)>& f) {
    std::vector<long> p = corner;
    long total = 1;
    for (int k = 0; k < c.d; ++k) total *= edge;
    for (long i = 0; i < total; ++i) {
        long rem = i;
        for (int k = 0; k < c.d; ++k) {
            p[k] = corner[k] + rem % edge;
            rem /= edge;
        }
        f(p);
    }
}

// Corners of all sub-cubes of side `sub` inside the cube of side `edge` at `corner`.
inline std::vector<std::vector<long>> sub_corners(const LongRangeConfig& c, const std::vector<long>& corner, long edge,
                                                  long sub) {
    std::vector<std::vector<long>> out;
    for_each_in_cube(c, std::vector<long>(c.d, 0), edge / sub, [&](const std::vector<long>& k) {
        std::vector<long> p(c.d);
        for (int i = 0; i < c.d; ++i) p[i] = corner[i] + k[i] * sub;
        out.push_back(p);
    });
    return out;
}

struct LongRangeStep {
    std::vector<std::pair<long, long>> pairs; // H2: physical site pairs (chi(B) x C)
    double h2_coefficient = 0.0;
    double t2 = 0.0;
    std::vector<long> hadamard_sites;          // H3 targets
};

// H2^(j), H3^(j) and t2^(j) in symbolic form (site lists, no operators).
inline LongRangeStep longrange_step_terms(const LongRangeConfig& c, int j) {
    require(j >= 0 && j < c.q, errc::invalid_argument, "level j must lie in [0, q)");
    LongRangeStep s;
    s.h2_coefficient = longrange_h2_coefficient(c, j);
    s.t2 = longrange_t2(c, j);
    const long rj = c.r[j], rj1 = c.r[j + 1];
    for (const auto& B : sub_corners(c, std::vector<long>(c.d, 0), c.side, rj1)) {
        auto subs = sub_corners(c, B, rj1, rj);
        const auto& chi = subs.front(); // lexicographically least; equals C_j on the spine
        std::vector<long> chi_sites;
        for_each_in_cube(c, chi, rj, [&](const std::vector<long>& p) { chi_sites.push_back(c.physical(p)); });
        for (size_t k = 1; k < subs.size(); ++k) {
            for_each_in_cube(c, subs[k], rj, [&](const std::vector<long>& p) {
                const long nu = c.physical(p);
                for (long mu : chi_sites) s.pairs.emplace_back(mu, nu);
            });
            if (c.targets == HadamardTargets::SigmaOnly) s.hadamard_sites.push_back(c.physical(subs[k]));
        }
    }
    if (c.targets == HadamardTargets::AllButSpine) {
        for (const auto& C : sub_corners(c, std::vector<long>(c.d, 0), c.side, rj)) {
            bool spine = std::all_of(C.begin(), C.end(), [](long x) { return x == 0; });
            if (!spine) s.hadamard_sites.push_back(c.physical(C));
        }
    }
    return s;
}

struct LongRangeNorms {
    std::vector<double> h2;         // ||H2^(j)|| from the commuting-projector formula
    std::vector<double> h3;         // ||H3^(j)|| for the configured Hadamard targets
    std::vector<double> h3_printed; // N / V_j - 1
    double h_formula = 0.0;         // N max_j [V_j^-1 max{1 - V_j/N, V_j^{2-alpha/d}(1 - m^-d)/(m^alpha d^{alpha/2})}]
    double h_step_max = 0.0;        // max_j max{||H2||, ||H3||}
    double h_over_N_min = 0.0, h_over_N_max = 0.0;
};

inline LongRangeNorms longrange_norm_h(const LongRangeConfig& c) {
    LongRangeNorms n;
    const double N = c.N, a = c.alpha, d = c.d;
    double best = 0.0;
    for (int j = 0; j < c.q; ++j) {
        const double Vj = c.V[j], m = static_cast<double>(c.m[j + 1]);
        const double md = std::pow(m, -d);
        n.h2.push_back(N * (1.0 - md) / (std::pow(Vj, a / d - 1.0) * std::pow(m, a) * std::pow(d, a / 2.0)));
        n.h3_printed.push_back(N / Vj - 1.0);
        n.h3.push_back(c.targets == HadamardTargets::SigmaOnly ? N / Vj - N / c.V[j + 1] : N / Vj - 1.0);
        const double inner = std::max(1.0 - Vj / N, std::pow(Vj, 2.0 - a / d) * (1.0 - md) / (std::pow(m, a) * std::pow(d, a / 2.0)));
        best = std::max(best, inner / Vj);
        n.h_step_max = std::max({n.h_step_max, n.h2.back(), n.h3.back()});
    }
    n.h_formula = N * best;
    n.h_over_N_min = n.h_over_N_max = n.h_formula / N;
    // h/N at j = 0 is the lower reference for the Theta(N) diagnostic.
    const double m1 = static_cast<double>(c.m[1]);
    n.h_over_N_min = std::max(1.0 - 1.0 / N, (1.0 - std::pow(m1, -d)) / (std::pow(m1, a) * std::pow(d, a / 2.0)));
    return n;
}

struct LongRangeRuntime {
    std::vector<double> T;        // recursion T_j, j = 0..q
    double K = 0.0;
    double kappa = 0.0, lambda = 0.0, gamma = 0.0;
    std::vector<double> envelope; // K * envelope(r_j)
    bool envelope_holds = true;
};

inline LongRangeRuntime longrange_runtime(const LongRangeConfig& c) {
    LongRangeRuntime rt;
    const double a = c.alpha, d = c.d;
    rt.T.assign(c.q + 1, 0.0);
    for (int j = 0; j < c.q; ++j)
        rt.T[j + 1] = 3.0 * rt.T[j] + pi * (1.0 + std::pow(d, a / 2.0) * std::pow(double(c.m[j + 1]), a) *
                                                      std::pow(double(c.r[j]), a - 2.0 * d));
    rt.lambda = 2.0 * d / a;
    rt.gamma = 3.0 * std::sqrt(d);
    std::function<double(double)> env;
    switch (c.regime) {
    case LongRangeRegime::Sub:
        rt.kappa = std::log(4.0) / std::log(rt.lambda);
        rt.K = pi * (1.0 + std::pow(d, a / 2.0) * std::pow(3.0, a)) / std::pow(std::log(3.0), rt.kappa);
        env = [k = rt.kappa](double r) { return std::pow(std::log(r), k); };
        break;
    case LongRangeRegime::Critical: {
        const double fd = std::pow(4.0 * d, d);
        rt.K = std::max(pi * (1.0 + fd * std::exp(16.0)) * std::exp(-6.0 * std::sqrt(2.0)),
                        pi * (fd + 1.0) / (std::exp(2.0) - 3.0));
        env = [g = rt.gamma](double r) { return std::exp(g * std::sqrt(std::log(r))); };
        break;
    }
    case LongRangeRegime::Super: {
        const double m = static_cast<double>(c.m[1]);
        rt.K = pi * (1.0 + std::pow(d, a / 2.0) * std::pow(m, 2.0 * d)) / (1.0 - 3.0 / std::pow(m, a - 2.0 * d));
        env = [e = a - 2.0 * d](double r) { return std::pow(r, e); };
        break;
    }
    }
    for (int j = 0; j <= c.q; ++j) {
        const double bound = j == 0 ? 0.0 : rt.K * env(static_cast<double>(c.r[j]));
        rt.envelope.push_back(bound);
        if (rt.T[j] > bound * (1 + 1e-12)) rt.envelope_holds = false;
    }
    return rt;
}

struct LongRangeOptions {
    long max_sites = 16; // operator materialization cap
};

inline SiteGraph longrange_graph(const LongRangeConfig& c) {
    SiteGraph g = SiteGraph::power_law_lattice(static_cast<int>(c.side), c.d, c.alpha);
    g.vertex_cap = 1.0;
    return g;
}

namespace detail {

inline ProtocolStep hadamard_layer(const std::vector<long>& sites, const std::string& label) {
    ProtocolStep s;
    s.duration = pi;
    s.label = label;
    for (long v : sites) s.terms.emplace_back(Support::vertex(static_cast<int>(v)), gates::hadamard_minus_projector());
    return s;
}

inline std::vector<ProtocolStep> longrange_core_steps(const LongRangeConfig& c, int upto) {
    std::vector<ProtocolStep> X;
    const int n = static_cast<int>(c.N);
    for (int j = 0; j < upto; ++j) {
        LongRangeStep st = longrange_step_terms(c, j);
        ProtocolStep h2;
        h2.duration = st.t2;
        h2.label = "H2(" + std::to_string(j) + ")";
        const Mat nn = st.h2_coefficient * pair_op(pauli::n1(), pauli::n1());
        for (auto [mu, nu] : st.pairs)
            h2.terms.emplace_back(Support::edge(complete_edge_index(n, static_cast<int>(mu), static_cast<int>(nu))), nn);
        ProtocolStep h3 = hadamard_layer(st.hadamard_sites, "H3(" + std::to_string(j) + ")");
        ProtocolSchedule tmp;
        tmp.steps = X;
        std::vector<ProtocolStep> Xt = tmp.inverse().steps;
        std::vector<ProtocolStep> next = X;
        next.push_back(h2);
        next.insert(next.end(), Xt.begin(), Xt.end());
        next.push_back(h3);
        next.insert(next.end(), X.begin(), X.end());
        X = std::move(next);
    }
    return X;
}

} // namespace detail

// X_q: maps (a|0> + b|1>) on the root and |+> elsewhere to a|0...0> + b|1...1>.
inline ProtocolSchedule longrange_core(const LongRangeConfig& c, const LongRangeOptions& opt = {}) {
    require(c.N <= static_cast<double>(opt.max_sites), errc::dimension_cap,
            "N = " + std::to_string(c.N) + " exceeds the materialization cap; use the symbolic analyses");
    ProtocolSchedule s;
    s.graph = longrange_graph(c);
    s.steps = detail::longrange_core_steps(c, c.q);
    return s;
}

inline long longrange_root(const LongRangeConfig& c) { return c.physical(std::vector<long>(c.d, 0)); }

// GHZ preparation from (a|0> + b|1>) on the root and |0> elsewhere: a Hadamard
// layer on every other site (time pi), then X_q.
inline ProtocolSchedule longrange_schedule(const LongRangeConfig& c, const LongRangeOptions& opt = {}) {
    ProtocolSchedule core = longrange_core(c, opt);
    ProtocolSchedule s;
    s.graph = core.graph;
    std::vector<long> others;
    for (long v = 0; v < static_cast<long>(c.N); ++v)
        if (v != longrange_root(c)) others.push_back(v);
    s.steps.push_back(detail::hadamard_layer(others, "prelude"));
    s.steps.insert(s.steps.end(), core.steps.begin(), core.steps.end());
    return s;
}

// State transfer from the root to the opposite corner: encode, decode with the
// reflected hierarchy, then reset the other sites to |0>.
inline ProtocolSchedule longrange_transfer_schedule(const LongRangeConfig& c, const LongRangeOptions& opt = {}) {
    ProtocolSchedule s = longrange_schedule(c, opt);
    LongRangeConfig rc = reflected(c);
    ProtocolSchedule decode = longrange_core(rc, opt).inverse();
    s.steps.insert(s.steps.end(), decode.steps.begin(), decode.steps.end());
    std::vector<long> others;
    for (long v = 0; v < static_cast<long>(c.N); ++v)
        if (v != longrange_root(rc)) others.push_back(v);
    s.steps.push_back(detail::hadamard_layer(others, "reset"));
    return s;
}

// a|0> + b|1> on `site`, |0> elsewhere.
inline Vec seed_state(int n, long site, cplx a, cplx b) {
    Vec v = Vec::Zero(Index{1} << n);
    v(0) = a;
    v(Index{1} << site) = b;
    return v;
}

inline Vec ghz_state(int n, cplx a, cplx b) {
    Vec v = Vec::Zero(Index{1} << n);
    v(0) = a;
    v((Index{1} << n) - 1) = b;
    return v;
}

inline double fidelity(const Vec& a, const Vec& b) { return std::norm(a.dot(b)); }

// ---- two-site cap compliance ---------------------------------------------

struct CapViolation {
    int u = 0, v = 0;
    double norm = 0.0, cap = 0.0;
};

// Every realized two-site term against |i - j|^-alpha (needs coordinates).
inline std::vector<CapViolation> cap_violations(const ProtocolSchedule& s, double alpha) {
    std::vector<CapViolation> out;
    require(!s.graph.coords.empty(), errc::invalid_argument, "cap check needs site coordinates");
    for (const auto& st : s.steps)
        for (const auto& [sup, m] : st.terms) {
            if (!sup.is_edge) continue;
            auto [u, v] = s.graph.edges[sup.index];
            const double cap = std::pow(s.graph.distance(u, v), -alpha), nrm = herm_norm(m);
            if (nrm > cap * (1 + 1e-12)) out.push_back({u, v, nrm, cap});
        }
    return out;
}

// ---- disordered chain ------------------------------------------------------

struct DisorderedChainConfig {
    int N = 2;
    std::vector<double> J; // J[i] couples (i, i+1)
    double alpha = 1.0;
    double z_c() const { return std::max(1.0, 1.0 / alpha); }
    double empirical_cdf(double x) const {
        double k = 0;
        for (double j : J) k += j <= x ? 1.0 : 0.0;
        return k / static_cast<double>(J.size());
    }
};

// Couplings with CDF J^alpha on (0, 1]: J = U^{1/alpha}, U uniform on (0, 1].
inline std::vector<double> sample_couplings(int N, double alpha, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> J(N - 1);
    for (auto& j : J) j = std::pow(1.0 - u(gen), 1.0 / alpha);
    return J;
}

inline double disordered_total_time(const std::vector<double>& J) {
    double t = 0.0;
    for (double j : J) t += pi / j;
    return t;
}

// SWAP along each edge in order 0 -> N-2, generator (J/4)(XX + YY + ZZ) for pi/J.
inline ProtocolSchedule disordered_chain_schedule(const DisorderedChainConfig& cfg) {
    require(cfg.N >= 2 && static_cast<int>(cfg.J.size()) == cfg.N - 1, errc::invalid_argument,
            "need N >= 2 and N - 1 couplings");
    ProtocolSchedule s;
    s.graph = SiteGraph::isolated(cfg.N);
    for (int i = 0; i + 1 < cfg.N; ++i) {
        require(cfg.J[i] > 0.0, errc::invalid_argument, "couplings must be positive");
        s.graph.add_edge(i, i + 1, cfg.J[i]);
    }
    s.graph.coords.resize(cfg.N);
    for (int i = 0; i < cfg.N; ++i) s.graph.coords[i] = {i};
    for (int i = 0; i + 1 < cfg.N; ++i) {
        ProtocolStep st;
        st.duration = pi / cfg.J[i];
        st.label = "swap(" + std::to_string(i) + ")";
        st.terms.emplace_back(Support::edge(i), cfg.J[i] * gates::swap_generator());
        s.steps.push_back(std::move(st));
    }
    return s;
}

struct ScalingStudy {
    std::vector<int> sizes;
    std::vector<double> median_below; // median T_N / N^{z_c - 0.25}
    std::vector<double> median_above; // median T_N / N^{z_c + 0.25}
    bool increasing_below = true;
    bool decreasing_above = true;
};

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline ScalingStudy disordered_scaling_study(double alpha, const std::vector<int>& sizes, int realizations,
                                             std::uint64_t seed, double dz = 0.25) {
    ScalingStudy st;
    st.sizes = sizes;
    const double zc = std::max(1.0, 1.0 / alpha);
    for (int N : sizes) {
        std::vector<double> lo, hi;
        for (int r = 0; r < realizations; ++r) {
            auto gen = named_stream(seed, "disorder/" + std::to_string(alpha) + "/" + std::to_string(N) + "/" + std::to_string(r));
            const double T = disordered_total_time(sample_couplings(N, alpha, gen));
            lo.push_back(T / std::pow(N, zc - dz));
            hi.push_back(T / std::pow(N, zc + dz));
        }
        st.median_below.push_back(median(lo));
        st.median_above.push_back(median(hi));
    }
    for (size_t i = 1; i < sizes.size(); ++i) {
        st.increasing_below = st.increasing_below && st.median_below[i] > st.median_below[i - 1];
        st.decreasing_above = st.decreasing_above && st.median_above[i] < st.median_above[i - 1];
    }
    return st;
}

// ---- strongly long-range schedule ------------------------------------------

struct StrongLongRangeParams {
    double tau1 = 0, tau2 = 0, tau3 = 0, theta = 0;
};

struct StrongLongRangeResult {
    ProtocolSchedule schedule;
    double time_scale = 1.0;  // real time per unit of the rescaled time
    double h_printed_max = 0; // max of the four printed per-piece sums
    double h_printed_asymptotic = 0; // 2 d^{-alpha/2} N^{2-alpha/d} (1 - 1/N)^2
    std::vector<double> piece_norm_sums; // sum of realized term norms per piece
    std::vector<CapViolation> violations;
};

// Seven pieces, each constant, in rescaled time t~ = N^{1-alpha/d} t / log^2 N.
// Sums over j, k != 0 run over ordered pairs; X_j Y_k + h.c. = 2 X_j Y_k for
// j != k and vanishes for j = k, Z_j Z_k with j = k is a global phase and dropped.
inline StrongLongRangeResult strong_longrange_schedule(int N, int d, double alpha, const StrongLongRangeParams& p) {
    require(alpha >= 0.0 && alpha <= d, errc::invalid_argument, "alpha must lie in [0, d]");
    require(N >= 3, errc::invalid_argument, "need N >= 3");
    const int side = static_cast<int>(std::lround(std::pow(N, 1.0 / d)));
    long chk = 1;
    for (int k = 0; k < d; ++k) chk *= side;
    require(chk == N, errc::invalid_argument, "N must be a perfect d-th power");
    require(p.tau1 > 0 && p.tau2 > 0 && p.tau3 > 0 && p.theta > 0, errc::invalid_argument,
            "tau1, tau2, tau3, theta must be supplied and positive");
    StrongLongRangeResult r;
    const double c = std::pow(std::sqrt(double(d)) * std::pow(N, 1.0 / d), -alpha);
    const double L = std::log(double(N));
    const double single = std::pow(N, 1.0 - alpha / d) / L;
    r.time_scale = L * L / std::pow(N, 1.0 - alpha / d);

    SiteGraph g = SiteGraph::power_law_lattice(side, d, alpha);
    const Mat xy = 2.0 * (pair_op(pauli::x(), pauli::y()) + pair_op(pauli::y(), pauli::x()));
    auto xy_piece = [&](double sign, double dur, const std::string& label) {
        ProtocolStep st;
        st.duration = dur * r.time_scale;
        st.label = label;
        for (int j = 1; j < N; ++j)
            for (int k = j + 1; k < N; ++k) st.terms.emplace_back(Support::edge(complete_edge_index(N, j, k)), sign * c * xy);
        return st;
    };
    std::vector<ProtocolStep> steps;
    steps.push_back(xy_piece(1.0, p.tau1, "squeeze"));
    {
        ProtocolStep st;
        st.duration = p.theta * r.time_scale;
        st.label = "rotate";
        for (int j = 1; j < N; ++j) st.terms.emplace_back(Support::edge(complete_edge_index(N, 0, j)), -c * pair_op(pauli::z(), pauli::x()));
        steps.push_back(st);
    }
    steps.push_back(xy_piece(-1.0, p.tau2, "unsqueeze"));
    {
        ProtocolStep st;
        st.duration = pi / 2.0 * r.time_scale;
        st.label = "field-x";
        for (int j = 1; j < N; ++j) st.terms.emplace_back(Support::vertex(j), single * pauli::x());
        steps.push_back(st);
    }
    {
        ProtocolStep st;
        st.duration = pi / 16.0 * r.time_scale;
        st.label = "zz";
        const Mat zz = 2.0 * c / L * pair_op(pauli::z(), pauli::z());
        for (int j = 1; j < N; ++j)
            for (int k = j + 1; k < N; ++k) st.terms.emplace_back(Support::edge(complete_edge_index(N, j, k)), zz);
        steps.push_back(st);
    }
    {
        ProtocolStep st;
        st.duration = pi / 4.0 * r.time_scale;
        st.label = "field-z";
        for (int j = 1; j < N; ++j) st.terms.emplace_back(Support::vertex(j), -single * pauli::z());
        steps.push_back(st);
    }
    steps.push_back(xy_piece(1.0, p.tau3, "final"));

    // Caps: the doubled XY coupling can exceed |i-j|^-alpha for distant pairs,
    // so the graph carries max(power law, realized norm) and the overshoots are reported.
    ProtocolSchedule sched;
    sched.graph = g;
    sched.steps = steps;
    r.violations = cap_violations(sched, alpha);
    for (const auto& st : steps)
        for (const auto& [sup, m] : st.terms)
            if (sup.is_edge) sched.graph.weight[sup.index] = std::max(sched.graph.weight[sup.index], herm_norm(m));
    sched.graph.alpha.reset();
    sched.graph.vertex_cap = static_cast<double>(N);
    r.schedule = sched;
    for (const auto& st : steps) {
        double s = 0.0;
        for (const auto& [sup, m] : st.terms) s += herm_norm(m);
        r.piece_norm_sums.push_back(s);
    }
    const double n1 = N - 1.0;
    r.h_printed_max = std::max({2.0 * c * n1 * n1, c * n1, single * n1, c * n1 * n1 / L});
    r.h_printed_asymptotic = 2.0 * std::pow(d, -alpha / 2.0) * std::pow(N, 2.0 - alpha / d) * std::pow(1.0 - 1.0 / N, 2);
    return r;
}

} // namespace staticize
