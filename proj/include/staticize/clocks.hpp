#pragma once

#include "bounds.hpp"
#include "evolve.hpp"
#include "ham_model.hpp"
#include "params.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace staticize {

// Ordering of the augmented space: global index = d + 2^N * c, with data index
// d = sum_v b_v 2^v and clock index c = sum_v k_v N_c^v. Data varies fastest,
// so C(H) is block diagonal with contiguous 2^N blocks.

inline long circ_dist(long x, long N_c) {
    long r = ((x % N_c) + N_c) % N_c;
    return std::min(r, N_c - r);
}

// Representative of x mod N_c in (-N_c/2, N_c/2].
inline double signed_circ(double x, long N_c) {
    double r = std::fmod(x, static_cast<double>(N_c));
    if (r <= -0.5 * N_c) r += N_c;
    if (r > 0.5 * N_c) r -= N_c;
    return r;
}

inline long ipow(long b, int e) {
    long r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

inline SpMat shift_operator(int N_c) {
    require(N_c >= 2, errc::invalid_argument, "N_c must be at least 2");
    std::vector<Triplet> t;
    for (int k = 0; k < N_c; ++k) t.emplace_back((k + 1) % N_c, k, 1.0);
    SpMat u(N_c, N_c);
    u.setFromTriplets(t.begin(), t.end());
    return u;
}

// i (U - U^dag) / (2 delta): +i/(2 delta) at (k+1, k), -i/(2 delta) at (k-1, k).
inline SpMat momentum_operator(int N_c, double delta) {
    require(N_c >= 2, errc::invalid_argument, "N_c must be at least 2");
    require(delta > 0.0, errc::invalid_argument, "delta must be positive");
    SpMat u = shift_operator(N_c);
    SpMat ud = SpMat(u.adjoint());
    SpMat m = (I1 / (2.0 * delta)) * (u - ud);
    m.prune(cplx(0.0));
    return m;
}

// Sum of per-clock momentum operators on data (x) clocks, identity on data.
inline SpMat clock_momentum_sum(int n_clocks, int N_c, double delta, Index data_dim = 1) {
    const long cdim = ipow(N_c, n_clocks);
    const cplx up = I1 / (2.0 * delta);
    std::vector<Triplet> t;
    if (N_c > 2) t.reserve(static_cast<size_t>(2 * n_clocks * cdim * data_dim));
    for (long c = 0; c < cdim; ++c) {
        long stride = 1;
        for (int v = 0; v < n_clocks; ++v, stride *= N_c) {
            if (N_c == 2) break; // U = U^dag: the momentum operator vanishes
            const long k = (c / stride) % N_c;
            const long cu = c + (((k + 1) % N_c) - k) * stride;
            const long cd = c + (((k + N_c - 1) % N_c) - k) * stride;
            for (Index d = 0; d < data_dim; ++d) {
                t.emplace_back(cu * data_dim + d, c * data_dim + d, up);
                t.emplace_back(cd * data_dim + d, c * data_dim + d, -up);
            }
        }
    }
    SpMat m(cdim * data_dim, cdim * data_dim);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

struct GaussianClockState {
    int center = 0;
    RVec amplitudes;
    double norm_const = 1.0; // sum_l exp(-2 delta^2 |l|_c^2 / sigma^2)
};

// Largest single-register clock that is ever stored as a vector.
inline constexpr long max_materialized_slots = 1L << 26;

inline void require_materializable(const ClockParams& p) {
    require(p.N_c <= max_materialized_slots, errc::dimension_cap,
            "N_c = " + std::to_string(p.N_c) + " is too large to materialize a clock register");
}

inline double gaussian_normalization(const ClockParams& p) {
    require_materializable(p);
    double s = 0.0;
    for (int l = 0; l < p.N_c; ++l) {
        double d = circ_dist(l, p.N_c) * p.delta / p.sigma;
        s += std::exp(-2.0 * d * d);
    }
    return s;
}

inline GaussianClockState gaussian_state(int j, const ClockParams& p) {
    require_materializable(p);
    require(j >= 0 && j < p.N_c, errc::invalid_argument, "center must lie in [0, N_c)");
    GaussianClockState g;
    g.center = j;
    g.norm_const = gaussian_normalization(p);
    g.amplitudes.resize(p.N_c);
    const double inv = 1.0 / std::sqrt(g.norm_const);
    for (int l = 0; l < p.N_c; ++l) {
        double d = circ_dist(l - j, p.N_c) * p.delta / p.sigma;
        g.amplitudes(l) = inv * std::exp(-d * d);
    }
    return g;
}

inline int wrap_slot(long j, long N_c) { return static_cast<int>(((j % N_c) + N_c) % N_c); }

// Tensor product of per-site Gaussian clocks; site 0 is the fastest index.
struct ProductClockState {
    std::vector<int> centers;
    long N_c = 2;
    Vec state;
};

inline Vec kron_vec(const Vec& slow, const Vec& fast) {
    Vec out(slow.size() * fast.size());
    for (Index i = 0; i < slow.size(); ++i) out.segment(i * fast.size(), fast.size()) = slow(i) * fast;
    return out;
}

inline ProductClockState product_clock_state(const std::vector<int>& centers, const ClockParams& p) {
    ProductClockState s;
    s.N_c = p.N_c;
    Vec v = Vec::Ones(1);
    for (int c : centers) {
        s.centers.push_back(wrap_slot(c, p.N_c));
        Vec g = gaussian_state(wrap_slot(c, p.N_c), p).amplitudes.cast<cplx>();
        v = kron_vec(g, v);
    }
    s.state = v;
    return s;
}

// Joint state data (x) clocks in the library ordering.
inline Vec joint_state(const Vec& data, const Vec& clocks) { return kron_vec(clocks, data); }

inline Vec tensor_power(const Vec& v, int n) {
    Vec out = Vec::Ones(1);
    for (int i = 0; i < n; ++i) out = kron_vec(v, out);
    return out;
}

struct AssemblyOptions {
    Index max_amplitudes = Index{1} << 24;
};

inline Index augmented_dim(int n_sites, long N_c, const AssemblyOptions& opt) {
    const double total = std::pow(2.0, n_sites) * std::pow(static_cast<double>(N_c), n_sites);
    require(total <= static_cast<double>(opt.max_amplitudes), errc::dimension_cap,
            "augmented dimension " + std::to_string(total) + " exceeds the cap " + std::to_string(opt.max_amplitudes));
    return static_cast<Index>(total);
}

namespace detail {

// H_x(k delta) for every term x and slot k.
inline std::vector<std::vector<Mat>> sample_terms(const TimeDepHamiltonian& H, const ClockParams& p) {
    std::vector<std::vector<Mat>> s(H.terms().size());
    for (size_t i = 0; i < H.terms().size(); ++i) {
        s[i].reserve(p.N_c);
        for (int k = 0; k < p.N_c; ++k) s[i].push_back(H.eval_term(H.terms()[i].support, k * p.delta));
    }
    return s;
}

} // namespace detail

// C(H) = sum_k sum_x H_x(k_rho(x) delta) (x) |k><k|, one 2^N block per clock configuration.
inline SpMat assemble_controlled(const TimeDepHamiltonian& H, const ClockParams& p, const AssemblyOptions& opt = {}) {
    require(std::abs(H.period() - p.T) <= 1e-12 * p.T, errc::invalid_argument, "clock period differs from H's period");
    const int n = H.n_sites();
    const Index dim = augmented_dim(n, p.N_c, opt);
    const Index D = Index{1} << n;
    const long cdim = ipow(p.N_c, n);
    auto samples = detail::sample_terms(H, p);
    std::vector<Triplet> t;
    for (long c = 0; c < cdim; ++c) {
        for (size_t i = 0; i < H.terms().size(); ++i) {
            const auto& sup = H.terms()[i].support;
            const int rho = H.control_site(sup);
            const long k = (c / ipow(p.N_c, rho)) % p.N_c;
            add_local_action(t, samples[i][k], H.sites(sup), n, c * D, c * D);
        }
    }
    SpMat m(dim, dim);
    m.setFromTriplets(t.begin(), t.end());
    m.prune(cplx(0.0));
    return m;
}

struct StaticizedHamiltonian {
    SpMat delta_part;
    SpMat controlled_part;
    SpMat total;
    int n_sites = 0;
    Index data_dim = 1;
    Index clock_dim = 1;
    ClockParams params;
    std::vector<int> control_map;
};

inline StaticizedHamiltonian assemble_staticized(const TimeDepHamiltonian& H, const ClockParams& p,
                                                 const AssemblyOptions& opt = {}) {
    StaticizedHamiltonian s;
    s.n_sites = H.n_sites();
    s.data_dim = Index{1} << s.n_sites;
    s.clock_dim = ipow(p.N_c, s.n_sites);
    s.params = p;
    s.control_map = H.graph().control;
    s.controlled_part = assemble_controlled(H, p, opt);
    s.delta_part = clock_momentum_sum(s.n_sites, p.N_c, p.delta, s.data_dim);
    s.total = s.delta_part + s.controlled_part;
    return s;
}

// Closed form of [Delta, C(H)] = -i (W + W^dag) / 2 with
// W = sum_k sum_x G_x(k_rho) (x) |k + e_rho><k|, G_x(k) = (H_x((k+1) delta) - H_x(k delta)) / delta.
inline SpMat commutator_closed_form(const TimeDepHamiltonian& H, const ClockParams& p, const AssemblyOptions& opt = {}) {
    const int n = H.n_sites();
    const Index dim = augmented_dim(n, p.N_c, opt);
    const Index D = Index{1} << n;
    const long cdim = ipow(p.N_c, n);
    auto samples = detail::sample_terms(H, p);
    std::vector<std::vector<Mat>> G(samples.size());
    for (size_t i = 0; i < samples.size(); ++i)
        for (int k = 0; k < p.N_c; ++k) G[i].push_back((samples[i][(k + 1) % p.N_c] - samples[i][k]) / p.delta);
    std::vector<Triplet> t;
    for (long c = 0; c < cdim; ++c) {
        for (size_t i = 0; i < samples.size(); ++i) {
            const auto& sup = H.terms()[i].support;
            const int rho = H.control_site(sup);
            const long stride = ipow(p.N_c, rho);
            const long k = (c / stride) % p.N_c;
            const long cn = c + (((k + 1) % p.N_c) - k) * stride;
            add_local_action(t, G[i][k], H.sites(sup), n, cn * D, c * D);
        }
    }
    SpMat W(dim, dim);
    W.setFromTriplets(t.begin(), t.end());
    SpMat Wd = SpMat(W.adjoint());
    SpMat out = (-0.5 * I1) * (W + Wd);
    out.prune(cplx(0.0));
    return out;
}

inline SpMat commutator_direct(const StaticizedHamiltonian& s) {
    SpMat a = s.delta_part * s.controlled_part;
    SpMat b = s.controlled_part * s.delta_part;
    SpMat out = a - b;
    out.prune(cplx(0.0));
    return out;
}

struct TranslationResult {
    Vec evolved;
    double error = 0.0; // || e^{-i m delta Delta} Phi_r - Phi_{r + m} ||
    double bound = 0.0;
};

inline TranslationResult translate_clocks(const ProductClockState& s, int m, const ClockParams& p,
                                          const KrylovOptions& k = {}) {
    const int n = static_cast<int>(s.centers.size());
    TranslationResult r;
    SpMat Dl = clock_momentum_sum(n, p.N_c, p.delta);
    require(Dl.rows() == s.state.size(), errc::dim_mismatch, "clock state dimension");
    r.evolved = m == 0 ? s.state : evolve_static(Dl, s.state, m * p.delta, k).state;
    std::vector<int> shifted;
    for (int c : s.centers) shifted.push_back(c + m);
    Vec ideal = product_clock_state(shifted, p).state;
    r.error = (r.evolved - ideal).norm();
    LemmaInputs in;
    in.p = p;
    in.N = n;
    in.m = std::abs(m);
    r.bound = lemma_rhs("S11", in);
    return r;
}

// || Pi |phi_r> || where Pi keeps slots with |l - r|_c > window.
inline double clock_tail_mass(const ClockParams& p, int window, int r) {
    require(window >= 1 && window < p.N_c / 2 + (p.N_c % 2), errc::invalid_argument, "window must lie in [1, N_c/2)");
    auto g = gaussian_state(wrap_slot(r, p.N_c), p);
    double s = 0.0;
    for (int l = 0; l < p.N_c; ++l)
        if (circ_dist(l - r, p.N_c) > window) s += g.amplitudes(l) * g.amplitudes(l);
    return std::sqrt(s);
}

// Periodic central differences of the sampled Gaussian: order 1 uses
// (g(l+1) - g(l-1)) / (2 delta), order 2 (g(l+2) - 2 g(l) + g(l-2)) / (4 delta^2).
inline RVec finite_difference_state(const ClockParams& p, int j, int order) {
    require(order == 1 || order == 2, errc::invalid_argument, "order must be 1 or 2");
    const RVec g = gaussian_state(wrap_slot(j, p.N_c), p).amplitudes;
    const int N = p.N_c;
    RVec out(N);
    for (int l = 0; l < N; ++l) {
        if (order == 1)
            out(l) = (g(wrap_slot(l + 1, N)) - g(wrap_slot(l - 1, N))) / (2 * p.delta);
        else
            out(l) = (g(wrap_slot(l + 2, N)) - 2 * g(l) + g(wrap_slot(l - 2, N))) / (4 * p.delta * p.delta);
    }
    return out;
}

// Analytic time derivative of the periodic Gaussian, sampled at l delta, with
// the slots j + N_c/2 - (order-1) ... j + N_c/2 + (order-1) set to zero.
inline RVec derivative_state(const ClockParams& p, int j, int order) {
    require(order == 1 || order == 2, errc::invalid_argument, "order must be 1 or 2");
    const int N = p.N_c;
    const double inv = 1.0 / std::sqrt(gaussian_normalization(p));
    const double s2 = p.sigma * p.sigma;
    RVec out(N);
    for (int l = 0; l < N; ++l) {
        const double u = signed_circ(static_cast<double>(l - j), N) * p.delta;
        const double phi = inv * std::exp(-u * u / s2);
        out(l) = order == 1 ? -2.0 * u / s2 * phi : (4.0 * u * u / (s2 * s2) - 2.0 / s2) * phi;
    }
    for (int k = -(order - 1); k <= order - 1; ++k) out(wrap_slot(j + N / 2 + k, N)) = 0.0;
    return out;
}

} // namespace staticize
