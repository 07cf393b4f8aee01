#pragma once

#include "bounds.hpp"
#include "clocks.hpp"
#include "evolve.hpp"
#include "fourier.hpp"
#include "rng.hpp"

#include <random>
#include <string>
#include <vector>

namespace staticize {

struct LemmaRow {
    std::string lemma;
    std::string label; // free-form case description
    int N_c = 0;
    double sigma_over_delta = 0.0;
    double measured = 0.0;
    double rhs = 0.0;
    bool in_window = true;
    bool holds() const { return measured <= rhs; }
};

struct LemmaGrid {
    std::vector<int> N_c{16, 32, 64, 128};
    std::vector<double> sigma_over_delta{2, 4, 8, 16};
    double T = 1.0;
    bool window_only = true;
};

inline FourierTerm random_fourier_term(int dim, int harmonics, double T, std::mt19937_64& gen) {
    FourierTerm f;
    f.T = T;
    for (int k = 0; k <= harmonics; ++k) {
        f.a.push_back(random_hermitian(dim, gen, 1.0 / (k + 1)));
        f.b.push_back(k ? random_hermitian(dim, gen, 1.0 / (k + 1)) : Mat::Zero(dim, dim));
    }
    return f;
}

// Random differentiable-periodic Hamiltonian on a chain of n sites (vertex
// terms everywhere, edge terms on the chain, control = first endpoint).
inline TimeDepHamiltonian random_periodic_hamiltonian(int n, double T, std::mt19937_64& gen, int harmonics = 2) {
    std::vector<FourierTerm> vt, et;
    for (int v = 0; v < n; ++v) vt.push_back(random_fourier_term(2, harmonics, T, gen));
    for (int e = 0; e + 1 < n; ++e) et.push_back(random_fourier_term(4, harmonics, T, gen));
    SiteGraph g = SiteGraph::isolated(n);
    for (int e = 0; e + 1 < n; ++e) g.add_edge(e, e + 1, et[e].norm_cap() * (1 + 1e-9));
    double vcap = 0.0;
    for (auto& f : vt) vcap = std::max(vcap, f.norm_cap());
    g.vertex_cap = vcap * (1 + 1e-9);
    std::vector<TermSchedule> terms;
    for (int v = 0; v < n; ++v)
        terms.push_back(fourier_schedule(Support::vertex(v), vt[v]));
    for (int e = 0; e + 1 < n; ++e)
        terms.push_back(fourier_schedule(Support::edge(e), et[e]));
    return TimeDepHamiltonian(g, std::move(terms), T, Smoothness::DifferentiablePeriodic);
}

namespace detail {

inline std::vector<ClockParams> grid_params(const LemmaGrid& g) {
    std::vector<ClockParams> out;
    for (int nc : g.N_c)
        for (double r : g.sigma_over_delta) {
            ClockParams p = ClockParams::clock_only(nc, g.T, r * g.T / nc);
            if (g.window_only && !p.in_window()) continue;
            out.push_back(p);
        }
    return out;
}

inline LemmaRow row(const std::string& id, const std::string& label, const ClockParams& p, double measured, double rhs) {
    LemmaRow r;
    r.lemma = id;
    r.label = label;
    r.N_c = p.N_c;
    r.sigma_over_delta = p.sigma / p.delta;
    r.measured = measured;
    r.rhs = rhs;
    r.in_window = p.in_window();
    return r;
}

// max |cos| or |sin| over [a, b]
inline double max_abs_trig(bool is_cos, double a, double b) {
    const double shift = is_cos ? 0.0 : pi / 2.0; // |sin t| = |cos(t - pi/2)|
    const double lo = a - shift, hi = b - shift;
    if (std::floor(hi / pi) >= std::ceil(lo / pi)) return 1.0;
    return std::max(std::abs(std::cos(lo)), std::abs(std::cos(hi)));
}

} // namespace detail

// Tensor-power inequality on random pairs whose overlap is real.
inline std::vector<LemmaRow> check_s1(std::uint64_t seed, int pairs = 50) {
    auto gen = named_stream(seed, "lemma/S1");
    std::normal_distribution<double> nd;
    std::vector<LemmaRow> rows;
    for (int i = 0; i < pairs; ++i) {
        const int dim = 2 + i % 3;
        Vec a(dim), b(dim);
        for (int k = 0; k < dim; ++k) {
            a(k) = cplx(nd(gen), nd(gen));
            b(k) = a(k) + 0.3 * cplx(nd(gen), nd(gen));
        }
        a.normalize();
        b.normalize();
        const cplx ov = a.dot(b);
        if (std::abs(ov) > 0) b *= std::conj(ov) / std::abs(ov);
        for (int N : {2, 3, 4}) {
            LemmaRow r;
            r.lemma = "S1";
            r.label = "pair " + std::to_string(i) + ", N=" + std::to_string(N);
            r.measured = (tensor_power(a, N) - tensor_power(b, N)).norm();
            LemmaInputs in;
            in.N = N;
            in.distance = (a - b).norm();
            r.rhs = lemma_rhs("S1", in) + 1e-12;
            rows.push_back(r);
        }
    }
    return rows;
}

inline std::vector<LemmaRow> check_s2(const LemmaGrid& g = {}) {
    std::vector<LemmaRow> rows;
    LemmaInputs in;
    for (const auto& p : detail::grid_params(g)) {
        in.p = p;
        rows.push_back(detail::row("S2", "normalization", p, 1.0 / std::sqrt(gaussian_normalization(p)), lemma_rhs("S2", in)));
    }
    return rows;
}

inline std::vector<LemmaRow> check_s3(const LemmaGrid& g = {}) {
    std::vector<LemmaRow> rows;
    LemmaInputs in;
    for (const auto& p : detail::grid_params(g)) {
        in.p = p;
        for (int w = 1; w < p.N_c / 2; w = w < 4 ? w + 1 : 2 * w) {
            in.window = w;
            rows.push_back(detail::row("S3", "window " + std::to_string(w), p, clock_tail_mass(p, w, 0), lemma_rhs("S3", in)));
        }
    }
    return rows;
}

inline std::vector<LemmaRow> check_s5(const LemmaGrid& g = {}) {
    std::vector<LemmaRow> rows;
    LemmaInputs in;
    for (const auto& p : detail::grid_params(g)) {
        in.p = p;
        for (int order : {1, 2}) {
            in.order = order;
            for (int j : {0, int(p.N_c / 3)}) {
                const double d = (finite_difference_state(p, j, order) - derivative_state(p, j, order)).norm();
                rows.push_back(detail::row("S5", "order " + std::to_string(order) + ", j=" + std::to_string(j), p, d,
                                           lemma_rhs("S5", in)));
            }
        }
    }
    return rows;
}

inline std::vector<LemmaRow> check_s6(const LemmaGrid& g = {}) {
    std::vector<LemmaRow> rows;
    LemmaInputs in;
    for (const auto& p : detail::grid_params(g)) {
        in.p = p;
        rows.push_back(detail::row("S6", "second derivative state", p, derivative_state(p, 0, 2).norm(), lemma_rhs("S6", in)));
    }
    return rows;
}

inline std::vector<LemmaRow> check_s7(const LemmaGrid& g = {}) {
    std::vector<LemmaRow> rows;
    LemmaInputs in;
    for (const auto& p : detail::grid_params(g)) {
        in.p = p;
        for (int j : {0, int(p.N_c / 2 - 1)}) {
            const RVec v = gaussian_state(j, p).amplitudes - p.delta * derivative_state(p, j, 1) -
                           gaussian_state(wrap_slot(j + 1, p.N_c), p).amplitudes;
            rows.push_back(detail::row("S7", "j=" + std::to_string(j), p, v.norm(), lemma_rhs("S7", in)));
        }
    }
    return rows;
}

inline std::vector<LemmaRow> check_s11(const LemmaGrid& g = {}, int max_sites = 2) {
    std::vector<LemmaRow> rows;
    LemmaInputs in;
    for (const auto& p : detail::grid_params(g)) {
        in.p = p;
        for (int n = 1; n <= max_sites; ++n) {
            if (std::pow(double(p.N_c), n) > 1 << 16) continue;
            for (int m : {1, 3}) {
                auto st = product_clock_state(std::vector<int>(n, 0), p);
                auto tr = translate_clocks(st, m, p);
                rows.push_back(detail::row("S11", "N=" + std::to_string(n) + ", m=" + std::to_string(m), p, tr.error, tr.bound));
            }
        }
    }
    return rows;
}

// Finite differences of sin and cos at random points with steps 1e-1 .. 1e-2.
inline std::vector<LemmaRow> check_s4(std::uint64_t seed, int points = 100) {
    auto gen = named_stream(seed, "lemma/S4");
    std::uniform_real_distribution<double> ut(-pi, pi), uh(0.01, 0.1);
    std::vector<LemmaRow> rows;
    for (int i = 0; i < points; ++i) {
        const double t = ut(gen), h = uh(gen);
        for (bool is_sin : {true, false}) {
            auto f = [&](double x) { return is_sin ? std::sin(x) : std::cos(x); };
            const double d1 = is_sin ? std::cos(t) : -std::sin(t);
            const double d2 = -f(t);
            LemmaInputs in;
            in.step = h;
            in.order = 1;
            in.max_deriv = detail::max_abs_trig(is_sin, t - h, t + h); // f''' = -cos or sin
            LemmaRow r1;
            r1.lemma = "S4";
            r1.label = std::string(is_sin ? "sin" : "cos") + " order 1";
            r1.measured = std::abs((f(t + h) - f(t - h)) / (2 * h) - d1);
            r1.rhs = lemma_rhs("S4", in);
            in.order = 2;
            in.max_deriv = detail::max_abs_trig(!is_sin, t - 2 * h, t + 2 * h); // f'''' = f
            LemmaRow r2 = r1;
            r2.label = std::string(is_sin ? "sin" : "cos") + " order 2";
            r2.measured = std::abs((f(t + 2 * h) - 2 * f(t) + f(t - 2 * h)) / (4 * h * h) - d2);
            r2.rhs = lemma_rhs("S4", in);
            rows.push_back(r1);
            rows.push_back(r2);
        }
    }
    return rows;
}

inline std::vector<LemmaRow> check_s8(std::uint64_t seed, int pairs = 50) {
    auto gen = named_stream(seed, "lemma/S8");
    std::vector<LemmaRow> rows;
    for (int i = 0; i < pairs; ++i) {
        const int dim = 2 << (i % 4); // 2 .. 16
        const Mat A = random_hermitian(dim, gen), B = random_hermitian(dim, gen);
        const double comm = spectral_norm(A * B - B * A);
        for (double t : {0.1, 0.5, 1.0}) {
            LemmaInputs in;
            in.t = t;
            in.comm_norm = comm;
            LemmaRow r;
            r.lemma = "S8";
            r.label = "pair " + std::to_string(i) + ", dim " + std::to_string(dim) + ", t=" + fmt_num(t);
            r.measured = spectral_norm(expm_herm(A + B, t) - expm_herm(A, t) * expm_herm(B, t));
            r.rhs = lemma_rhs("S8", in);
            rows.push_back(r);
        }
    }
    return rows;
}

// Smooth single-qubit H(t) against its left-endpoint piecewise-constant product.
inline std::vector<LemmaRow> check_s9(std::uint64_t seed, const std::vector<int>& steps = {4, 16, 64}) {
    auto gen = named_stream(seed, "lemma/S9");
    const double T = 1.0;
    TimeDepHamiltonian H = random_periodic_hamiltonian(1, T, gen, 2);
    const HamiltonianNorms nr = compute_norms(H);
    TimeOrderedOptions o;
    o.tol = 1e-12;
    const Mat U = propagator_timeordered(H, T, o);
    std::vector<LemmaRow> rows;
    for (int n : steps) {
        Mat V = Mat::Identity(2, 2);
        for (int k = 0; k < n; ++k) V = expm_herm(H.dense_operator(k * T / n), T / n) * V;
        LemmaInputs in;
        in.T = T;
        in.n_steps = n;
        in.max_hdot = nr.h1;
        LemmaRow r;
        r.lemma = "S9";
        r.label = "steps " + std::to_string(n);
        r.measured = spectral_norm(U - V);
        r.rhs = lemma_rhs("S9", in);
        rows.push_back(r);
    }
    return rows;
}

struct CommutatorCheck {
    int n_sites = 1;
    int N_c = 4;
    double max_abs_diff = 0.0;
    double norm = 0.0;
    double h1 = 0.0;
};

inline CommutatorCheck check_commutator(const TimeDepHamiltonian& H, int N_c) {
    CommutatorCheck c;
    c.n_sites = H.n_sites();
    c.N_c = N_c;
    const ClockParams p = ClockParams::clock_only(N_c, H.period(), H.period() / 4.0);
    const StaticizedHamiltonian s = assemble_staticized(H, p);
    const SpMat closed = commutator_closed_form(H, p);
    const SpMat direct = commutator_direct(s);
    c.max_abs_diff = max_abs(SpMat(closed - direct));
    // i[Delta, C] is Hermitian
    c.norm = sparse_herm_norm(SpMat(cplx(0.0, 1.0) * direct));
    c.h1 = compute_norms(H).h1;
    return c;
}

inline std::vector<LemmaRow> check_s10(std::uint64_t seed, int instances = 10) {
    auto gen = named_stream(seed, "lemma/S10");
    std::vector<LemmaRow> rows;
    for (int i = 0; i < instances; ++i) {
        const int n = 1 + i % 3;
        const int nc = (i / 3) % 2 ? 8 : 4;
        TimeDepHamiltonian H = random_periodic_hamiltonian(n, 1.0, gen);
        CommutatorCheck c = check_commutator(H, nc);
        LemmaInputs in;
        in.h1 = c.h1;
        LemmaRow r;
        r.lemma = "S10";
        r.label = "N=" + std::to_string(n) + ", N_c=" + std::to_string(nc) + ", closed-form diff " + fmt_num(c.max_abs_diff);
        r.N_c = nc;
        r.measured = c.norm;
        r.rhs = lemma_rhs("S10", in) + 1e-9;
        rows.push_back(r);
    }
    return rows;
}

// Controlled evolution for eta = tau from |psi>|Phi_{j1}> versus the frozen-time evolution.
inline std::vector<LemmaRow> check_s12(std::uint64_t seed, const LemmaGrid& g = {}) {
    auto gen = named_stream(seed, "lemma/S12");
    const double T = g.T;
    TimeDepHamiltonian H = random_periodic_hamiltonian(1, T, gen, 1);
    const HamiltonianNorms nr = compute_norms(H);
    std::normal_distribution<double> nd;
    Vec psi(2);
    psi << cplx(nd(gen), nd(gen)), cplx(nd(gen), nd(gen));
    psi.normalize();
    std::vector<LemmaRow> rows;
    for (int nc : g.N_c)
        for (double r : g.sigma_over_delta) {
            // N_p = 4 coarse steps so that tau is well above sigma
            if (nc % 8) continue;
            ClockParams p = ClockParams::with_ratio(4, nc / 4, T, r);
            if (g.window_only && !p.in_window()) continue;
            const SpMat C = assemble_controlled(H, p);
            for (int j : {0, nc / 4}) {
                const Vec phi = product_clock_state({j}, p).state;
                const double eta = p.tau;
                const Vec lhs = evolve_static(C, joint_state(psi, phi), eta).state;
                const Vec rhs = joint_state(expm_herm(H.dense_operator(j * p.delta), eta) * psi, phi);
                LemmaInputs in;
                in.p = p;
                in.N = 1;
                in.eta = eta;
                in.h = nr.h;
                in.h1 = nr.h1;
                rows.push_back(detail::row("S12", "j=" + std::to_string(j), p, (lhs - rhs).norm(), lemma_rhs("S12", in)));
            }
        }
    return rows;
}

inline const std::vector<std::string>& lemma_ids() {
    static const std::vector<std::string> ids{"S1", "S2", "S3", "S4", "S5", "S6", "S7", "S8", "S9", "S10", "S11", "S12"};
    return ids;
}

inline std::vector<LemmaRow> run_lemma_check(const std::string& id, std::uint64_t seed, const LemmaGrid& g = {}) {
    if (id == "S1") return check_s1(seed);
    if (id == "S2") return check_s2(g);
    if (id == "S3") return check_s3(g);
    if (id == "S4") return check_s4(seed);
    if (id == "S5") return check_s5(g);
    if (id == "S6") return check_s6(g);
    if (id == "S7") return check_s7(g);
    if (id == "S8") return check_s8(seed);
    if (id == "S9") return check_s9(seed);
    if (id == "S10") return check_s10(seed);
    if (id == "S11") return check_s11(g);
    if (id == "S12") return check_s12(seed, g);
    fail(errc::unknown_lemma, "no check registered for lemma '" + id + "'");
}

} // namespace staticize
