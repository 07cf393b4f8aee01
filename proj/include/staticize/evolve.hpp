#pragma once

#include "ham_model.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

namespace staticize {

enum class ExpMethod { Auto, Krylov, Dense };

struct KrylovOptions {
    double tol = 1e-10;
    int krylov_dim = 30;
    Index dense_max = 512;
    ExpMethod method = ExpMethod::Auto;
};

struct StaticReport {
    Vec state;
    double error_estimate = 0.0;
    int steps = 0;
    int matvecs = 0;
    bool dense = false;
    double wall_seconds = 0.0;
};

namespace detail {

// phi1(z) = (e^z - 1) / z
inline cplx phi1(cplx z) {
    if (std::abs(z) < 1e-5) return 1.0 + z / 2.0 + z * z / 6.0;
    return (std::exp(z) - 1.0) / z;
}

inline StaticReport evolve_dense(const SpMat& H, const Vec& psi, double t) {
    StaticReport r;
    Eigen::SelfAdjointEigenSolver<Mat> es{Mat(H)};
    Vec c = es.eigenvectors().adjoint() * psi;
    for (Index i = 0; i < c.size(); ++i) c(i) *= std::exp(-I1 * t * es.eigenvalues()(i));
    r.state = es.eigenvectors() * c;
    r.dense = true;
    r.steps = 1;
    return r;
}

// Lanczos with full reorthogonalization and adaptive sub-stepping. The local
// error of a step of length s is estimated by beta * s * beta_m * |e_m^T phi1(-i s T_m) e_1|
// and kept below tol * s / t, so the estimates add up to at most tol.
inline StaticReport evolve_krylov(const SpMat& H, const Vec& psi, double t, const KrylovOptions& opt) {
    StaticReport r;
    const Index n = psi.size();
    const int mmax = static_cast<int>(std::min<Index>(opt.krylov_dim, n));
    Vec v = psi;
    double remaining = std::abs(t);
    const double sign = t < 0 ? -1.0 : 1.0;
    double s_prev = remaining;
    std::vector<Vec> V;
    while (remaining > 0.0) {
        const double beta = v.norm();
        if (beta == 0.0) break;
        V.assign(1, v / beta);
        std::vector<double> al, be;
        bool breakdown = false;
        double beta_m = 0.0;
        for (int j = 0; j < mmax; ++j) {
            Vec w = H * V[j];
            ++r.matvecs;
            al.push_back(V[j].dot(w).real());
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& b : V) w -= b.dot(w) * b;
            const double bn = w.norm();
            double scale = std::abs(al.back()) + (be.empty() ? 0.0 : be.back()) + 1e-300;
            if (bn <= 1e-13 * scale || bn == 0.0) {
                breakdown = true;
                break;
            }
            if (j + 1 == mmax) {
                beta_m = bn;
                break;
            }
            be.push_back(bn);
            V.push_back(w / bn);
        }
        const Index m = static_cast<Index>(al.size());
        Eigen::MatrixXd Tm = Eigen::MatrixXd::Zero(m, m);
        for (Index i = 0; i < m; ++i) Tm(i, i) = al[i];
        for (Index i = 0; i + 1 < m; ++i) Tm(i, i + 1) = Tm(i + 1, i) = be[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Tm);
        const Eigen::MatrixXd& Q = es.eigenvectors();
        const Eigen::VectorXd& lam = es.eigenvalues();
        auto coeffs = [&](double s) {
            Vec y(m);
            Vec e = Q.row(0).transpose().cast<cplx>();
            for (Index i = 0; i < m; ++i) e(i) *= std::exp(-I1 * (sign * s) * lam(i));
            y = Q.cast<cplx>() * e;
            return y;
        };
        auto err_est = [&](double s) {
            if (breakdown) return 0.0;
            cplx acc = 0.0;
            for (Index i = 0; i < m; ++i) acc += Q(m - 1, i) * detail::phi1(-I1 * (sign * s) * lam(i)) * Q(0, i);
            return beta * s * beta_m * std::abs(acc);
        };
        double s = breakdown ? remaining : std::min(remaining, 2.0 * s_prev);
        double e = err_est(s);
        int shrink = 0;
        while (e > opt.tol * s / std::abs(t)) {
            double fac = 0.9 * std::pow(opt.tol * s / std::abs(t) / e, 1.0 / m);
            s *= std::clamp(fac, 0.1, 0.5);
            e = err_est(s);
            require(++shrink < 200 && s > 1e-300, errc::step_underflow, "Krylov step size underflow");
        }
        Vec y = coeffs(s);
        Vec next = Vec::Zero(n);
        for (Index i = 0; i < m; ++i) next += (beta * y(i)) * V[i];
        v = next;
        r.error_estimate += e;
        remaining -= s;
        if (remaining < 1e-15 * std::abs(t)) remaining = 0.0;
        s_prev = s;
        ++r.steps;
    }
    r.state = v;
    return r;
}

} // namespace detail

// exp(-i H t) psi.
inline StaticReport evolve_static(const SpMat& H, const Vec& psi, double t, const KrylovOptions& opt = {}) {
    require(H.rows() == H.cols() && H.rows() == psi.size(), errc::dim_mismatch, "operator and state sizes differ");
    require(opt.tol > 0.0 && opt.tol <= 1e-4, errc::invalid_argument, "tolerance must lie in (0, 1e-4]");
    auto t0 = std::chrono::steady_clock::now();
    StaticReport r;
    if (t == 0.0 || H.nonZeros() == 0) {
        r.state = psi;
    } else {
        bool dense = opt.method == ExpMethod::Dense || (opt.method == ExpMethod::Auto && psi.size() <= opt.dense_max);
        r = dense ? detail::evolve_dense(H, psi, t) : detail::evolve_krylov(H, psi, t, opt);
    }
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

// ---- time-dependent reference integrator -----------------------------------

struct TimeOrderedOptions {
    double tol = 1e-10;
    double h_init = 0.0;  // 0: chosen from the interval length
    double h_min = 1e-13; // relative to the period
    long max_steps = 10'000'000;
    KrylovOptions krylov{};
    bool keep_trace = false;
};

struct TimeOrderedReport {
    Vec state;
    double certificate = 0.0; // sum of |y_h - y_{h/2}| over accepted steps
    long steps = 0;
    long rejected = 0;
    std::vector<std::pair<double, double>> trace; // (time, accumulated certificate)
    double wall_seconds = 0.0;
};

namespace detail {

// exp(-i s M) y for a small data-space operator.
inline Vec apply_exp(const SpMat& M, const Vec& y, double s, const KrylovOptions& k) {
    if (y.size() <= 256) return expm_herm(Mat(M), s) * y;
    KrylovOptions kk = k;
    kk.tol = std::min(k.tol, 1e-13);
    return evolve_static(M, y, s, kk).state;
}

// One fourth-order commutator-free step on [t, t + h] using Gauss nodes.
inline Vec cfm4_step(const TimeDepHamiltonian& H, const Vec& y, double t, double h, const KrylovOptions& k) {
    static const double s3 = std::sqrt(3.0);
    const double c1 = 0.5 - s3 / 6.0, c2 = 0.5 + s3 / 6.0;
    const double a1 = (3.0 - 2.0 * s3) / 12.0, a2 = (3.0 + 2.0 * s3) / 12.0;
    SpMat H1 = H.data_operator(t + c1 * h), H2 = H.data_operator(t + c2 * h);
    // Early-weighted exponential first.
    SpMat E1 = a2 * H1 + a1 * H2;
    SpMat E2 = a1 * H1 + a2 * H2;
    return apply_exp(E2, apply_exp(E1, y, h, k), h, k);
}

} // namespace detail

// Reference solution of i dpsi/dt = H(t) psi on [0, t_end] (periodic extension
// beyond T). Each interval between breakpoints is integrated separately; step
// doubling supplies the accepted-step error certificate.
inline TimeOrderedReport evolve_timeordered(const TimeDepHamiltonian& H, const Vec& psi0, double t_end,
                                            const TimeOrderedOptions& opt = {}) {
    const Index dim = Index{1} << H.n_sites();
    require(psi0.size() == dim, errc::dim_mismatch, "state size does not match 2^N");
    require(opt.tol > 0.0 && opt.tol <= 1e-4, errc::invalid_argument, "tolerance must lie in (0, 1e-4]");
    require(t_end >= 0.0, errc::invalid_argument, "negative evolution time");
    auto t0 = std::chrono::steady_clock::now();
    const double T = H.period();
    std::vector<double> cuts{0.0};
    std::vector<double> bps = H.breakpoints();
    for (long k = 0; k * T < t_end; ++k) {
        for (double b : bps)
            if (k * T + b < t_end) cuts.push_back(k * T + b);
        if ((k + 1) * T < t_end) cuts.push_back((k + 1) * T);
    }
    cuts.push_back(t_end);
    TimeOrderedReport r;
    Vec y = psi0;
    const double tol_per_time = opt.tol / std::max(t_end, 1e-300);
    double h = opt.h_init > 0.0 ? opt.h_init : 0.0;
    for (size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
        double a = cuts[seg];
        const double b = cuts[seg + 1];
        if (!(b > a)) continue;
        if (h <= 0.0 || h > b - a) h = std::min(b - a, opt.h_init > 0.0 ? opt.h_init : (b - a) / 8.0);
        while (a < b) {
            double step = std::min(h, b - a);
            bool last = step >= b - a;
            Vec full = detail::cfm4_step(H, y, a, step, opt.krylov);
            Vec half = detail::cfm4_step(H, detail::cfm4_step(H, y, a, 0.5 * step, opt.krylov), a + 0.5 * step,
                                         0.5 * step, opt.krylov);
            const double err = (full - half).norm();
            // Step-doubling differences bottom out near machine precision.
            const double allowed = tol_per_time * step + 32.0 * std::numeric_limits<double>::epsilon();
            if (err <= allowed) {
                y = half;
                r.certificate += err;
                a = last ? b : a + step;
                ++r.steps;
                if (opt.keep_trace) r.trace.emplace_back(a, r.certificate);
                const double fac = err > 0.0 ? 0.9 * std::pow(allowed / err, 0.2) : 4.0;
                h = step * std::clamp(fac, 0.2, 4.0);
            } else {
                ++r.rejected;
                require(step > opt.h_min * T, errc::step_underflow,
                        "integrator step underflow at t = " + std::to_string(a));
                const double fac = 0.9 * std::pow(allowed / err, 0.2);
                h = std::max(step * std::clamp(fac, 0.1, 0.5), 0.5 * opt.h_min * T);
            }
            require(r.steps + r.rejected < opt.max_steps, errc::step_underflow, "integrator exceeded max_steps");
        }
    }
    r.state = y;
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

// Dense propagator U(t_end, 0), built column by column. dim <= 256.
inline Mat propagator_timeordered(const TimeDepHamiltonian& H, double t_end, const TimeOrderedOptions& opt = {},
                                  double* certificate = nullptr) {
    const Index dim = Index{1} << H.n_sites();
    require(dim <= 256, errc::dimension_cap, "dense propagators are limited to dimension 256");
    Mat U(dim, dim);
    double cert = 0.0;
    for (Index c = 0; c < dim; ++c) {
        Vec e = Vec::Zero(dim);
        e(c) = 1.0;
        auto r = evolve_timeordered(H, e, t_end, opt);
        U.col(c) = r.state;
        cert = std::max(cert, r.certificate);
    }
    if (certificate) *certificate = cert;
    return U;
}

// prod_k exp(-i tau H(k tau)) psi, k = 0 first, tau = T / N_p.
inline Vec trotter_sequence(const TimeDepHamiltonian& H, int N_p, const Vec& psi0, double T,
                            const KrylovOptions& k = {}) {
    require(N_p >= 1, errc::invalid_argument, "N_p must be positive");
    const double tau = T / N_p;
    Vec y = psi0;
    for (int j = 0; j < N_p; ++j) y = detail::apply_exp(H.data_operator(j * tau), y, tau, k);
    return y;
}

struct StateComparison {
    double two_norm = 0.0;       // ||a - b||
    double phase_optimized = 0.0; // min_theta ||a - e^{i theta} b||
};

inline StateComparison compare_states(const Vec& a, const Vec& b) {
    require(a.size() == b.size(), errc::dim_mismatch, "states have different dimensions");
    StateComparison c;
    c.two_norm = (a - b).norm();
    const double ov = std::abs(a.dot(b));
    c.phase_optimized = std::sqrt(std::max(0.0, a.squaredNorm() + b.squaredNorm() - 2.0 * ov));
    return c;
}

inline double operator_distance(const Mat& U, const Mat& V) {
    require(U.rows() == V.rows() && U.cols() == V.cols(), errc::dim_mismatch, "operators have different shapes");
    require(U.rows() <= 256, errc::dimension_cap, "operator_distance is limited to dimension 256");
    return spectral_norm(U - V);
}

} // namespace staticize
