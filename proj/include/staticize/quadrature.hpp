#pragma once

#include "core.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace staticize {

// Globally adaptive Gauss-Kronrod 7/15. The integrand may return double or a
// dense matrix; the error is measured entrywise (max-abs).
template <class T>
struct QuadResult {
    T value;
    double error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

namespace detail {

inline double quad_norm(double v) { return std::abs(v); }
inline double quad_norm(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
inline double quad_norm(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline constexpr std::array<double, 8> gk_x{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> gk_wk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> gk_wg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T, class F>
std::pair<T, double> gk15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    T fc = f(c);
    T kron = fc * gk_wk[7];
    T gauss = fc * gk_wg[3];
    for (int i = 0; i < 7; ++i) {
        T s = f(c - hw * gk_x[i]) + f(c + hw * gk_x[i]);
        kron = kron + s * gk_wk[i];
        if (i % 2 == 1) gauss = gauss + s * gk_wg[i / 2];
    }
    T k = kron * hw;
    double err = quad_norm(T(k - gauss * hw));
    return {k, err};
}

} // namespace detail

template <class T, class F>
QuadResult<T> integrate(F&& f, double a, double b, double abs_tol = 1e-10, double rel_tol = 1e-12,
                        int max_intervals = 2000) {
    struct Seg {
        double a, b;
        T val;
        double err;
        bool operator<(const Seg& o) const { return err < o.err; }
    };
    QuadResult<T> r;
    if (b == a) {
        r.value = f(a) * 0.0;
        r.converged = true;
        return r;
    }
    std::priority_queue<Seg> heap;
    auto [v0, e0] = detail::gk15<T>(f, a, b);
    r.evaluations = 15;
    heap.push({a, b, v0, e0});
    T total = v0;
    double err = e0;
    int count = 1;
    while (err > std::max(abs_tol, rel_tol * detail::quad_norm(total)) && count < max_intervals) {
        Seg s = heap.top();
        heap.pop();
        const double m = 0.5 * (s.a + s.b);
        if (m <= s.a || m >= s.b) {
            heap.push(s);
            break;
        }
        auto [vl, el] = detail::gk15<T>(f, s.a, m);
        auto [vr, er] = detail::gk15<T>(f, m, s.b);
        r.evaluations += 30;
        heap.push({s.a, m, vl, el});
        heap.push({m, s.b, vr, er});
        ++count;
        // Re-sum from the heap to avoid cancellation drift in long refinements.
        std::priority_queue<Seg> copy = heap;
        total = copy.top().val * 0.0;
        err = 0.0;
        while (!copy.empty()) {
            total = total + copy.top().val;
            err += copy.top().err;
            copy.pop();
        }
    }
    r.value = total;
    r.error = err;
    r.converged = err <= std::max(abs_tol, rel_tol * detail::quad_norm(total));
    return r;
}

// Integral over [a, b] split at the supplied interior points (kinks of the integrand).
template <class T, class F>
QuadResult<T> integrate_pieces(F&& f, std::vector<double> cuts, double abs_tol = 1e-10,
                               double rel_tol = 1e-12) {
    QuadResult<T> out;
    out.converged = true;
    bool first = true;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i + 1] > cuts[i])) continue;
        auto r = integrate<T>(f, cuts[i], cuts[i + 1], abs_tol / double(cuts.size()), rel_tol);
        out.value = first ? r.value : T(out.value + r.value);
        first = false;
        out.error += r.error;
        out.evaluations += r.evaluations;
        out.converged = out.converged && r.converged;
    }
    if (first) out.value = f(cuts.empty() ? 0.0 : cuts.front()) * 0.0;
    return out;
}

} // namespace staticize
