#pragma once

#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace staticize {

struct SiteGraph {
    int n = 0;
    int d = 1;
    std::vector<std::pair<int, int>> edges;
    std::vector<double> weight;
    std::vector<int> control;             // rho(e), an endpoint of edge e
    std::vector<std::vector<int>> coords; // empty, or one point of Z^d per vertex
    std::optional<double> alpha;          // power-law exponent when coords are set
    std::optional<double> vertex_cap;     // optional cap on single-site norms

    int edge_index(int u, int v) const {
        for (size_t e = 0; e < edges.size(); ++e) {
            auto [a, b] = edges[e];
            if ((a == u && b == v) || (a == v && b == u)) return static_cast<int>(e);
        }
        return -1;
    }

    double distance(int u, int v) const {
        double s = 0.0;
        for (int k = 0; k < d; ++k) {
            double dx = coords[u][k] - coords[v][k];
            s += dx * dx;
        }
        return std::sqrt(s);
    }

    void validate() const {
        require(n > 0, errc::invalid_argument, "graph needs at least one vertex");
        require(weight.size() == edges.size() && control.size() == edges.size(), errc::invalid_argument,
                "edge, weight and control lists differ in length");
        for (size_t e = 0; e < edges.size(); ++e) {
            auto [u, v] = edges[e];
            require(u >= 0 && u < n && v >= 0 && v < n, errc::invalid_argument,
                    "edge " + std::to_string(e) + " has an endpoint outside [0, n)");
            require(u != v, errc::invalid_argument, "self-loop at vertex " + std::to_string(u));
            require(control[e] == u || control[e] == v, errc::invalid_argument,
                    "control vertex of edge " + std::to_string(e) + " is not an endpoint");
            require(weight[e] > 0.0, errc::invalid_argument, "nonpositive edge weight");
            for (size_t f = 0; f < e; ++f) {
                auto [a, b] = edges[f];
                require(!((a == u && b == v) || (a == v && b == u)), errc::invalid_argument, "duplicate edge");
            }
        }
        if (!coords.empty()) {
            require(static_cast<int>(coords.size()) == n, errc::invalid_argument, "one coordinate per vertex");
            for (auto& c : coords) require(static_cast<int>(c.size()) == d, errc::invalid_argument, "coordinate rank");
            if (alpha) {
                for (size_t e = 0; e < edges.size(); ++e) {
                    double w = std::pow(distance(edges[e].first, edges[e].second), -*alpha);
                    require(std::abs(w - weight[e]) <= 1e-12 * w, errc::invalid_argument,
                            "edge weight differs from the power-law weight");
                }
            }
        }
    }

    void add_edge(int u, int v, double w = 1.0, int rho = -1) {
        edges.emplace_back(u, v);
        weight.push_back(w);
        control.push_back(rho < 0 ? u : rho);
    }

    static SiteGraph isolated(int n) {
        SiteGraph g;
        g.n = n;
        return g;
    }

    static SiteGraph chain(int n, double w = 1.0) {
        SiteGraph g = isolated(n);
        for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1, w);
        return g;
    }

    static SiteGraph complete(int n, double w = 1.0) {
        SiteGraph g = isolated(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) g.add_edge(i, j, w);
        return g;
    }

    // All pairs of an L^d hypercubic lattice, weights |i-j|^-alpha. Vertex index
    // is lexicographic with the first coordinate varying fastest.
    static SiteGraph power_law_lattice(int side, int d, double alpha) {
        int n = 1;
        for (int k = 0; k < d; ++k) n *= side;
        SiteGraph g = isolated(n);
        g.d = d;
        g.alpha = alpha;
        g.coords.resize(n);
        for (int i = 0; i < n; ++i) {
            int r = i;
            for (int k = 0; k < d; ++k) {
                g.coords[i].push_back(r % side);
                r /= side;
            }
        }
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) g.add_edge(i, j, std::pow(g.distance(i, j), -alpha));
        return g;
    }
};

struct Support {
    bool is_edge = false;
    int index = 0;
    static Support vertex(int v) { return {false, v}; }
    static Support edge(int e) { return {true, e}; }
    bool operator==(const Support&) const = default;
};

enum class TermKind { Constant, Piecewise, Sampled, ClosedForm };

struct TermSchedule {
    Support support;
    TermKind kind = TermKind::Constant;
    std::vector<double> times; // piecewise: piece start times (first is 0); sampled: grid on [0, T]
    std::vector<Mat> values;
    std::vector<Mat> derivs;   // sampled only
    std::function<Mat(double)> fn, dfn;

    int local_dim() const { return support.is_edge ? 4 : 2; }

    static TermSchedule constant(Support s, Mat m) {
        TermSchedule t;
        t.support = s;
        t.kind = TermKind::Constant;
        t.values = {std::move(m)};
        return t;
    }

    static TermSchedule piecewise(Support s, std::vector<double> starts, std::vector<Mat> mats) {
        require(!starts.empty() && starts.size() == mats.size(), errc::invalid_argument,
                "piecewise term needs one matrix per piece");
        require(starts.front() == 0.0, errc::invalid_argument, "first piece must start at t = 0");
        for (size_t i = 1; i < starts.size(); ++i)
            require(starts[i] > starts[i - 1], errc::invalid_argument, "piece starts must increase");
        TermSchedule t;
        t.support = s;
        t.kind = TermKind::Piecewise;
        t.times = std::move(starts);
        t.values = std::move(mats);
        return t;
    }

    // Cubic Hermite interpolation; missing derivative samples are estimated by
    // second-order finite differences of the values.
    static TermSchedule sampled(Support s, std::vector<double> grid, std::vector<Mat> vals,
                                std::vector<Mat> ders = {}) {
        require(grid.size() >= 2 && grid.size() == vals.size(), errc::invalid_argument,
                "sampled term needs at least two samples and one matrix per sample");
        for (size_t i = 1; i < grid.size(); ++i)
            require(grid[i] > grid[i - 1], errc::invalid_argument, "sample times must increase");
        if (ders.empty()) {
            const size_t n = grid.size();
            ders.resize(n);
            for (size_t i = 0; i < n; ++i) {
                if (n == 2) {
                    ders[i] = (vals[1] - vals[0]) / (grid[1] - grid[0]);
                } else if (i == 0 || i + 1 == n) {
                    size_t a = i == 0 ? 0 : n - 3;
                    double h1 = grid[a + 1] - grid[a], h2 = grid[a + 2] - grid[a + 1];
                    Mat d0 = (vals[a + 1] - vals[a]) / h1, d1 = (vals[a + 2] - vals[a + 1]) / h2;
                    ders[i] = i == 0 ? Mat(d0 - (d1 - d0) * (h1 / (h1 + h2)))
                                     : Mat(d1 + (d1 - d0) * (h2 / (h1 + h2)));
                } else {
                    double h1 = grid[i] - grid[i - 1], h2 = grid[i + 1] - grid[i];
                    ders[i] = (vals[i + 1] - vals[i]) * (h1 / (h2 * (h1 + h2))) +
                              (vals[i] - vals[i - 1]) * (h2 / (h1 * (h1 + h2)));
                }
            }
        }
        require(ders.size() == vals.size(), errc::invalid_argument, "derivative grid size mismatch");
        TermSchedule t;
        t.support = s;
        t.kind = TermKind::Sampled;
        t.times = std::move(grid);
        t.values = std::move(vals);
        t.derivs = std::move(ders);
        return t;
    }

    static TermSchedule closed_form(Support s, std::function<Mat(double)> f, std::function<Mat(double)> df = {}) {
        TermSchedule t;
        t.support = s;
        t.kind = TermKind::ClosedForm;
        t.fn = std::move(f);
        t.dfn = std::move(df);
        return t;
    }

    bool nonsmooth() const { return kind == TermKind::Piecewise && values.size() > 1; }

    // Value at t in [0, period]; no wrapping.
    Mat value(double t) const {
        switch (kind) {
        case TermKind::Constant:
            return values[0];
        case TermKind::Piecewise: {
            auto it = std::upper_bound(times.begin(), times.end(), t);
            size_t i = it == times.begin() ? 0 : static_cast<size_t>(it - times.begin()) - 1;
            return values[i];
        }
        case TermKind::Sampled: {
            auto [i, u, h] = locate(t);
            double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
            double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
            return values[i] * h00 + derivs[i] * (h10 * h) + values[i + 1] * h01 + derivs[i + 1] * (h11 * h);
        }
        case TermKind::ClosedForm:
            return fn(t);
        }
        return {};
    }

    // Time derivative at t in [0, period]. Piecewise terms report zero (callers
    // check nonsmooth()). Closed forms without a derivative use Richardson-
    // extrapolated central differences with step scaled to the period.
    Mat derivative(double t, double period) const {
        switch (kind) {
        case TermKind::Constant:
        case TermKind::Piecewise:
            return Mat::Zero(local_dim(), local_dim());
        case TermKind::Sampled: {
            auto [i, u, h] = locate(t);
            double d00 = 6 * u * u - 6 * u, d10 = 3 * u * u - 4 * u + 1;
            double d01 = -6 * u * u + 6 * u, d11 = 3 * u * u - 2 * u;
            return values[i] * (d00 / h) + derivs[i] * d10 + values[i + 1] * (d01 / h) + derivs[i + 1] * d11;
        }
        case TermKind::ClosedForm: {
            if (dfn) return dfn(t);
            const double s = 1e-3 * period;
            auto cd = [&](double e) { return Mat((fn(t + e) - fn(t - e)) / (2 * e)); };
            return (4.0 * cd(0.5 * s) - cd(s)) / 3.0;
        }
        }
        return {};
    }

private:
    std::tuple<size_t, double, double> locate(double t) const {
        auto it = std::upper_bound(times.begin(), times.end(), t);
        size_t i = it == times.begin() ? 0 : static_cast<size_t>(it - times.begin()) - 1;
        i = std::min(i, times.size() - 2);
        double h = times[i + 1] - times[i];
        double u = std::clamp((t - times[i]) / h, 0.0, 1.0);
        return {i, u, h};
    }
};

enum class Smoothness { PiecewiseContinuous, DifferentiablePeriodic };

inline constexpr double herm_tol = 1e-12;

class TimeDepHamiltonian {
public:
    TimeDepHamiltonian() = default;

    TimeDepHamiltonian(SiteGraph graph, std::vector<TermSchedule> terms, double period,
                       Smoothness smooth = Smoothness::PiecewiseContinuous)
        : graph_(std::move(graph)), terms_(std::move(terms)), period_(period), smooth_(smooth) {
        graph_.validate();
        require(period_ > 0.0, errc::invalid_argument, "period must be positive");
        edge_term_.assign(graph_.edges.size(), -1);
        vertex_term_.assign(graph_.n, -1);
        for (size_t i = 0; i < terms_.size(); ++i) {
            const auto& s = terms_[i].support;
            auto& slot = s.is_edge ? edge_term_ : vertex_term_;
            require(s.index >= 0 && s.index < static_cast<int>(slot.size()), errc::invalid_argument,
                    "term support out of range");
            require(slot[s.index] < 0, errc::invalid_argument, "more than one term on a support");
            slot[s.index] = static_cast<int>(i);
            check_term(terms_[i]);
        }
        if (smooth_ == Smoothness::DifferentiablePeriodic) check_periodic();
    }

    const SiteGraph& graph() const { return graph_; }
    const std::vector<TermSchedule>& terms() const { return terms_; }
    double period() const { return period_; }
    Smoothness smoothness() const { return smooth_; }
    int n_sites() const { return graph_.n; }

    const TermSchedule* find(Support s) const {
        const auto& slot = s.is_edge ? edge_term_ : vertex_term_;
        if (s.index < 0 || s.index >= static_cast<int>(slot.size()) || slot[s.index] < 0) return nullptr;
        return &terms_[slot[s.index]];
    }

    std::vector<int> sites(Support s) const {
        if (!s.is_edge) return {s.index};
        auto [u, v] = graph_.edges[s.index];
        return {u, v};
    }

    // Vertex that clocks the term.
    int control_site(Support s) const { return s.is_edge ? graph_.control[s.index] : s.index; }

    double wrap(double t) const {
        double r = std::fmod(t, period_);
        if (r < 0) r += period_;
        if (r >= period_) r = 0.0;
        return r;
    }

    Mat eval_term(Support s, double t) const {
        const TermSchedule* term = find(s);
        if (!term) fail(errc::no_term, std::string(s.is_edge ? "edge " : "vertex ") + std::to_string(s.index));
        Mat m = term->value(wrap(t));
        if (term->kind == TermKind::ClosedForm) {
            require(m.rows() == term->local_dim() && m.cols() == term->local_dim(), errc::invalid_argument,
                    "closed-form term returned a matrix of the wrong size");
            require(hermiticity_defect(m) <= herm_tol, errc::non_hermitian,
                    "closed-form term is not Hermitian at t = " + std::to_string(t));
        }
        return m;
    }

    Mat eval_term_derivative(Support s, double t) const {
        const TermSchedule* term = find(s);
        if (!term) fail(errc::no_term, std::string(s.is_edge ? "edge " : "vertex ") + std::to_string(s.index));
        return term->derivative(wrap(t), period_);
    }

    // Sorted piece starts of all piecewise terms inside (0, T).
    std::vector<double> breakpoints() const {
        std::vector<double> b;
        for (const auto& t : terms_)
            if (t.kind == TermKind::Piecewise)
                for (double s : t.times)
                    if (s > 0.0 && s < period_) b.push_back(s);
        std::sort(b.begin(), b.end());
        b.erase(std::unique(b.begin(), b.end()), b.end());
        return b;
    }

    // Full 2^N data operator at time t (wrapped into the period).
    SpMat data_operator(double t) const {
        std::vector<Triplet> trips;
        for (const auto& term : terms_) add_local_action(trips, eval_term(term.support, t), sites(term.support), graph_.n);
        const Index dim = Index{1} << graph_.n;
        SpMat out(dim, dim);
        out.setFromTriplets(trips.begin(), trips.end());
        return out;
    }

    Mat dense_operator(double t) const { return Mat(data_operator(t)); }

private:
    void check_matrix(const TermSchedule& term, const Mat& m, const std::string& where) const {
        const int ld = term.local_dim();
        require(m.rows() == ld && m.cols() == ld, errc::invalid_argument, "term matrix has wrong size at " + where);
        require(hermiticity_defect(m) <= herm_tol, errc::non_hermitian, "term matrix not Hermitian at " + where);
        double nrm = herm_norm(m);
        if (term.support.is_edge) {
            double w = graph_.weight[term.support.index];
            require(nrm <= w * (1 + 1e-12) + 1e-12, errc::invalid_argument,
                    "edge term norm exceeds its weight cap at " + where);
        } else if (graph_.vertex_cap) {
            require(nrm <= *graph_.vertex_cap * (1 + 1e-12) + 1e-12, errc::invalid_argument,
                    "vertex term norm exceeds the vertex cap at " + where);
        }
    }

    void check_term(const TermSchedule& term) const {
        if (term.kind == TermKind::ClosedForm) {
            require(static_cast<bool>(term.fn), errc::invalid_argument, "closed-form term without a callable");
            for (int k = 0; k <= 256; ++k) {
                double t = period_ * k / 256.0;
                check_matrix(term, term.value(t), "t = " + std::to_string(t));
            }
            return;
        }
        for (size_t i = 0; i < term.values.size(); ++i) check_matrix(term, term.values[i], "sample " + std::to_string(i));
        if (term.kind == TermKind::Sampled) {
            require(std::abs(term.times.front()) <= 1e-12 * period_ && std::abs(term.times.back() - period_) <= 1e-9 * period_,
                    errc::invalid_argument, "sample grid must span [0, T]");
        }
    }

    // Continuity of H and its derivative across the period boundary. The
    // derivative check compares the two ends rather than requiring both zero,
    // so e.g. sin(2 pi t / T) counts as differentiable-periodic.
    void check_periodic() const {
        for (const auto& term : terms_) {
            require(!term.nonsmooth(), errc::invalid_argument,
                    "differentiable-periodic Hamiltonian contains a piecewise-constant term");
            Mat a = term.value(0.0), b = term.value(period_);
            require((a - b).cwiseAbs().maxCoeff() <= 1e-10, errc::invalid_argument,
                    "H(0) != H(T) for a differentiable-periodic Hamiltonian");
            Mat da = term.derivative(0.0, period_), db = term.derivative(period_, period_);
            require((da - db).cwiseAbs().maxCoeff() <= 1e-8 * std::max(1.0, da.cwiseAbs().maxCoeff()), errc::invalid_argument,
                    "dH/dt(0) != dH/dt(T) for a differentiable-periodic Hamiltonian");
        }
    }

    SiteGraph graph_;
    std::vector<TermSchedule> terms_;
    double period_ = 1.0;
    Smoothness smooth_ = Smoothness::PiecewiseContinuous;
    std::vector<int> edge_term_, vertex_term_;
};

struct HamiltonianNorms {
    double h = 0.0;
    double h1 = 0.0;
    std::vector<double> per_term_max;        // indexed like H.terms()
    std::vector<double> per_term_max_deriv;
    std::vector<bool> nonsmooth;             // derivative undefined; reported as 0
    bool h1_computed = false;
};

struct NormOptions {
    int grid_points = 10000;
    bool want_h1 = true;
    bool accept_nonsmooth = false; // report 0 for piecewise terms instead of failing
};

namespace detail {

// max of g over [0, T]: uniform grid, then golden-section refinement around
// the best few local maxima. Never returns less than the grid maximum.
template <class G>
double grid_max(G&& g, double T, int points) {
    points = std::max(points, 2);
    std::vector<double> v(points + 1);
    for (int i = 0; i <= points; ++i) v[i] = g(T * i / points);
    double best = *std::max_element(v.begin(), v.end());
    std::vector<int> peaks;
    for (int i = 0; i <= points; ++i) {
        double l = i > 0 ? v[i - 1] : -1.0, r = i < points ? v[i + 1] : -1.0;
        if (v[i] >= l && v[i] >= r) peaks.push_back(i);
    }
    std::sort(peaks.begin(), peaks.end(), [&](int a, int b) { return v[a] > v[b]; });
    if (peaks.size() > 4) peaks.resize(4);
    const double gr = (std::sqrt(5.0) - 1) / 2;
    for (int p : peaks) {
        double a = T * std::max(p - 1, 0) / points, b = T * std::min(p + 1, points) / points;
        double c = b - gr * (b - a), d = a + gr * (b - a);
        double fc = g(c), fd = g(d);
        for (int it = 0; it < 80 && b - a > 1e-15 * std::max(1.0, T); ++it) {
            if (fc > fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - gr * (b - a);
                fc = g(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + gr * (b - a);
                fd = g(d);
            }
        }
        best = std::max({best, fc, fd});
    }
    return best;
}

} // namespace detail

inline HamiltonianNorms compute_norms(const TimeDepHamiltonian& H, const NormOptions& opt = {}) {
    require(opt.grid_points >= 2, errc::invalid_argument, "grid_points must be at least 2");
    HamiltonianNorms r;
    const double T = H.period();
    const auto& terms = H.terms();
    r.per_term_max.resize(terms.size());
    r.per_term_max_deriv.assign(terms.size(), 0.0);
    r.nonsmooth.assign(terms.size(), false);
    for (size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        if (t.kind == TermKind::Constant || t.kind == TermKind::Piecewise) {
            double m = 0.0;
            for (const auto& v : t.values) m = std::max(m, herm_norm(v));
            r.per_term_max[i] = m;
            r.nonsmooth[i] = t.nonsmooth();
        } else {
            r.per_term_max[i] = detail::grid_max([&](double s) { return herm_norm(H.eval_term(t.support, s)); }, T,
                                                 opt.grid_points);
        }
        r.h += r.per_term_max[i];
    }
    if (opt.want_h1) {
        bool any_nonsmooth = std::any_of(r.nonsmooth.begin(), r.nonsmooth.end(), [](bool b) { return b; });
        if (any_nonsmooth && !opt.accept_nonsmooth)
            fail(errc::nonsmooth, "h1 requested for a Hamiltonian with piecewise-constant terms; smooth it first");
        for (size_t i = 0; i < terms.size(); ++i) {
            const auto& t = terms[i];
            if (t.kind == TermKind::Sampled || t.kind == TermKind::ClosedForm) {
                r.per_term_max_deriv[i] = detail::grid_max(
                    [&](double s) {
                        Mat d = t.derivative(s, T);
                        return herm_norm(Mat(0.5 * (d + d.adjoint())));
                    },
                    T, opt.grid_points);
            }
            r.h1 += r.per_term_max_deriv[i];
        }
        r.h1_computed = true;
    }
    return r;
}

} // namespace staticize
