#pragma once

#include "core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace staticize {

inline double hermiticity_defect(const Mat& m) {
    if (m.rows() != m.cols()) return INFINITY;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// Spectral norm of a Hermitian matrix. Closed form for 2x2, direct eigensolve
// otherwise; no iterative estimate because these values feed proven bounds.
inline double herm_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    if (m.rows() == 2) {
        double a = m(0, 0).real(), d = m(1, 1).real();
        double mid = 0.5 * (a + d);
        double rad = std::hypot(0.5 * (a - d), std::abs(m(0, 1)));
        return std::abs(mid) + rad;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Spectral norm of an arbitrary dense matrix.
inline double spectral_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
}

inline double max_abs(const SpMat& m) {
    double v = 0.0;
    for (Index k = 0; k < m.outerSize(); ++k)
        for (SpMat::InnerIterator it(m, k); it; ++it) v = std::max(v, std::abs(it.value()));
    return v;
}

inline SpMat sparse_identity(Index n) {
    SpMat s(n, n);
    s.setIdentity();
    return s;
}

inline SpMat sparse_kron(const SpMat& a, const SpMat& b) {
    std::vector<Triplet> trips;
    trips.reserve(static_cast<size_t>(a.nonZeros() * b.nonZeros()));
    for (Index ka = 0; ka < a.outerSize(); ++ka)
        for (SpMat::InnerIterator ia(a, ka); ia; ++ia)
            for (Index kb = 0; kb < b.outerSize(); ++kb)
                for (SpMat::InnerIterator ib(b, kb); ib; ++ib)
                    trips.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(),
                                       ia.value() * ib.value());
    SpMat out(a.rows() * b.rows(), a.cols() * b.cols());
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

// Adds the action of a 2^k x 2^k operator on the listed data qubits to an
// n-qubit operator, writing entry (row_off + d', col_off + d). Qubit q is bit q
// of the data index; local bit i refers to sites[i].
inline void add_local_action(std::vector<Triplet>& out, const Mat& local, const std::vector<int>& sites,
                             int n_qubits, Index row_off = 0, Index col_off = 0, cplx scale = 1.0) {
    const int k = static_cast<int>(sites.size());
    const Index ldim = Index{1} << k;
    const Index ddim = Index{1} << n_qubits;
    Index mask = 0;
    for (int s : sites) mask |= Index{1} << s;
    for (Index d = 0; d < ddim; ++d) {
        Index l = 0;
        for (int i = 0; i < k; ++i) l |= ((d >> sites[i]) & 1) << i;
        const Index base = d & ~mask;
        for (Index lp = 0; lp < ldim; ++lp) {
            cplx v = local(lp, l);
            if (v == cplx{0.0}) continue;
            Index dp = base;
            for (int i = 0; i < k; ++i) dp |= ((lp >> i) & 1) << sites[i];
            out.emplace_back(row_off + dp, col_off + d, scale * v);
        }
    }
}

inline Mat embed_dense(const Mat& local, const std::vector<int>& sites, int n_qubits) {
    std::vector<Triplet> t;
    add_local_action(t, local, sites, n_qubits);
    const Index dim = Index{1} << n_qubits;
    SpMat s(dim, dim);
    s.setFromTriplets(t.begin(), t.end());
    return Mat(s);
}

// Extremal |eigenvalue| of a Hermitian sparse operator. Dense eigensolve up to
// dense_max, else Lanczos with full reorthogonalization from a fixed start.
inline double sparse_herm_norm(const SpMat& h, Index dense_max = 1024, int lanczos_steps = 200) {
    const Index n = h.rows();
    if (n == 0) return 0.0;
    if (n <= dense_max) return herm_norm(Mat(h));
    const int m = static_cast<int>(std::min<Index>(lanczos_steps, n));
    std::mt19937_64 gen(0x5eed);
    std::normal_distribution<double> g;
    Vec v(n);
    for (Index i = 0; i < n; ++i) v(i) = cplx(g(gen), g(gen));
    v.normalize();
    std::vector<Vec> basis;
    std::vector<double> alpha, beta;
    basis.push_back(v);
    for (int j = 0; j < m; ++j) {
        Vec w = h * basis[j];
        alpha.push_back(basis[j].dot(w).real());
        for (int pass = 0; pass < 2; ++pass)
            for (auto& b : basis) w -= b.dot(w) * b;
        double bn = w.norm();
        if (bn < 1e-12 || j + 1 == m) break;
        beta.push_back(bn);
        basis.push_back(w / bn);
    }
    const Index k = static_cast<Index>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
    for (Index i = 0; i < k; ++i) t(i, i) = alpha[i];
    for (Index i = 0; i + 1 < k; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

// max |<u, M v> - <M u, v>| over a few fixed random pairs.
inline double hermiticity_probe(const SpMat& m, int pairs = 3) {
    std::mt19937_64 gen(0xbeef);
    std::normal_distribution<double> g;
    double worst = 0.0;
    for (int p = 0; p < pairs; ++p) {
        Vec u(m.rows()), v(m.rows());
        for (Index i = 0; i < m.rows(); ++i) {
            u(i) = cplx(g(gen), g(gen));
            v(i) = cplx(g(gen), g(gen));
        }
        Vec mv = m * v, mu = m * u;
        worst = std::max(worst, std::abs(u.dot(mv) - mu.dot(v)));
    }
    return worst;
}

inline Mat random_hermitian(int dim, std::mt19937_64& gen, double scale = 1.0) {
    std::normal_distribution<double> g;
    Mat a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = cplx(g(gen), g(gen));
    return scale * 0.5 * (a + a.adjoint());
}

// exp(-i t H) for a Hermitian dense H via eigendecomposition.
inline Mat expm_herm(const Mat& h, double t) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    Vec ph = (-I1 * t * es.eigenvalues().cast<cplx>()).array().exp();
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace staticize
