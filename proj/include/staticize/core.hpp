#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace staticize {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<cplx, Eigen::ColMajor, long>;
using Triplet = Eigen::Triplet<cplx, long>;
using Index = long;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I1{0.0, 1.0};

// Every error thrown by the library. kind() is a stable tag that tests and the
// CLI match on; what() carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

namespace errc {
inline constexpr const char* no_term = "no-term-on-support";
inline constexpr const char* non_hermitian = "non-hermitian";
inline constexpr const char* out_of_domain = "out-of-domain";
inline constexpr const char* dimension_cap = "dimension-cap";
inline constexpr const char* invalid_argument = "invalid-argument";
inline constexpr const char* dim_mismatch = "dim-mismatch";
inline constexpr const char* nonsmooth = "h1-nonsmooth";
inline constexpr const char* step_underflow = "step-underflow";
inline constexpr const char* quadrature = "quadrature-nonconvergence";
inline constexpr const char* unknown_lemma = "unknown-lemma";
inline constexpr const char* config = "config";
} // namespace errc

[[noreturn]] inline void fail(const char* kind, const std::string& msg) { throw Error(kind, msg); }

inline void require(bool cond, const char* kind, const std::string& msg) {
    if (!cond) fail(kind, msg);
}

namespace pauli {
inline Mat id() { return Mat::Identity(2, 2); }
inline Mat x() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
inline Mat y() {
    Mat m(2, 2);
    m << 0, -I1, I1, 0;
    return m;
}
inline Mat z() {
    Mat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}
// |1><1|
inline Mat n1() {
    Mat m = Mat::Zero(2, 2);
    m(1, 1) = 1;
    return m;
}
} // namespace pauli

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Two-site operator a on the edge's first endpoint, b on its second. Local
// index = bit(first) + 2*bit(second), matching the little-endian data order.
inline Mat pair_op(const Mat& a, const Mat& b) { return kron(b, a); }

} // namespace staticize
