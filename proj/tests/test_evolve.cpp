#include "helpers.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace staticize;
using namespace testing_support;

namespace {

SpMat random_sparse_hermitian(Index dim, std::mt19937_64& gen) {
    std::normal_distribution<double> n(0, 1);
    std::uniform_int_distribution<Index> pick(0, dim - 1);
    std::vector<Triplet> t;
    for (Index i = 0; i < 4 * dim; ++i) {
        const Index r = pick(gen), c = pick(gen);
        const cplx v(n(gen), r == c ? 0.0 : n(gen));
        t.emplace_back(r, c, v);
        t.emplace_back(c, r, std::conj(v));
    }
    SpMat m(dim, dim);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

} // namespace

TEST(Evolve, ZeroHamiltonianIsIdentity) {
    Vec psi(4);
    psi << 0.5, cplx(0, 0.5), -0.5, 0.5;
    SpMat H(4, 4);
    EXPECT_LE((evolve_static(H, psi, 3.0).state - psi).norm(), 1e-15);
}

TEST(Evolve, ZRotatesPlusToMinus) {
    SpMat H = Mat(pauli::z()).sparseView();
    Vec plus(2), minus(2);
    plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    minus << 1 / std::sqrt(2.0), -1 / std::sqrt(2.0);
    // exp(-i pi Z) = -I; pi/2 maps |+> to |->.
    EXPECT_NEAR(std::abs(minus.dot(evolve_static(H, plus, pi / 2).state)), 1.0, 1e-10);
    EXPECT_NEAR(std::abs(plus.dot(evolve_static(H, plus, pi).state)), 1.0, 1e-10);
}

TEST(Evolve, KrylovMatchesDense) {
    std::mt19937_64 gen(21);
    for (int i = 0; i < 30; ++i) {
        const Index dim = 64 + 16 * i;
        const SpMat H = random_sparse_hermitian(dim, gen);
        Vec psi = Vec::Random(dim).normalized();
        const double t = 0.3 + 0.05 * i;
        KrylovOptions k;
        k.method = ExpMethod::Krylov;
        const Vec a = evolve_static(H, psi, t, k).state;
        const Vec b = expm_herm(Mat(H), t) * psi;
        EXPECT_LE((a - b).norm(), 1e-9) << "dim=" << dim;
        EXPECT_NEAR(a.norm(), 1.0, 1e-10);
    }
}

TEST(Evolve, TimeOrderedMatchesStaticForConstantH) {
    SiteGraph g = SiteGraph::chain(2);
    TimeDepHamiltonian H(g, {TermSchedule::constant(Support::vertex(0), pauli::x()),
                             TermSchedule::constant(Support::edge(0), pair_op(pauli::z(), pauli::y()))}, 0.7);
    Vec psi = Vec::Zero(4);
    psi(0) = 1;
    TimeOrderedOptions o;
    o.tol = 1e-12;
    const Vec a = evolve_timeordered(H, psi, 2.1, o).state;
    const Vec b = evolve_static(H.data_operator(0), psi, 2.1).state;
    EXPECT_LE((a - b).norm(), 1e-10);
}

TEST(Evolve, TimeOrderedPiecewiseMatchesStepProduct) {
    TimeDepHamiltonian H(SiteGraph::isolated(1),
                         {TermSchedule::piecewise(Support::vertex(0), {0.0, 0.3, 0.8}, {pauli::x(), pauli::y(), pauli::z()})},
                         1.0);
    const Mat U = expm_herm(pauli::z(), 0.2) * expm_herm(pauli::y(), 0.5) * expm_herm(pauli::x(), 0.3);
    Vec psi(2);
    psi << 0.6, cplx(0, 0.8);
    TimeOrderedOptions o;
    o.tol = 1e-11;
    const auto r = evolve_timeordered(H, psi, 1.0, o);
    EXPECT_LE((r.state - U * psi).norm(), 1e-10);
}

TEST(Evolve, TrotterSingleStep) {
    const auto H = testing_support::sin2_x();
    Vec psi(2);
    psi << 1, 0;
    // H(0) = 0, so one step is the identity.
    EXPECT_LE((trotter_sequence(H, 1, psi, 1.0) - psi).norm(), 1e-15);
    const auto C = constant_on_vertex(pauli::y());
    EXPECT_LE((trotter_sequence(C, 7, psi, 1.0) - expm_herm(pauli::y(), 1.0) * psi).norm(), 1e-12);
}

TEST(Evolve, CompareStates) {
    Vec a(2), b(2);
    a << 1, 0;
    b << 0, 1;
    EXPECT_EQ(compare_states(a, a).two_norm, 0.0);
    EXPECT_NEAR(compare_states(a, b).two_norm, std::sqrt(2.0), 1e-15);
    const auto c = compare_states(a, -a);
    EXPECT_NEAR(c.two_norm, 2.0, 1e-15);
    EXPECT_NEAR(c.phase_optimized, 0.0, 1e-7);
}

TEST(Evolve, OperatorDistance) {
    const Mat I = Mat::Identity(4, 4);
    EXPECT_NEAR(operator_distance(I, I), 0.0, 1e-15);
    EXPECT_NEAR(operator_distance(I, -I), 2.0, 1e-14);
}

TEST(EvolveProperty, UnitarityAndCertificates) {
    std::mt19937_64 gen(22);
    const auto H = random_periodic_hamiltonian(3, 1.0, gen);
    Vec psi = Vec::Zero(8);
    psi(3) = 1;
    TimeOrderedOptions a, b;
    a.tol = 1e-8;
    b.tol = 5e-9;
    const auto ra = evolve_timeordered(H, psi, 1.0, a);
    const auto rb = evolve_timeordered(H, psi, 1.0, b);
    EXPECT_NEAR(ra.state.norm(), 1.0, 1e-10);
    EXPECT_NEAR(rb.state.norm(), 1.0, 1e-10);
    EXPECT_LE((ra.state - rb.state).norm(), ra.certificate + rb.certificate);
}

TEST(Evolve, PropagatorIsUnitary) {
    const auto H = testing_support::smooth_edge();
    const Mat U = propagator_timeordered(H, 1.0);
    EXPECT_LE((U.adjoint() * U - Mat::Identity(4, 4)).norm(), 1e-9);
}
