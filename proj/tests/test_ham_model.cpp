#include "helpers.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace staticize;
using namespace testing_support;

TEST(HamModel, ConstantTermIsPauliX) {
    const auto H = constant_on_vertex(pauli::x());
    for (double t : {0.0, 0.3, 0.99, 7.25}) EXPECT_LE((H.eval_term(Support::vertex(0), t) - pauli::x()).norm(), 1e-15);
}

TEST(HamModel, Sin2VanishesAtZero) {
    SiteGraph g = SiteGraph::isolated(1);
    auto f = [](double t) -> Mat { return std::pow(std::sin(pi * t), 2) * pauli::z(); };
    TimeDepHamiltonian H(g, {TermSchedule::closed_form(Support::vertex(0), f)}, 1.0);
    EXPECT_LE(H.eval_term(Support::vertex(0), 0.0).norm(), 1e-15);
}

TEST(HamModel, PiecewiseWrapsPeriodically) {
    TimeDepHamiltonian H(SiteGraph::isolated(1),
                         {TermSchedule::piecewise(Support::vertex(0), {0.0, 1.0}, {pauli::x(), pauli::z()})}, 2.0);
    EXPECT_LE((H.eval_term(Support::vertex(0), 2.5) - pauli::x()).norm(), 1e-15);
    EXPECT_LE((H.eval_term(Support::vertex(0), 1.5) - pauli::z()).norm(), 1e-15);
}

TEST(HamModel, MissingSupportIsAnError) {
    TimeDepHamiltonian H(SiteGraph::chain(2), {TermSchedule::constant(Support::vertex(0), pauli::x())}, 1.0);
    try {
        H.eval_term(Support::vertex(1), 0.2);
        FAIL() << "expected no-term-on-support";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), errc::no_term);
    }
}

TEST(HamModel, NonHermitianRejected) {
    Mat m = pauli::x();
    m(0, 1) = 2.0;
    try {
        constant_on_vertex(m);
        FAIL() << "expected rejection";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), errc::non_hermitian);
    }
}

TEST(HamModel, EdgeOverCapRejected) {
    SiteGraph g = SiteGraph::chain(2, 0.5);
    EXPECT_THROW(TimeDepHamiltonian(g, {TermSchedule::constant(Support::edge(0), pair_op(pauli::x(), pauli::x()))}, 1.0),
                 Error);
}

TEST(HamModel, NormsOfConstantX) {
    const auto nr = compute_norms(constant_on_vertex(pauli::x()));
    EXPECT_NEAR(nr.h, 1.0, 1e-14);
    EXPECT_NEAR(nr.h1, 0.0, 1e-14);
}

TEST(HamModel, NormsOfCosineEdge) {
    SiteGraph g = SiteGraph::chain(2);
    const Mat xx = 0.5 * pair_op(pauli::x(), pauli::x());
    auto f = [=](double t) -> Mat { return std::cos(2 * pi * t) * xx; };
    auto df = [=](double t) -> Mat { return -2 * pi * std::sin(2 * pi * t) * xx; };
    TimeDepHamiltonian H(g, {TermSchedule::closed_form(Support::edge(0), f, df)}, 1.0, Smoothness::DifferentiablePeriodic);
    const auto nr = compute_norms(H);
    EXPECT_NEAR(nr.h, 0.5, 1e-12);
    EXPECT_NEAR(nr.h1, pi, 1e-9);
    // Independent dense grid maximization.
    double gh = 0, gh1 = 0;
    for (int k = 0; k <= 200000; ++k) {
        const double t = k / 200000.0;
        gh = std::max(gh, spectral_norm(f(t)));
        gh1 = std::max(gh1, spectral_norm(df(t)));
    }
    EXPECT_GE(nr.h, gh - 1e-12);
    EXPECT_GE(nr.h1, gh1 - 1e-12);
}

TEST(HamModel, NormsAddOverTerms) {
    SiteGraph g = SiteGraph::isolated(2);
    TimeDepHamiltonian H(g, {TermSchedule::constant(Support::vertex(0), pauli::x()),
                             TermSchedule::constant(Support::vertex(1), pauli::z())}, 1.0);
    EXPECT_NEAR(compute_norms(H).h, 2.0, 1e-14);
}

TEST(HamModel, PiecewiseH1NeedsSmoothing) {
    TimeDepHamiltonian H(SiteGraph::isolated(1),
                         {TermSchedule::piecewise(Support::vertex(0), {0.0, 0.5}, {pauli::x(), pauli::z()})}, 1.0);
    EXPECT_THROW(compute_norms(H), Error);
    NormOptions o;
    o.accept_nonsmooth = true;
    const auto nr = compute_norms(H, o);
    EXPECT_TRUE(nr.nonsmooth[0]);
    EXPECT_EQ(nr.h1, 0.0);
    EXPECT_NEAR(nr.h, 1.0, 1e-14);
}

TEST(HamModelProperty, Periodicity) {
    std::mt19937_64 gen(11);
    const auto H = random_periodic_hamiltonian(2, 1.3, gen);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int i = 0; i < 100; ++i) {
        const double t = u(gen);
        for (const auto& term : H.terms())
            EXPECT_LE((H.eval_term(term.support, t) - H.eval_term(term.support, t + 1.3)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(HamModelProperty, GridRefinementIsMonotone) {
    std::mt19937_64 gen(12);
    const auto H = random_periodic_hamiltonian(2, 1.0, gen);
    for (int k : {50, 200, 1000}) {
        NormOptions a, b;
        a.grid_points = k;
        b.grid_points = 2 * k;
        EXPECT_GE(compute_norms(H, b).h, compute_norms(H, a).h - 1e-9);
    }
}

TEST(HamModelProperty, EdgeWeightCap) {
    std::mt19937_64 gen(13);
    const auto H = random_periodic_hamiltonian(3, 1.0, gen);
    std::uniform_real_distribution<double> u(0, 1);
    for (size_t e = 0; e < H.graph().edges.size(); ++e)
        for (int i = 0; i < 100; ++i)
            EXPECT_LE(herm_norm(H.eval_term(Support::edge(static_cast<int>(e)), u(gen))), H.graph().weight[e] + 1e-12);
}

TEST(HamModel, DataOperatorOrdering) {
    // Site 0 is the least significant bit: X on site 0 flips index 0 <-> 1.
    SiteGraph g = SiteGraph::isolated(2);
    TimeDepHamiltonian H(g, {TermSchedule::constant(Support::vertex(0), pauli::x())}, 1.0);
    const Mat D = H.dense_operator(0.0);
    EXPECT_NEAR(std::abs(D(1, 0)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(D(2, 0)), 0.0, 1e-15);
}
