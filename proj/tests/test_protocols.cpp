#include "helpers.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace staticize;

namespace {

// Hierarchy sizes straight from the printed m_j cases, computed without the library.
std::vector<long> oracle_m(int d, double a, int q) {
    std::vector<long> m(q + 1, 0);
    long r = 1;
    for (int j = 1; j <= q; ++j) {
        double v;
        if (a < 2 * d)
            v = j == 1 ? 3 : std::ceil(std::pow(double(r), 2.0 * d / a - 1) - 1e-9);
        else if (a == 2 * d)
            v = j == 1 ? std::ceil(std::exp(8.0 / d)) : std::ceil(std::exp(3 * std::sqrt(std::log(double(r))) / (2 * std::sqrt(double(d)))));
        else
            v = std::ceil(std::pow(3.0, 1.0 / (a - 2 * d))) + 1;
        m[j] = static_cast<long>(v);
        r *= m[j];
    }
    return m;
}

Mat dense_step(const ProtocolSchedule& s, size_t i) { return Mat(s.step_operator(i)); }

} // namespace

TEST(Protocols, SuperRegimeHierarchy) {
    const auto c = build_longrange_hierarchy(1, 2.5, 1);
    EXPECT_EQ(c.regime, LongRangeRegime::Super);
    EXPECT_EQ(c.m[1], 10);
    EXPECT_EQ(c.N, 10);
    EXPECT_NEAR(longrange_t2(c, 0), pi * std::pow(10.0, 2.5), 1e-9);
}

TEST(Protocols, HierarchyTable) {
    const std::pair<int, double> table[] = {{1, 1.5}, {1, 1.2}, {2, 3.0}, {1, 2.0}, {2, 4.0}, {3, 6.0}, {1, 2.5}, {2, 4.5}, {1, 3.0}};
    for (auto [d, a] : table) {
        const int q = a < 2 * d ? 3 : 2;
        const auto c = build_longrange_hierarchy(d, a, q);
        const auto m = oracle_m(d, a, q);
        long r = 1;
        for (int j = 1; j <= q; ++j) {
            EXPECT_EQ(c.m[j], m[j]) << "d=" << d << " alpha=" << a << " j=" << j;
            r *= m[j];
            EXPECT_EQ(c.r[j], r);
        }
    }
}

TEST(Protocols, GateExactness) {
    // |-><-| for time pi is the Hadamard up to a global phase.
    const Mat H = expm_herm(gates::hadamard_minus_projector(), pi);
    EXPECT_NEAR(std::abs((H.adjoint() * gates::hadamard()).trace()), 2.0, 1e-10);
    // (1/4)(XX+YY+ZZ) for time pi is SWAP up to phase.
    const Mat S = expm_herm(gates::swap_generator(), pi);
    Mat swap = Mat::Zero(4, 4);
    swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1.0;
    EXPECT_NEAR(std::abs((S.adjoint() * swap).trace()), 4.0, 1e-10);
    // n(x)n for time pi is CZ.
    const Mat cz = expm_herm(pair_op(pauli::n1(), pauli::n1()), pi);
    EXPECT_NEAR(cz(3, 3).real(), -1.0, 1e-12);
    EXPECT_NEAR(cz(0, 0).real(), 1.0, 1e-12);
}

TEST(Protocols, GhzPreparationSuper) {
    const auto c = build_longrange_hierarchy(1, 2.5, 1);
    const auto s = longrange_schedule(c);
    auto gen = named_stream(3, "test/ghz");
    std::normal_distribution<double> n(0, 1);
    for (int i = 0; i < 2; ++i) {
        cplx a(n(gen), n(gen)), b(n(gen), n(gen));
        const double z = std::sqrt(std::norm(a) + std::norm(b));
        a /= z;
        b /= z;
        const Vec out = s.apply(seed_state(10, 0, a, b), KrylovOptions{1e-13});
        EXPECT_LE(1 - fidelity(out, ghz_state(10, a, b)), 1e-6);
    }
}

TEST(Protocols, GhzPreparationSubTwoLevels) {
    const auto c = build_longrange_hierarchy(1, 1.5, 2);
    ASSERT_EQ(c.N, 6);
    const cplx a(0.6, 0), b(0, 0.8);
    const Vec out = longrange_schedule(c).apply(seed_state(6, 0, a, b), KrylovOptions{1e-13});
    EXPECT_LE(1 - fidelity(out, ghz_state(6, a, b)), 1e-8);
}

TEST(Protocols, TransferReachesFarCorner) {
    const auto c = build_longrange_hierarchy(1, 1.5, 2);
    const cplx a(0.28, 0.96), b(0, 0);
    const cplx a2(0.8, 0), b2(0, 0.6);
    const auto s = longrange_transfer_schedule(c);
    for (auto [x, y] : {std::pair{a, b}, std::pair{a2, b2}}) {
        const Vec out = s.apply(seed_state(6, 0, x, y), KrylovOptions{1e-13});
        EXPECT_LE(1 - fidelity(out, seed_state(6, 5, x, y)), 1e-8);
    }
}

TEST(ProtocolsProperty, InverseUndoesCore) {
    const auto c = build_longrange_hierarchy(1, 1.5, 2);
    auto s = longrange_core(c);
    const auto inv = s.inverse();
    s.steps.insert(s.steps.end(), inv.steps.begin(), inv.steps.end());
    const Mat U = s.unitary();
    EXPECT_LE((U - Mat::Identity(U.rows(), U.cols())).norm(), 1e-8);
}

TEST(ProtocolsProperty, WeightCaps) {
    for (auto [d, a, q] : {std::tuple{1, 2.5, 1}, std::tuple{1, 1.5, 2}, std::tuple{2, 4.5, 1}}) {
        const auto c = build_longrange_hierarchy(d, a, q);
        if (c.N > 16) continue;
        EXPECT_TRUE(cap_violations(longrange_transfer_schedule(c), a).empty()) << d << " " << a;
    }
    DisorderedChainConfig dc;
    dc.N = 6;
    dc.J = {0.3, 1.0, 0.7, 0.05, 0.9};
    const auto ds = disordered_chain_schedule(dc);
    for (const auto& st : ds.steps)
        for (const auto& [sup, m] : st.terms) EXPECT_LE(herm_norm(m), ds.graph.weight[sup.index] * (1 + 1e-12));
}

TEST(ProtocolsProperty, DurationMatchesRecursion) {
    for (auto [d, a, q] : {std::tuple{1, 2.5, 1}, std::tuple{1, 1.5, 2}, std::tuple{1, 1.5, 3}, std::tuple{2, 4.5, 1}}) {
        const auto c = build_longrange_hierarchy(d, a, q);
        // Symbolic duration: T_{j+1} = 3 T_j + t2 + pi, independent of materialization.
        double t = 0;
        for (int j = 0; j < q; ++j) t = 3 * t + longrange_t2(c, j) + pi;
        EXPECT_NEAR(t, longrange_runtime(c).T[q], 1e-9 * t);
        if (c.N <= 16) {
            EXPECT_NEAR(longrange_core(c).total_time(), t, 1e-9 * t);
            EXPECT_NEAR(longrange_schedule(c).total_time(), t + pi, 1e-9 * t);
        }
    }
}

TEST(Protocols, StepNormsAgainstDense) {
    const auto c = build_longrange_hierarchy(1, 2.5, 1);
    const auto nr = longrange_norm_h(c);
    const auto s = longrange_core(c);
    // Steps: H2(0), H3(0); the projectors commute, so the dense spectrum is exact.
    Eigen::SelfAdjointEigenSolver<Mat> e2(dense_step(s, 0)), e3(dense_step(s, 1));
    EXPECT_NEAR(e2.eigenvalues().cwiseAbs().maxCoeff(), nr.h2[0], 1e-10);
    EXPECT_NEAR(e3.eigenvalues().cwiseAbs().maxCoeff(), nr.h3[0], 1e-10);
    EXPECT_NEAR(nr.h3_printed[0], 9.0, 1e-12);
}

TEST(Protocols, SymbolicAnalysesScale) {
    const auto c = build_longrange_hierarchy(1, 1.5, 6);
    EXPECT_GT(c.N, 500); // far past the materialization cap
    const auto nr = longrange_norm_h(c);
    EXPECT_GT(nr.h_formula / c.N, 0.5);
    EXPECT_LE(nr.h_formula / c.N, 1.0 + 1e-12);
    EXPECT_TRUE(longrange_runtime(c).envelope_holds);
    EXPECT_THROW(longrange_core(c), Error);
}

TEST(Protocols, DisorderedUniformChain) {
    DisorderedChainConfig dc;
    dc.N = 5;
    dc.J.assign(4, 1.0);
    const auto s = disordered_chain_schedule(dc);
    EXPECT_NEAR(s.total_time(), 4 * pi, 1e-12);
    const cplx a(0.6, 0), b(0, 0.8);
    EXPECT_NEAR(fidelity(s.apply(seed_state(5, 0, a, b), KrylovOptions{1e-13}), seed_state(5, 4, a, b)), 1.0, 1e-8);
}

TEST(Protocols, DisorderExponent) {
    DisorderedChainConfig dc;
    dc.alpha = 2.0;
    EXPECT_EQ(dc.z_c(), 1.0);
    dc.alpha = 0.5;
    EXPECT_EQ(dc.z_c(), 2.0);
}

TEST(Protocols, CouplingDistribution) {
    auto gen = named_stream(9, "test/couplings");
    const auto J = sample_couplings(20001, 2.0, gen);
    DisorderedChainConfig dc;
    dc.J = J;
    for (double x : {0.2, 0.5, 0.8}) EXPECT_NEAR(dc.empirical_cdf(x), x * x, 0.015);
    for (double j : J) EXPECT_TRUE(j > 0 && j <= 1);
}

TEST(Protocols, StrongLongRangeStructure) {
    const auto r = strong_longrange_schedule(8, 1, 0.5, {0.3, 0.2, 0.25, 0.4});
    ASSERT_EQ(r.schedule.steps.size(), 7u);
    EXPECT_EQ(r.schedule.steps.front().label, "squeeze");
    EXPECT_GT(r.h_printed_max, 0);
    EXPECT_FALSE(r.schedule.graph.alpha.has_value());
    const Vec out = r.schedule.apply(seed_state(8, 0, 1 / std::sqrt(2.0), 1 / std::sqrt(2.0)));
    EXPECT_NEAR(out.norm(), 1.0, 1e-10);
    EXPECT_THROW(strong_longrange_schedule(7, 2, 0.5, {}), Error);
}

TEST(Protocols, StaticizeTimeIndependentSchedule) {
    // A single constant step: the commutator vanishes, so only clock translation errs.
    ProtocolSchedule one;
    one.graph = SiteGraph::isolated(1);
    ProtocolStep st{{{Support::vertex(0), pauli::x()}}, 1.0, "x"};
    one.steps = {st};
    const auto H = one.as_piecewise();
    const auto p = ClockParams::with_ratio(4, 16, 1.0, 8);
    EXPECT_EQ(commutator_closed_form(H, p).nonZeros(), 0);
    Vec psi(2);
    psi << 1, 0;
    const auto sH = assemble_staticized(H, p);
    const Vec phi0 = product_clock_state({0}, p).state;
    const Vec got = evolve_static(sH.total, joint_state(psi, phi0), 1.0).state;
    const Vec data = expm_herm(pauli::x(), 1.0) * psi;
    const auto tr = translate_clocks(product_clock_state({0}, p), p.N_c, p);
    EXPECT_NEAR((got - joint_state(data, tr.evolved)).norm(), 0.0, 1e-9);
    EXPECT_NEAR((got - joint_state(data, phi0)).norm(), tr.error, 1e-9);
}
