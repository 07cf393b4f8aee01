#include "helpers.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace staticize;

TEST(Bounds, ConstantsLimit) {
    const auto c = constants(1e-9, 1e-4, 1.0);
    EXPECT_NEAR(c.A, 1.0, 1e-4);
    EXPECT_NEAR(c.B, 1.0, 1e-4);
    EXPECT_NEAR(c.D, 1.0, 1e-4);
}

TEST(Bounds, ConstantsOutOfDomain) {
    try {
        constants(1.0, 1.0, 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), errc::out_of_domain);
    }
}

TEST(Bounds, TimeIndependentHasNoTrotterTerm) {
    EXPECT_EQ(theorem_bound(1.0, 0.0, ClockParams::make(8, 16, 1.0, 1.0 / 32), 1).trotter_term, 0.0);
}

TEST(Bounds, FourTermsByHand) {
    // N=1, T=1, h=h1=1, N_p=8, N_q=16 (N_c=128, delta=1/128), sigma=tau/4=1/32.
    const auto b = theorem_bound(1.0, 1.0, ClockParams::make(8, 16, 1.0, 1.0 / 32), 1);
    const double A = std::sqrt(1.75), B = std::sqrt(0.75), D = 1.0 + 0.25 / std::sqrt(8.0) + 0.0625;
    EXPECT_NEAR(b.trotter_term, 0.125, 1e-12);
    EXPECT_NEAR(b.controlled_term, 2.0 * 0.5 * std::exp(-4.0) / B, 1e-12);
    EXPECT_NEAR(b.translation_term, 32.0 * A * D / B, 1e-12);
    const double a = 1.0 - 6.0 / 128;
    EXPECT_NEAR(b.wraparound_term, 128.0 * std::exp(-a * a * 256.0) / B, 1e-12);
    EXPECT_NEAR(b.total, b.trotter_term + b.controlled_term + b.translation_term + b.wraparound_term, 1e-15);
}

TEST(Bounds, PlannerSpotValue) {
    const auto r = plan_parameters(1.0, 1.0, 1.0, 1, 0.1);
    EXPECT_EQ(r.params.N_p, 80);
    EXPECT_EQ(plan_parameters(1.0, 0.0, 1.0, 1, 0.1).params.N_p, 3);
}

TEST(Bounds, PlannerHonorsParity) {
    for (double eps : {0.3, 0.11, 0.07}) {
        const auto r = plan_parameters(0.7, 0.37, 1.3, 3, eps);
        EXPECT_EQ(r.params.N_c % 2, 0);
    }
}

TEST(Bounds, PlannedClockBeyond32Bits) {
    const auto r = plan_parameters(2.97, 2.84, 1.98, 31, 0.24);
    EXPECT_GT(r.params.N_c, 1L << 31);
    EXPECT_EQ(r.params.N_c, r.params.N_p * r.params.N_q);
    const auto b = theorem_bound(2.97, 2.84, r.params, 31);
    EXPECT_GT(b.translation_term, 0.0);
    EXPECT_LE(b.total, 0.24);
}

TEST(BoundsProperty, PlannerSoundness) {
    auto gen = named_stream(1, "test/planner");
    std::uniform_real_distribution<double> u(0, 1);
    std::uniform_int_distribution<int> n(1, 64);
    for (int i = 0; i < 200; ++i) {
        const double h = 0.1 + 3 * u(gen), h1 = 5 * u(gen), T = 0.2 + 4 * u(gen), eps = 0.01 + 0.3 * u(gen);
        const int N = n(gen);
        const auto r = plan_parameters(h, h1, T, N, eps);
        const auto b = theorem_bound(h, h1, r.params, N);
        EXPECT_LE(b.total, eps);
        for (int k = 0; k < 4; ++k) EXPECT_LE(b.term(k), eps / 4) << "term " << k;
        EXPECT_LE(trotter_term_conservative(h1, T, r.params.N_p), eps / 4);
    }
}

TEST(Bounds, MollifiedBoundEdgeCases) {
    const auto p = ClockParams::make(8, 16, 1.0, 1.0 / 32);
    EXPECT_EQ(mollified_bound(0.0, 1, p, 0.25).total, mollified_bound(0.0, 1, p, 0.25).translation_term +
                                                           mollified_bound(0.0, 1, p, 0.25).wraparound_term);
    EXPECT_NEAR(*mollified_bound(1.0, 1, p, 0.01).smoothing_term, 0.015, 1e-15);
    EXPECT_THROW(mollified_bound(1.0, 1, p, 0.3), Error);
}

TEST(Bounds, AncillaCounts) {
    EXPECT_EQ(ancilla_report(64, "generic").qubits_per_site, 6);
    EXPECT_EQ(ancilla_report(100, "generic").qubits_per_site, 7);
    EXPECT_EQ(ancilla_report(2, "generic").qubits_per_site, 1);
}

TEST(Bounds, AncillaScalingStrings) {
    ScalingInputs in;
    in.alpha = 2.0;
    const auto r = ancilla_report(64, "disordered", in);
    EXPECT_EQ(*r.z_c, 1.0);
    EXPECT_NE(r.scaling.find("N^{0.5+6.6z_c}"), std::string::npos);
    EXPECT_NE(r.scaling.find("N^{7.1}"), std::string::npos);
    EXPECT_NE(r.scaling_bump.find("N^{0.5+4.4z_c}"), std::string::npos);
    in.alpha = 0.5;
    EXPECT_EQ(*ancilla_report(64, "disordered", in).z_c, 2.0);
    EXPECT_EQ(ancilla_report(64, "longrange").scaling, "N_c = O(N^{13/2} T^6/eps^5 log(N^{3/2} T/eps))");
    EXPECT_EQ(ancilla_report(64, "strong-longrange").scaling_bump, "N_c = O(N^{5/2} log^4 N log[N log^2 N])");
    EXPECT_THROW(ancilla_report(64, "nonsense"), Error);
}

TEST(Bounds, LemmaRhsBasics) {
    LemmaInputs in;
    in.t = 0.0;
    in.comm_norm = 5.0;
    EXPECT_EQ(lemma_rhs("S8", in), 0.0);
    try {
        lemma_rhs("S99", in);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), errc::unknown_lemma);
    }
}

TEST(BoundsProperty, TrotterSuites) {
    for (const char* id : {"S4", "S8", "S9", "S12"})
        for (const auto& r : run_lemma_check(id, 2)) EXPECT_TRUE(r.holds()) << id << " " << r.label;
}

TEST(Bounds, GuardedCeil) {
    EXPECT_EQ(guarded_ceil(80.0 * (1 + 1e-15)), 80);
    EXPECT_EQ(guarded_ceil(80.01), 81);
}
