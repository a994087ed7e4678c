#include <gtest/gtest.h>

#include "spinwitness/simple_wit.hpp"
#include "test_util.hpp"

using namespace spinwitness;

TEST(WitnessMatrix, ReferenceOverlaps) {
    const Frame f = Frame::xyz();
    const DensityMatrix g3 = to_density(ghz(3));
    const DensityMatrix w3 = to_density(w_state(3));
    EXPECT_NEAR((witness_matrix(SimpleWitnessKind::GHZ, false, f) * g3.matrix).trace().real(),
                -0.25, 1e-12);
    EXPECT_NEAR((witness_matrix(SimpleWitnessKind::W1, false, f) * w3.matrix).trace().real(),
                -1.0 / 3.0, 1e-12);
    EXPECT_NEAR((witness_matrix(SimpleWitnessKind::W1, true, f) * w3.matrix).trace().real(),
                -5.0 / 9.0, 1e-12);
    EXPECT_NEAR((witness_matrix(SimpleWitnessKind::W2, false, f) * g3.matrix).trace().real(), -0.5,
                1e-12);
}

TEST(WitnessMatrix, FrameCovariance) {
    SplitMix64 g(3);
    const Frame f = swtest::random_frame(g);
    const ComplexMatrix u = su2_from_frame(f);
    const ComplexMatrix u3 = kron(kron(u, u), u);
    // the rotated witness annihilates as much of the rotated state
    const std::vector<cplx> rotated_w3 = u3 * w_state(3).amplitudes;
    const ComplexMatrix w = witness_matrix(SimpleWitnessKind::W1, false, f);
    const DensityMatrix rho{3, outer(rotated_w3, rotated_w3)};
    EXPECT_NEAR((w * rho.matrix).trace().real(), -1.0 / 3.0, 1e-12);
}

TEST(WitnessSumOracle, TraceArithmetic) {
    for (int n : {4, 6}) {
        const double expect = binomial(n, 3) * 13.0 / 24.0;
        const double got = witness_sum_oracle(
            maximally_mixed(n), witness_matrix(SimpleWitnessKind::W1, false, Frame::xyz()));
        EXPECT_NEAR(got, expect, 1e-10);
    }
    // |W4> is still detected by the unprojected W1 witness
    EXPECT_LT(witness_sum_oracle(to_density(w_state(4)),
                                 witness_matrix(SimpleWitnessKind::W1, false, Frame::xyz())),
              0.0);
}

TEST(WitnessSumOracle, DetectionBoundaries) {
    for (int n = 3; n <= 8; ++n) {
        const DensityMatrix wn = to_density(w_state(n));
        const double plain = witness_sum_oracle(
            wn, witness_matrix(SimpleWitnessKind::W1, false, Frame::xyz()));
        const double projected = witness_sum_oracle(
            wn, witness_matrix(SimpleWitnessKind::W1, true, Frame::xyz()));
        EXPECT_EQ(plain < 0.0, n <= 4) << "n=" << n;
        EXPECT_EQ(projected < 0.0, n <= 6) << "n=" << n;
        // closed forms: (2N-9)/(3N) and (4N-27)/(9N) per triple
        EXPECT_NEAR(plain, binomial(n, 3) * (2.0 * n - 9.0) / (3.0 * n), 1e-10);
        EXPECT_NEAR(projected, binomial(n, 3) * (4.0 * n - 27.0) / (9.0 * n), 1e-10);
    }
}

TEST(CriterionSimple, WStateDetections) {
    const Frame f = Frame::xyz();
    EXPECT_TRUE(criterion_simple(moments(w_state(3)), SimpleCriterion::SS2, f).violated);
    EXPECT_FALSE(criterion_simple(moments(w_state(5)), SimpleCriterion::SS2, f).violated);
    EXPECT_TRUE(criterion_simple(moments(w_state(5)), SimpleCriterion::SS2P, f).violated);
    // product states trigger nothing
    const SpinMoments ground = moments(dicke(6, 0));
    for (SimpleCriterion c : {SimpleCriterion::SS1, SimpleCriterion::SS2, SimpleCriterion::SS3,
                              SimpleCriterion::SS1P, SimpleCriterion::SS2P, SimpleCriterion::SS3P})
        EXPECT_FALSE(criterion_simple(ground, c, f).violated);
}

TEST(CriterionSimple, GhzDetection) {
    const SpinMoments mom = moments(ghz(3));
    EXPECT_TRUE(criterion_simple(mom, SimpleCriterion::SS1, Frame::xyz()).violated);
    EXPECT_TRUE(criterion_simple(mom, SimpleCriterion::SS3, Frame::xyz()).violated);
}

TEST(CriterionSimple, EqualsWitnessSumOnSymmetricStates) {
    SplitMix64 g(123);
    const SimpleCriterion all[] = {SimpleCriterion::SS1, SimpleCriterion::SS2,
                                   SimpleCriterion::SS3, SimpleCriterion::SS1P,
                                   SimpleCriterion::SS2P, SimpleCriterion::SS3P};
    for (int n = 3; n <= 6; ++n) {
        for (int trial = 0; trial < 6; ++trial) {
            const DensityMatrix rho = swtest::random_symmetric_state(n, g);
            const SpinMoments mom = moments(rho);
            const Frame f = swtest::random_frame(g);
            for (SimpleCriterion c : all) {
                const double poly = criterion_simple(mom, c, f).lhs;
                const double oracle = witness_sum_oracle(
                    rho, witness_matrix(simple_criterion_witness(c), simple_criterion_projected(c), f));
                EXPECT_NEAR(poly, oracle, 1e-9)
                    << simple_criterion_name(c) << " n=" << n << " trial=" << trial;
            }
        }
    }
}

TEST(ProjectedWitnesses, MatchUnprojectedOnSymmetricStates) {
    SplitMix64 g(5);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 3 + static_cast<int>(g.below(3));
        const DensityMatrix rho = swtest::random_symmetric_state(n, g);
        const Frame f = swtest::random_frame(g);
        for (SimpleWitnessKind kind : {SimpleWitnessKind::GHZ, SimpleWitnessKind::W2}) {
            const double plain = witness_sum_oracle(rho, witness_matrix(kind, false, f));
            const double projected = witness_sum_oracle(rho, witness_matrix(kind, true, f));
            EXPECT_NEAR(plain, projected, 1e-12);
        }
        // W1 differs by the constant shift (2/3 - 4/9) per triple
        const double w1 = witness_sum_oracle(rho, witness_matrix(SimpleWitnessKind::W1, false, f));
        const double w1p = witness_sum_oracle(rho, witness_matrix(SimpleWitnessKind::W1, true, f));
        EXPECT_NEAR(w1 - w1p, binomial(n, 3) * (2.0 / 3.0 - 4.0 / 9.0), 1e-11);
    }
}
