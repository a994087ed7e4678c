#include <gtest/gtest.h>

#include "spinwitness/pairwise.hpp"
#include "spinwitness/states.hpp"
#include "test_util.hpp"

using namespace spinwitness;

TEST(ExtractPairWitness, W7ReductionGivesXyzFrame) {
    const DensityMatrix red = partial_trace(to_density(w_state(7)), {1, 2});
    const PairWitness w = extract_pair_witness(red);
    ASSERT_EQ(w.status, PairWitnessStatus::Found);
    EXPECT_NEAR(w.lambda_min, (5.0 - std::sqrt(29.0)) / 14.0, 1e-12);
    // eigenvector already Schmidt-diagonal: no rotation needed
    EXPECT_NEAR(w.frame.k[0], 1.0, 1e-10);
    EXPECT_NEAR(w.frame.l[1], 1.0, 1e-10);
    EXPECT_NEAR(w.frame.n[2], 1.0, 1e-10);
    // phi encodes the Schmidt parameter t of the closed form
    const DickePairData d = dicke_pair_data(7, 1);
    EXPECT_NEAR(std::tan(w.phi / 2.0), -1.0 / d.t.value(), 1e-10);
}

TEST(ExtractPairWitness, PptStateHasNoWitness) {
    const PairWitness w = extract_pair_witness(maximally_mixed(2));
    EXPECT_EQ(w.status, PairWitnessStatus::NoWitness);
}

TEST(ExtractPairWitness, NonSymmetricReducibleInputRejected) {
    // (|01> + i|10>)/sqrt(2): the negative-eigenvalue eigenvector of rho^T1
    // has no Hermitian coefficient form
    const double r = 1.0 / std::sqrt(2.0);
    PureState psi{2, {0.0, r, cplx(0.0, r), 0.0}};
    EXPECT_THROW(extract_pair_witness(to_density(psi)), std::runtime_error);
}

namespace {

// |psi(phi, U)> = U* (x) U (sin(phi/2)|00> + cos(phi/2)|11>), the vector the
// returned parameters encode; its projector must match the true eigenvector's.
void expect_witness_reconstructs(const PairWitness& w, const ComplexMatrix& pt) {
    const ComplexMatrix u = su2_from_frame(w.frame);
    std::vector<cplx> psi0{std::sin(w.phi / 2.0), 0.0, 0.0, std::cos(w.phi / 2.0)};
    const std::vector<cplx> psi = kron(u.conjugate(), u) * psi0;
    // eigenvector property: pt |psi> = lambda_min |psi>
    const std::vector<cplx> image = pt * psi;
    for (int i = 0; i < 4; ++i)
        EXPECT_NEAR(std::abs(image[i] - w.lambda_min * psi[i]), 0.0, 1e-9);
}

}  // namespace

TEST(ExtractPairWitness, BalancedDickeGivesTOne) {
    const DensityMatrix red = partial_trace(to_density(dicke(4, 2)), {1, 2});
    const PairWitness w = extract_pair_witness(red);
    ASSERT_EQ(w.status, PairWitnessStatus::Found);
    const DickePairData d = dicke_pair_data(4, 2);
    EXPECT_NEAR(d.t.value(), 1.0, 1e-13);
    // psi = (|00> - |11>)/sqrt(2): tan(phi/2) = -1
    EXPECT_NEAR(std::tan(w.phi / 2.0), -1.0, 1e-10);
    expect_witness_reconstructs(w, partial_transpose(red.matrix, {1}, 2));
}

TEST(ExtractPairWitness, ParametersReconstructEigenvector) {
    SplitMix64 g(606);
    int found = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 3 + static_cast<int>(g.below(3));
        const DensityMatrix rho = swtest::random_symmetric_state(n, g, 1 + (trial % 2));
        const DensityMatrix red = partial_trace(rho, {1, 2});
        const PairWitness w = extract_pair_witness(red);
        if (w.status != PairWitnessStatus::Found) continue;
        ++found;
        EXPECT_TRUE(w.frame.valid(1e-8));
        EXPECT_LE(std::abs(w.phi), 3.14159265358979323846 + 1e-12);
        expect_witness_reconstructs(w, partial_transpose(red.matrix, {1}, 2));
    }
    EXPECT_GT(found, 10);
}

TEST(ExtractPairWitness, RotatedReductionRecoversFrame) {
    // rotate a symmetric state by U^{x2}; the witness frame must follow
    SplitMix64 g(77);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix u = swtest::random_su2(g);
        const ComplexMatrix u2 = kron(u, u);
        DensityMatrix red = partial_trace(to_density(w_state(5)), {1, 2});
        DensityMatrix rot{2, u2 * red.matrix * u2.adjoint()};
        const PairWitness w = extract_pair_witness(rot);
        ASSERT_EQ(w.status, PairWitnessStatus::Found);
        // criterion evaluated on the rotated state at the extracted frame must
        // equal the unrotated criterion at xyz
        const CriterionReport base = criterion2(moments(to_density(w_state(5))), Frame::xyz());
        // embed the rotated pair state into a 5-qubit rotated full state
        ComplexMatrix u5 = kron(kron(u2, u), kron(u, u));
        const PureState w5 = w_state(5);
        DensityMatrix rot5{5, u5 * to_density(w5).matrix * u5.adjoint()};
        const CriterionReport rep = criterion2(moments(rot5), w.frame);
        EXPECT_NEAR(rep.lhs, base.lhs, 1e-9);
        EXPECT_NEAR(rep.rhs, base.rhs, 1e-9);
    }
}

TEST(Criterion2, PublishedWStateValues) {
    const CriterionReport w7 = criterion2(moments(w_state(7)), Frame::xyz());
    EXPECT_NEAR(w7.lhs, 15.0, 1e-10);
    EXPECT_NEAR(w7.rhs, std::sqrt(261.0), 1e-10);  // 16.155...
    EXPECT_TRUE(w7.violated);

    const CriterionReport w8 = criterion2(moments(w_state(8)), Frame::xyz());
    EXPECT_NEAR(w8.lhs, 21.0, 1e-10);
    EXPECT_NEAR(w8.rhs, 7.0 * std::sqrt(10.0), 1e-10);  // 22.136...
    EXPECT_TRUE(w8.violated);
}

TEST(Criterion2, ProductStateOnBoundary) {
    for (int n : {3, 5, 7}) {
        const CriterionReport rep = criterion2(moments(dicke(n, 0)), Frame::xyz());
        EXPECT_NEAR(rep.lhs, n * (n - 1.0) / 2.0, 1e-10);
        EXPECT_NEAR(rep.rhs, n * (n - 1.0) / 2.0, 1e-10);
        EXPECT_FALSE(rep.violated);
    }
}

TEST(Criterion2Symmetric, Examples) {
    const CriterionReport ground = criterion2_symmetric(moments(dicke(4, 0)), {0.0, 0.0, 1.0});
    EXPECT_NEAR(ground.lhs, 0.0, 1e-12);
    EXPECT_NEAR(ground.rhs, 0.0, 1e-12);
    EXPECT_FALSE(ground.violated);

    // |W7>: J_z eigenstate, variance 0; squeezing direction parallel to the
    // mean spin
    const CriterionReport w7 = criterion2_symmetric(moments(w_state(7)), {0.0, 0.0, 1.0});
    EXPECT_NEAR(w7.lhs, 0.0, 1e-11);
    EXPECT_NEAR(w7.rhs, 24.0 / 49.0, 1e-12);
    EXPECT_TRUE(w7.violated);
}

TEST(Criterion2Symmetric, CrossingMatchesGeneralForm) {
    // p |W7><W7| + (1-p) P/8: the two criteria and the pair-reduction NPT
    // status change sign at the same p
    const ComplexMatrix p7 = symmetric_projector(7);
    const DensityMatrix w7 = to_density(w_state(7));
    auto margins = [&](double p) {
        ComplexMatrix m = w7.matrix;
        m *= cplx(p, 0.0);
        ComplexMatrix noise = p7;
        noise *= cplx((1.0 - p) / 8.0, 0.0);
        m += noise;
        const DensityMatrix rho{7, m};
        const SpinMoments mom = moments(rho);
        return std::array<double, 3>{
            criterion2(mom, Frame::xyz()).margin,
            criterion2_symmetric(mom, {0.0, 0.0, 1.0}).margin,
            -min_eigenvalue(partial_transpose(partial_trace(rho, {1, 2}).matrix, {1}, 2))};
    };
    auto bisect = [&](int idx) {
        double lo = 0.0, hi = 1.0;
        double flo = margins(lo)[idx];
        for (int it = 0; it < 50; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = margins(mid)[idx];
            if ((fm > 0.0) == (flo > 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    };
    const double p19 = bisect(0), p21 = bisect(1), pnpt = bisect(2);
    EXPECT_NEAR(p19, p21, 1e-9);
    EXPECT_NEAR(p19, pnpt, 1e-9);
}

TEST(DickePairData, PublishedAndDerivedValues) {
    const DickePairData w7 = dicke_pair_data(7, 1);
    EXPECT_EQ(w7.c0, 5);
    EXPECT_EQ(w7.c1, 0);
    EXPECT_EQ(w7.cplus, 1);
    EXPECT_NEAR(w7.lhs, 15.0, 1e-12);
    EXPECT_NEAR(w7.rhs, 16.155, 5e-4);
    EXPECT_TRUE(w7.npt);

    const DickePairData w8 = dicke_pair_data(8, 1);
    EXPECT_NEAR(w8.lhs, 21.0, 1e-12);
    EXPECT_NEAR(w8.rhs, 22.136, 5e-4);

    const DickePairData d42 = dicke_pair_data(4, 2);
    EXPECT_EQ(d42.c0, 1);
    EXPECT_EQ(d42.c1, 1);
    EXPECT_EQ(d42.cplus, 2);
    EXPECT_NEAR(d42.lambda_minus, -1.0 / 6.0, 1e-13);

    // degenerate parameters: k = 0 has no witness
    const DickePairData d50 = dicke_pair_data(5, 0);
    EXPECT_FALSE(d50.t.has_value());
    EXPECT_FALSE(d50.npt);
}

TEST(DickePairData, ClosedFormsMatchBruteForce) {
    for (int n = 2; n <= 8; ++n) {
        for (int k = 0; k <= n / 2; ++k) {
            const DickePairData d = dicke_pair_data(n, k);
            const DensityMatrix red = partial_trace(to_density(dicke(n, k)), {1, 2});
            const double lam = min_eigenvalue(partial_transpose(red.matrix, {1}, 2));
            EXPECT_NEAR(lam, std::min(d.lambda_minus, 0.0), 1e-10) << "n=" << n << " k=" << k;
            if (n >= 3) {
                const CriterionReport rep = criterion2(moments(dicke(n, k)), Frame::xyz());
                EXPECT_NEAR(rep.lhs, d.lhs, 1e-10);
                EXPECT_NEAR(rep.rhs, d.rhs, 1e-10);
            }
        }
    }
}

TEST(Criterion2, IffEquivalenceOnSymmetricStates) {
    SplitMix64 g(2024);
    int npt_checked = 0, ppt_checked = 0, boundary = 0;
    for (int n = 3; n <= 6; ++n) {
        for (int trial = 0; trial < 12; ++trial) {
            // pure symmetric states are NPT-rich, multi-term mixtures PPT-rich
            const DensityMatrix rho = swtest::random_symmetric_state(n, g, 1 + (trial % 3));
            const DensityMatrix red = partial_trace(rho, {1, 2});
            const double lam = min_eigenvalue(partial_transpose(red.matrix, {1}, 2));
            const SpinMoments mom = moments(rho);
            if (lam < -1e-10) {
                const PairWitness w = extract_pair_witness(red);
                ASSERT_EQ(w.status, PairWitnessStatus::Found);
                const double margin = criterion2(mom, w.frame).margin;
                if (std::abs(margin) <= 1e-9) {
                    ++boundary;
                    continue;
                }
                EXPECT_GT(margin, 0.0) << "NPT state not detected, n=" << n;
                ++npt_checked;
            } else if (lam > 1e-10) {
                const double margin = best_frame_grid(mom, 32).report.margin;
                if (std::abs(margin) <= 1e-9) {
                    ++boundary;
                    continue;
                }
                EXPECT_LT(margin, 0.0) << "PPT state detected, n=" << n;
                ++ppt_checked;
            } else {
                ++boundary;
            }
        }
    }
    EXPECT_GT(npt_checked, 10);
    EXPECT_GT(ppt_checked, 10);
}

TEST(Criterion2, SufficiencyOnArbitraryStates) {
    // whenever the criterion fires at any sampled frame, some pair reduction
    // must be NPT
    SplitMix64 g(404);
    int fired = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + static_cast<int>(g.below(2));
        DensityMatrix rho;
        if (trial % 3 == 0) {
            rho = swtest::random_density(n, g);
        } else if (trial % 3 == 1) {
            rho = to_density(swtest::random_pure(n, g));
        } else {
            // lightly perturbed symmetric pure state: entangled, non-symmetric
            rho = to_density(swtest::random_symmetric_pure(n, g));
            const DensityMatrix noise = swtest::random_density(n, g);
            rho.matrix *= cplx(0.93, 0.0);
            rho.matrix += noise.matrix * cplx(0.07, 0.0);
        }
        const SpinMoments mom = moments(rho);
        const FrameSearchResult search = best_frame_grid(mom, 16);
        if (search.report.margin > 1e-9) {
            ++fired;
            double best_lam = 1.0;
            for (int a = 1; a <= n - 1; ++a)
                for (int b = a + 1; b <= n; ++b) {
                    const DensityMatrix red = partial_trace(rho, {a, b});
                    best_lam = std::min(
                        best_lam, min_eigenvalue(partial_transpose(red.matrix, {1}, 2)));
                }
            EXPECT_LT(best_lam, 1e-12) << "criterion fired on a state with all-PPT pairs";
        }
    }
    EXPECT_GT(fired, 20);  // pure random states are generically detected
}

TEST(Criterion2Symmetric, SqueezingImpliesDetection) {
    // xi^2 < 1 with <J_n> = 0 implies the symmetric criterion fires
    const DensityMatrix balanced = to_density(dicke(4, 2));
    EXPECT_LT(xi_squared(balanced, {0.0, 0.0, 1.0}), 1.0);
    const SpinMoments mom = moments(balanced);
    EXPECT_NEAR(std::abs(mom.m1[3]), 0.0, 1e-12);
    EXPECT_TRUE(criterion2_symmetric(mom, {0.0, 0.0, 1.0}).violated);

    SplitMix64 g(55);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 4 + static_cast<int>(g.below(3));
        const DensityMatrix rho = swtest::random_symmetric_state(n, g);
        const SpinMoments mom2 = moments(rho);
        for (const Vec3& dir : {Vec3{0, 0, 1}, Vec3{1, 0, 0}, Vec3{0, 1, 0}}) {
            cplx jn(0.0, 0.0);
            for (int i = 1; i <= 3; ++i) jn += dir[i - 1] * mom2.m1[i];
            if (std::abs(jn) < 1e-9 && xi_squared(rho, dir) < 1.0 - 1e-9)
                EXPECT_TRUE(criterion2_symmetric(mom2, dir).violated);
        }
    }
}

TEST(FrameGrid, FindsAtLeastTheCanonicalFrame) {
    const SpinMoments mom = moments(w_state(7));
    const FrameSearchResult search = best_frame_grid(mom, 32);
    const double xyz_margin = criterion2(mom, Frame::xyz()).margin;
    EXPECT_GE(search.report.margin, xyz_margin - 1e-9);
    EXPECT_TRUE(search.report.violated);
}
