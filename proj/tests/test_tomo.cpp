#include <gtest/gtest.h>

#include "spinwitness/tomo.hpp"
#include "spinwitness/states.hpp"
#include "spinwitness/triple.hpp"
#include "test_util.hpp"

using namespace spinwitness;

TEST(Settings, EnumerationIsLexicographic) {
    const auto s1 = tomo::settings(1);
    ASSERT_EQ(s1.size(), 3u);
    EXPECT_EQ(tomo::setting_label(s1[0]), "X");
    EXPECT_EQ(tomo::setting_label(s1[1]), "Y");
    EXPECT_EQ(tomo::setting_label(s1[2]), "Z");

    const auto s2 = tomo::settings(2);
    ASSERT_EQ(s2.size(), 9u);
    EXPECT_EQ(tomo::setting_label(s2[0]), "XX");
    EXPECT_EQ(tomo::setting_label(s2[1]), "XY");
    EXPECT_EQ(tomo::setting_label(s2[8]), "ZZ");

    EXPECT_EQ(tomo::settings(8).size(), 6561u);  // 100 shots each = 656100 runs
}

TEST(SimulateCounts, DeterministicOutcomes) {
    PureState zero{1, {1.0, 0.0}};
    const auto table = tomo::simulate_counts(to_density(zero), tomo::settings(1), 500, 7);
    EXPECT_EQ(table.counts[2][0], 500.0);  // Z: all |0>
    EXPECT_EQ(table.counts[2][1], 0.0);
    // X: unbiased within 5 sigma
    EXPECT_NEAR(table.counts[0][0], 250.0, 5.0 * std::sqrt(125.0));
    EXPECT_EQ(table.counts[0][0] + table.counts[0][1], 500.0);
}

TEST(SimulateCounts, BellCorrelations) {
    const double r = 1.0 / std::sqrt(2.0);
    PureState bell{2, {r, 0.0, 0.0, r}};
    const auto table = tomo::simulate_counts(to_density(bell), tomo::settings(2), 400, 3);
    const auto& zz = table.counts[8];
    EXPECT_EQ(zz[1], 0.0);
    EXPECT_EQ(zz[2], 0.0);
    EXPECT_EQ(zz[0] + zz[3], 400.0);
}

TEST(SimulateCounts, SeedDeterminismAndStreamIndependence) {
    const DensityMatrix rho = to_density(w_state(2));
    const auto a = tomo::simulate_counts(rho, tomo::settings(2), 100, 42);
    const auto b = tomo::simulate_counts(rho, tomo::settings(2), 100, 42);
    EXPECT_EQ(a.counts, b.counts);
    const auto c = tomo::simulate_counts(rho, tomo::settings(2), 100, 43);
    EXPECT_NE(a.counts, c.counts);
}

TEST(LinearInversion, RoundTripsExactProbabilities) {
    const DensityMatrix w3 = to_density(w_state(3));
    EXPECT_LT(max_abs_diff(tomo::linear_inversion(3, tomo::exact_probabilities(w3)), w3.matrix),
              1e-12);
    const DensityMatrix mm = maximally_mixed(3);
    EXPECT_LT(max_abs_diff(tomo::linear_inversion(3, tomo::exact_probabilities(mm)), mm.matrix),
              1e-12);
    const DensityMatrix ng = noisy(ghz(3), 0.5);
    EXPECT_LT(max_abs_diff(tomo::linear_inversion(3, tomo::exact_probabilities(ng)), ng.matrix),
              1e-12);
    SplitMix64 g(9);
    for (int n = 1; n <= 4; ++n) {
        const DensityMatrix rho = swtest::random_density(n, g);
        EXPECT_LT(max_abs_diff(tomo::linear_inversion(n, tomo::exact_probabilities(rho)),
                               rho.matrix),
                  1e-12);
    }
}

TEST(MleReconstruct, DeterministicZCountsRecoverGroundState) {
    PureState zero3{3, std::vector<cplx>(8, cplx(0.0, 0.0))};
    zero3.amplitudes[0] = 1.0;
    const DensityMatrix rho = to_density(zero3);
    const auto table = tomo::simulate_counts(rho, tomo::settings(3), 10000, 17);
    const DensityMatrix rec = tomo::mle_reconstruct(table);
    EXPECT_GE(fidelity(rec, zero3), 0.999);
}

TEST(MleReconstruct, NoiselessFixedPoint) {
    const DensityMatrix w3 = to_density(w_state(3));
    const auto table = tomo::expected_counts(w3, tomo::settings(3), 100.0);
    const DensityMatrix rec = tomo::mle_reconstruct(table);
    EXPECT_GE(fidelity(rec, w_state(3)), 0.9999);
}

TEST(MleReconstruct, MonotoneLikelihoodAndPhysicality) {
    SplitMix64 g(23);
    for (int trial = 0; trial < 3; ++trial) {
        const DensityMatrix rho = swtest::random_density(2, g);
        const auto table = tomo::simulate_counts(rho, tomo::settings(2), 50, 100 + trial);
        std::vector<double> trace;
        const DensityMatrix rec = tomo::mle_reconstruct(table, 5000, 1e-10, &trace);
        for (std::size_t i = 1; i < trace.size(); ++i)
            EXPECT_GE(trace[i], trace[i - 1] - 1e-9 * (1.0 + std::abs(trace[i - 1])));
        EXPECT_NEAR(rec.matrix.trace().real(), 1.0, 1e-9);
        EXPECT_TRUE(rec.matrix.is_hermitian(1e-9));
        EXPECT_GT(min_eigenvalue(rec.matrix), -1e-9);
    }
}

TEST(MleReconstruct, PhysicalOnAdversarialCounts) {
    // counts drawn uniformly, unrelated to any state
    SplitMix64 g(77);
    tomo::CountTable table;
    table.nqubits = 2;
    table.shots = 40;
    table.measurement_settings = tomo::settings(2);
    for (std::size_t s = 0; s < table.measurement_settings.size(); ++s) {
        std::vector<double> c(4, 0.0);
        for (int shot = 0; shot < 40; ++shot) c[g.below(4)] += 1.0;
        table.counts.push_back(c);
    }
    const DensityMatrix rec = tomo::mle_reconstruct(table);
    EXPECT_NEAR(rec.matrix.trace().real(), 1.0, 1e-9);
    EXPECT_GT(min_eigenvalue(rec.matrix), -1e-9);
}

TEST(MleReconstruct, PurityDropForSampledWState) {
    // near-pure inputs land on the state-space boundary: purity stays below 1
    // by a tiny but strictly positive margin at this system size
    const DensityMatrix w3 = to_density(w_state(3));
    double drop = 0.0;
    const int reps = 3;
    for (int rep = 0; rep < reps; ++rep) {
        const auto table = tomo::simulate_counts(w3, tomo::settings(3), 100, 900 + rep);
        const DensityMatrix rec = tomo::mle_reconstruct(table);
        drop += 1.0 - (rec.matrix * rec.matrix).trace().real();
    }
    drop /= reps;
    EXPECT_GT(drop, 0.0);
    EXPECT_LT(drop, 0.1);
}

TEST(MleReconstruct, RejectsEmptyOrIncompleteTables) {
    tomo::CountTable empty;
    empty.nqubits = 2;
    EXPECT_THROW(tomo::mle_reconstruct(empty), std::invalid_argument);

    tomo::CountTable partial;
    partial.nqubits = 2;
    partial.shots = 10;
    partial.measurement_settings = {tomo::settings(2)[0]};
    partial.counts = {{10.0, 0.0, 0.0, 0.0}};
    EXPECT_THROW(tomo::mle_reconstruct(partial), std::invalid_argument);
}

TEST(McError, TraceFunctionalIsExact) {
    const DensityMatrix w3 = to_density(w_state(3));
    const auto [mean, sd] =
        tomo::mc_error(w3, [](const DensityMatrix& r) { return r.matrix.trace().real(); }, 8, 100, 5);
    EXPECT_NEAR(mean, 1.0, 1e-9);
    EXPECT_NEAR(sd, 0.0, 1e-9);
}

TEST(McError, DeterministicUnderSeed) {
    const DensityMatrix rho = noisy(w_state(2), 0.7);
    auto fn = [](const DensityMatrix& r) { return r.matrix(0, 0).real(); };
    const auto a = tomo::mc_error(rho, fn, 10, 60, 31);
    const auto b = tomo::mc_error(rho, fn, 10, 60, 31);
    EXPECT_EQ(a.first, b.first);
    EXPECT_EQ(a.second, b.second);
    EXPECT_THROW(tomo::mc_error(rho, fn, 1, 60, 31), std::invalid_argument);
}

TEST(McError, InvariantUnderThreadCap) {
    const DensityMatrix rho = noisy(w_state(2), 0.8);
    auto fn = [](const DensityMatrix& r) { return r.matrix(0, 0).real(); };
    const auto base = tomo::mc_error(rho, fn, 6, 40, 13);
    setenv("SPINWITNESS_THREADS", "1", 1);
    const auto serial = tomo::mc_error(rho, fn, 6, 40, 13);
    setenv("SPINWITNESS_THREADS", "3", 1);
    const auto three = tomo::mc_error(rho, fn, 6, 40, 13);
    unsetenv("SPINWITNESS_THREADS");
    EXPECT_EQ(base.first, serial.first);
    EXPECT_EQ(base.second, serial.second);
    EXPECT_EQ(base.first, three.first);
}

TEST(McError, XFunctionalNearTruth) {
    const DensityMatrix w3 = to_density(w_state(3));
    const DickeTripleData data = dicke_triple_data(3, 1);
    const KTensor k = data.first->k;
    auto fn = [k](const DensityMatrix& r) { return x_parameter(moments(r), k); };
    const double truth = x_parameter(moments(w3), k);
    const auto [mean, sd] = tomo::mc_error(w3, fn, 20, 100, 11);
    EXPECT_NEAR(mean, truth, 0.15);
    EXPECT_GT(sd, 0.0);
}
