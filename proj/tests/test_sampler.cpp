#include <gtest/gtest.h>

#include <cmath>

#include "telehardy/observables.hpp"
#include "telehardy/sampler.hpp"

using namespace telehardy;

namespace {

RunConfig context_config(Context c, Interpretation interp, std::uint64_t shots, std::uint64_t seed,
                         unsigned threads = 1) {
    const ObservableSet obs = build_observables(BellIndex::PsiMinus, BellIndex::PsiMinus, interp);
    return RunConfig{obs[alice_of(c)], obs[bob_of(c)], shots, seed, threads};
}

}  // namespace

TEST(ShotUniform, RangeAndDeterminism) {
    for (std::uint64_t k = 0; k < 10000; ++k) {
        const double u = shot_uniform(42, k);
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
        EXPECT_EQ(u, shot_uniform(42, k));
    }
    EXPECT_NE(shot_uniform(1, 0), shot_uniform(2, 0));
}

TEST(ShotUniform, MomentsLookUniform) {
    const int n = 200000;
    double s = 0, s2 = 0;
    for (int k = 0; k < n; ++k) {
        const double u = shot_uniform(9, static_cast<std::uint64_t>(k));
        s += u;
        s2 += u * u;
    }
    // Mean 1/2 and second moment 1/3, each within 6 standard errors.
    EXPECT_NEAR(s / n, 0.5, 6 * std::sqrt(1.0 / 12 / n));
    EXPECT_NEAR(s2 / n, 1.0 / 3, 6 * std::sqrt(4.0 / 45 / n));
}

TEST(Sampler, DistributionMatchesExactTable) {
    const RunConfig cfg = context_config(Context::D1U2, Interpretation::FixedBasis, 1, 1);
    const auto p = sampling_distribution(make_total_state(), cfg);
    const std::array<double, 4> expect{0.5, 0.25, 0.0, 0.25};
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(p[k], expect[k], 1e-12);
    EXPECT_EQ(p[2], 0.0);  // clamped, not merely small
}

TEST(Sampler, CountsSumToShotsAndAreReproducible) {
    const StateVector psi = make_total_state();
    const RunConfig cfg = context_config(Context::D1D2, Interpretation::FixedBasis, 50000, 17);
    const CountTable a = sample(psi, cfg);
    EXPECT_EQ(a.total(), 50000u);
    EXPECT_EQ(sample(psi, cfg), a);
    RunConfig other = cfg;
    other.seed = 18;
    EXPECT_NE(sample(psi, other), a);
}

TEST(Sampler, ThreadCountDoesNotChangeCounts) {
    const StateVector psi = make_total_state();
    const CountTable one = sample(psi, context_config(Context::U1D2, Interpretation::FixedBasis, 100003, 5, 1));
    for (unsigned t : {2u, 3u, 8u})
        EXPECT_EQ(sample(psi, context_config(Context::U1D2, Interpretation::FixedBasis, 100003, 5, t)), one) << t;
}

TEST(Sampler, ZeroShots) {
    const CountTable t = sample(make_total_state(), context_config(Context::D1D2, Interpretation::FixedBasis, 0, 1, 4));
    EXPECT_EQ(t.total(), 0u);
    EXPECT_THROW((void)compare_frequencies(t, {0.25, 0.25, 0.25, 0.25}), std::invalid_argument);
}

TEST(Sampler, NonCommutingContextRejected) {
    const ObservableSet obs = build_observables(BellIndex::PsiMinus, BellIndex::PsiMinus, Interpretation::FixedBasis);
    const RunConfig cfg{obs[Observable::D1], obs[Observable::U1], 10, 1, 1};
    try {
        (void)sample(make_total_state(), cfg);
        FAIL() << "expected NonCommuting";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonCommuting);
    }
}

TEST(Sampler, ImpossibleCellsNeverDrawn) {
    const StateVector psi = make_total_state();
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const CountTable uu = sample(psi, context_config(Context::U1U2, Interpretation::FixedBasis, 40000, seed));
        EXPECT_EQ(uu.counts[3], 0u);
        EXPECT_EQ(uu.counts[0], 0u);
        const CountTable du = sample(psi, context_config(Context::D1U2, Interpretation::FixedBasis, 40000, seed));
        EXPECT_EQ(du.counts[2], 0u);
    }
}

TEST(Sampler, JointFrequencyNearOneSixteenth) {
    const StateVector psi = make_total_state();
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const RunConfig cfg = context_config(Context::D1D2, Interpretation::FixedBasis, 160000, seed, 4);
        const DeviationReport r = compare_frequencies(sample(psi, cfg), sampling_distribution(psi, cfg));
        EXPECT_NEAR(r.frequency[3], 0.0625, 0.005);
        EXPECT_LT(r.max_abs_z, 6.0);
        EXPECT_FALSE(r.impossible_event_violation());
    }
}

TEST(Deviation, FlagsImpossibleCounts) {
    const DeviationReport r = compare_frequencies(CountTable{{5, 5, 0, 1}}, {0.5, 0.5, 0.0, 0.0});
    EXPECT_TRUE(r.impossible_event_violation());
    EXPECT_EQ(r.impossible_cells, std::vector<int>{3});
    EXPECT_EQ(r.z[3], 0.0);
    EXPECT_EQ(r.std_error[2], 0.0);
}

TEST(Deviation, ZScoresByHand) {
    // n = 100, p = 0.5 per cell: se = 0.05, frequency 0.6 gives z = 2.
    const DeviationReport r = compare_frequencies(CountTable{{60, 40, 0, 0}}, {0.5, 0.5, 0.0, 0.0});
    EXPECT_NEAR(r.std_error[0], 0.05, 1e-12);
    EXPECT_NEAR(r.z[0], 2.0, 1e-12);
    EXPECT_NEAR(r.z[1], -2.0, 1e-12);
    EXPECT_NEAR(r.max_abs_z, 2.0, 1e-12);
}
