#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "ofdmqkd/errors.hpp"
#include "ofdmqkd/modnoise.hpp"
#include "oracles/imd_bruteforce.hpp"

namespace ofdmqkd {
namespace {

ModulatorParams figure_modulator(double v_mod) {
  return {0.01, 1.0, 0.98, std::numbers::pi / 50.0, v_mod};
}

void expect_counts_equal(const ImdCounts& got, const oracle::ReferenceCounts& want, int k) {
  EXPECT_EQ(got.m1, want.m1) << "k=" << k;
  EXPECT_EQ(got.m2, want.m2) << "k=" << k;
  EXPECT_EQ(got.w1, want.w1) << "k=" << k;
  EXPECT_EQ(got.w2, want.w2) << "k=" << k;
  EXPECT_EQ(got.w3, want.w3) << "k=" << k;
}

TEST(CarrierPlan, FrequenciesAndOffset) {
  const CarrierPlan plan{300e9, 5e9, 4};
  EXPECT_DOUBLE_EQ(plan.frequency(1).hz(), 305e9);
  EXPECT_DOUBLE_EQ(plan.frequency(4).hz(), 320e9);
  EXPECT_DOUBLE_EQ(plan.band_centre().hz(), 312.5e9);
  EXPECT_EQ(plan.sum_frequency_offset(), 120);
  EXPECT_EQ((CarrierPlan{300.5e9, 3e9, 4}.sum_frequency_offset()), std::nullopt);
  EXPECT_THROW(plan.frequency(0), RangeError);
  EXPECT_THROW(plan.frequency(5), RangeError);
  EXPECT_THROW((CarrierPlan{0.0, 5e9, 4}.validate()), DomainError);
  EXPECT_THROW((CarrierPlan{300e9, 5e9, 0}.validate()), DomainError);
}

TEST(ModulatorParams, Validation) {
  EXPECT_NO_THROW(figure_modulator(1000).validate());
  ModulatorParams p = figure_modulator(1000);
  p.kappa = 1.2;
  EXPECT_THROW(p.validate(), DomainError);
  p = figure_modulator(-1);
  EXPECT_THROW(p.validate(), DomainError);
  p = figure_modulator(1000);
  p.theta = 2.0;
  EXPECT_THROW(p.validate(), DomainError);
}

TEST(ImdCounts, SingleCarrierHasNoProducts) {
  EXPECT_TRUE(imd_counts(CarrierPlan{300e9, 5e9, 1}, 1).all_zero());
  EXPECT_TRUE(imd_counts(CarrierPlan{300e9, 5e9, 2}, 1).all_zero());
}

TEST(ImdCounts, SmallBandByHand) {
  // N = 3 with non-integer r, only difference products land in band:
  //   k=1: 2f2 - f3    k=2: f1 + f3 - f2    k=3: 2f2 - f1
  const CarrierPlan plan{300.5e9, 5e9, 3};
  EXPECT_EQ(imd_counts(plan, 1), (ImdCounts{1, 0, 0, 0, 0}));
  EXPECT_EQ(imd_counts(plan, 2), (ImdCounts{0, 0, 0, 1, 0}));
  EXPECT_EQ(imd_counts(plan, 3), (ImdCounts{1, 0, 0, 0, 0}));
}

TEST(ImdCounts, MatchesBruteForceEnumeration) {
  // r = 2 f_I / df: non-integer, small enough for sum products to land, and
  // two large values where they never do.
  struct Case {
    double base_hz, spacing_hz;
  };
  const Case cases[] = {{300.5e9, 5e9}, {2.5e9, 5e9}, {3.5e9, 1e9}, {300e9, 5e9}, {840e9, 3e9}};
  for (const Case& c : cases) {
    for (int n : {1, 2, 5, 12, 33}) {
      const CarrierPlan plan{c.base_hz, c.spacing_hz, n};
      const auto reference = oracle::brute_force_imd(n, plan.sum_frequency_offset());
      for (int k = 1; k <= n; ++k) expect_counts_equal(imd_counts(plan, k), reference[k - 1], k);
    }
  }
}

TEST(ImdCounts, SumProductsAppearForSmallOffset) {
  // r = 1: 2f_m + f_n lands on k = 2m + n + 1.
  const CarrierPlan plan{2.5e9, 5e9, 12};
  ASSERT_EQ(plan.sum_frequency_offset(), 1);
  std::int64_t m2 = 0, w1 = 0;
  for (const ImdCounts& c : imd_count_table(plan)) {
    m2 += c.m2;
    w1 += c.w1;
  }
  EXPECT_GT(m2, 0);
  EXPECT_GT(w1, 0);
}

TEST(ImdCounts, MirrorSymmetricWithoutSumProducts) {
  const CarrierPlan plan{300e9, 5e9, 40};
  for (int k = 1; k <= 40; ++k) EXPECT_EQ(imd_counts(plan, k), imd_counts(plan, 41 - k));
}

TEST(ImdCounts, ConcurrentCallersShareOneTable) {
  const CarrierPlan plan{301e9, 7e9, 57};
  std::vector<const std::vector<ImdCounts>*> seen(8);
  {
    std::vector<std::jthread> threads;
    for (int t = 0; t < 8; ++t) {
      threads.emplace_back([&, t] { seen[t] = &imd_count_table(plan); });
    }
  }
  for (const auto* table : seen) EXPECT_EQ(table, seen.front());
  EXPECT_EQ(imd_counts(plan, 29), imd_count_table(plan)[28]);
}

TEST(ModulationNoise, IqImbalanceOnly) {
  // 30-digit reference for mu=0.01, kappa=0.98, theta=pi/50, V_mod=1000.
  const ModulatorParams p = figure_modulator(1000);
  EXPECT_NEAR(iq_imbalance_variance(p), 4.2676122805877386e-4, 1e-17);
  EXPECT_DOUBLE_EQ(modulation_noise(CarrierPlan{300e9, 5e9, 1}, p, 1), iq_imbalance_variance(p));
}

TEST(ModulationNoise, PerfectModulatorHasNoIqTerm) {
  ModulatorParams p = figure_modulator(1000);
  p.kappa = 1.0;
  p.theta = 0.0;
  EXPECT_EQ(iq_imbalance_variance(p), 0.0);
}

TEST(ModulationNoise, ImdTermsScaleWithCubeOfVariance) {
  const CarrierPlan plan{300e9, 5e9, 24};
  const ModulatorParams low = figure_modulator(100);
  const ModulatorParams high = figure_modulator(200);
  for (int k : {1, 7, 12}) {
    const double imd_low = modulation_noise(plan, low, k) - iq_imbalance_variance(low);
    const double imd_high = modulation_noise(plan, high, k) - iq_imbalance_variance(high);
    EXPECT_NEAR(imd_high / imd_low, 8.0, 1e-9);
  }
}

TEST(ModulationNoise, TwoToneTermByHand) {
  // m1 = 2, m2 = 1 with A = 1, kappa = 1, theta = 0: gain 4, <I^4> = 2 V^2.
  const ModulatorParams p{0.1, 1.0, 1.0, 0.0, 3.0};
  const ImdCounts c{2, 1, 0, 0, 0};
  const double v = 3.0;
  const double expected = std::pow(0.1, 6) / 8.0 * 4.0 * (9.0 * 2.0 * v * v * v + 2.0 * 1.0 * v * v * v);
  EXPECT_NEAR(imd_two_tone_variance(p, c), expected, 1e-18);
  EXPECT_NEAR(imd_three_tone_variance(p, ImdCounts{0, 0, 1, 2, 3}),
              std::pow(0.1, 6) / 4.0 * 4.0 * 14.0 * v * v * v, 1e-18);
}

TEST(WorstModulationNoise, ReferenceValuesAtVmod100) {
  // Frozen from an independent enumeration of the same counting rules.
  const ModulatorParams p = figure_modulator(100);
  const auto w120 = worst_modulation_noise(CarrierPlan{300e9, 5e9, 120}, p);
  EXPECT_EQ(w120.k, 60);
  EXPECT_NEAR(w120.value, 27.004497261523567, 1e-9);
  const auto w128 = worst_modulation_noise(CarrierPlan{300e9, 5e9, 128}, p);
  EXPECT_EQ(w128.k, 64);
  EXPECT_NEAR(w128.value, 35.080582871620381, 1e-9);
  const auto w10 = worst_modulation_noise(CarrierPlan{300e9, 5e9, 10}, p);
  EXPECT_EQ(w10.k, 5);
  EXPECT_NEAR(w10.value, 7.3590235543221336e-4, 1e-15);
}

TEST(WorstModulationNoise, TiesResolveToLowestIndex) {
  // Symmetric band: eps(k) = eps(N + 1 - k), so an even N has a tied pair.
  const CarrierPlan plan{300e9, 5e9, 20};
  const auto w = worst_modulation_noise(plan, figure_modulator(100));
  EXPECT_LE(w.k, 10);
  EXPECT_DOUBLE_EQ(modulation_noise(plan, figure_modulator(100), 21 - w.k), w.value);
}

TEST(WorstModulationNoise, GrowsWithSubcarrierCount) {
  const ModulatorParams p = figure_modulator(100);
  double previous = 0.0;
  for (int n = 1; n <= 64; ++n) {
    const double value = worst_modulation_noise(CarrierPlan{300e9, 5e9, n}, p).value;
    EXPECT_GE(value, previous) << "N=" << n;
    previous = value;
  }
}

}  // namespace
}  // namespace ofdmqkd
