#include <gtest/gtest.h>

#include "otsubis/search.hpp"
#include "otsubis/synth.hpp"

namespace otsubis {
namespace {

TEST(SplitMix64, ReferenceStream) {
  // First outputs for seed 0 as published with the reference implementation.
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(rng.next(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(rng.next(), 0x06C45D188009454FULL);
}

TEST(SplitMix64, UniformRange) {
  SplitMix64 rng(42);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Bimodal, DeterministicUnderSeed) {
  const BimodalSpec spec{50, 200, 10, 10, 0.5, 10000, 1};
  EXPECT_EQ(bimodal_histogram(spec), bimodal_histogram(spec));
  EXPECT_EQ(bimodal_histogram(spec).total(), 10000u);
  auto other = spec;
  other.seed = 2;
  EXPECT_NE(bimodal_histogram(spec), bimodal_histogram(other));
}

TEST(Bimodal, MixNearOneConcentratesOnFirstMode) {
  const BimodalSpec spec{50, 200, 10, 10, 0.9999, 10000, 5};
  const auto h = bimodal_histogram(spec);
  std::uint64_t near0 = 0;
  for (int i = 10; i <= 90; ++i) near0 += h[i];
  EXPECT_GE(near0, 9980u);
}

TEST(Bimodal, SeparatedModesThresholdBetween) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const BimodalSpec spec{60, 190, 12, 15, 0.3 + 0.01 * static_cast<double>(seed), 20000, seed};
    const MomentTable m(bimodal_histogram(spec));
    VarianceEvaluator ev(m);
    const int t = exhaustive_otsu(ev).threshold;
    EXPECT_GT(t, 60);
    EXPECT_LT(t, 190);
  }
}

TEST(Bimodal, Validation) {
  EXPECT_THROW(bimodal_histogram(BimodalSpec{200, 50, 10, 10, 0.5, 100, 1}), std::invalid_argument);
  EXPECT_THROW(bimodal_histogram(BimodalSpec{50, 200, 0, 10, 0.5, 100, 1}), std::invalid_argument);
  EXPECT_THROW(bimodal_histogram(BimodalSpec{50, 200, 10, 10, 1.0, 100, 1}), std::invalid_argument);
  EXPECT_THROW(bimodal_histogram(BimodalSpec{50, 300, 10, 10, 0.5, 100, 1}), std::invalid_argument);
  EXPECT_THROW(bimodal_histogram(BimodalSpec{50, 200, 10, 10, 0.5, 0, 1}), std::invalid_argument);
}

TEST(TwoDelta, Counts) {
  const auto h = two_delta_histogram(50, 200, 4);
  EXPECT_EQ(h[50], 2u);
  EXPECT_EQ(h[200], 2u);
  EXPECT_EQ(h.total(), 4u);
  EXPECT_THROW(two_delta_histogram(200, 50, 4), std::invalid_argument);
  EXPECT_THROW(two_delta_histogram(50, 256, 4), std::invalid_argument);
  EXPECT_THROW(two_delta_histogram(50, 200, 3), std::invalid_argument);
}

TEST(TwoDelta, ExhaustiveIsLowestPlateauPoint) {
  for (int a : {0, 17, 90}) {
    for (int b : {a + 1, a + 40, 255}) {
      const MomentTable m(two_delta_histogram(a, b, 10));
      VarianceEvaluator ev(m);
      EXPECT_EQ(exhaustive_otsu(ev).threshold, a + 1);
      const double expected = 0.25 * (b - a) * (b - a);
      for (int t = a + 1; t <= b; ++t) EXPECT_NEAR(ev.evaluate(t), expected, 1e-9);
    }
  }
}

TEST(ImageFromHistogram, RoundTripAndSeeds) {
  const auto h = bimodal_histogram(BimodalSpec{70, 180, 20, 9, 0.4, 64 * 48, 9});
  const auto a = image_from_histogram(h, 64, 48, 1);
  const auto b = image_from_histogram(h, 64, 48, 1);
  const auto c = image_from_histogram(h, 64, 48, 2);
  EXPECT_EQ(compute_histogram(a), h);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_EQ(compute_histogram(c), h);
  EXPECT_THROW(image_from_histogram(h, 64, 47, 1), std::invalid_argument);
}

}  // namespace
}  // namespace otsubis
