#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "otsubis/analysis.hpp"
#include "otsubis/synth.hpp"
#include "test_support.hpp"

namespace otsubis {
namespace {

VarianceProfile make_profile(double (*f)(int)) {
  VarianceProfile p;
  for (int t = 0; t < 256; ++t) p.values[static_cast<std::size_t>(t)] = f(t);
  return p;
}

ComparisonRecord record(std::string id, int deviation, std::uint64_t iterations) {
  ComparisonRecord r;
  r.id = std::move(id);
  r.t_exhaustive = 100;
  r.t_bisection = 100 + deviation;
  r.deviation = deviation;
  r.iterations_exhaustive = r.cost_exhaustive = 256;
  r.iterations_bisection = iterations;
  r.cost_bisection = 3 * iterations;
  r.raw_evaluations_bisection = 2 * iterations;
  r.reduction_percent = reduction_percent(r.cost_bisection);
  return r;
}

TEST(Unimodal, SinglePeak) {
  const auto rep = check_unimodal(make_profile([](int t) { return 1000.0 - (t - 90.0) * (t - 90.0); }));
  EXPECT_TRUE(rep.is_unimodal);
  EXPECT_TRUE(rep.strict_peak());
  EXPECT_EQ(rep.argmax_plateau, (Plateau{90, 90}));
  EXPECT_TRUE(rep.init_condition_holds);
}

TEST(Unimodal, TwoPeaks) {
  const auto rep = check_unimodal(make_profile([](int t) {
    return std::max(500.0 - std::abs(t - 60.0), 480.0 - std::abs(t - 180.0));
  }));
  EXPECT_FALSE(rep.is_unimodal);
  ASSERT_EQ(rep.local_maxima.size(), 2u);
  EXPECT_EQ(rep.local_maxima[0], (Plateau{60, 60}));
  EXPECT_EQ(rep.local_maxima[1], (Plateau{180, 180}));
  EXPECT_EQ(rep.argmax_plateau, (Plateau{60, 60}));
}

TEST(Unimodal, TwoDeltaPlateau) {
  const MomentTable m(two_delta_histogram(50, 200, 10));
  VarianceEvaluator ev(m);
  const auto rep = check_unimodal(ev.full_profile());
  EXPECT_TRUE(rep.is_unimodal);
  ASSERT_EQ(rep.local_maxima.size(), 1u);
  EXPECT_EQ(rep.local_maxima[0], (Plateau{51, 200}));
  EXPECT_EQ(rep.argmax_plateau, (Plateau{51, 200}));
  EXPECT_FALSE(rep.strict_peak());
}

TEST(Unimodal, InitCondition) {
  // Peak near the top: sigma(255) beats sigma(127).
  const auto rep = check_unimodal(make_profile([](int t) { return static_cast<double>(t); }));
  EXPECT_TRUE(rep.is_unimodal);
  EXPECT_FALSE(rep.init_condition_holds);
  EXPECT_EQ(rep.argmax_plateau, (Plateau{255, 255}));
}

TEST(Unimodal, MaximaPartitionArgmaxSet) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    VarianceProfile p;
    // Coarse integer-valued profiles force frequent ties and plateaus.
    for (auto& v : p.values) v = static_cast<double>(rng() % 6);
    const auto rep = check_unimodal(p);
    const double best = *std::max_element(p.values.begin(), p.values.end());
    std::vector<int> argmax_scan, from_plateaus;
    for (int t = 0; t < 256; ++t)
      if (p[t] == best) argmax_scan.push_back(t);
    for (const auto& pl : rep.local_maxima) {
      for (int t = pl.start; t <= pl.end; ++t) EXPECT_EQ(p[t], p[pl.start]);
      if (pl.start > 0) {
        EXPECT_LT(p[pl.start - 1], p[pl.start]);
      }
      if (pl.end < 255) {
        EXPECT_LT(p[pl.end + 1], p[pl.start]);
      }
      if (p[pl.start] == best)
        for (int t = pl.start; t <= pl.end; ++t) from_plateaus.push_back(t);
    }
    EXPECT_EQ(argmax_scan, from_plateaus);
    EXPECT_EQ(rep.is_unimodal, rep.local_maxima.size() == 1);
  }
}

TEST(TiedProbes, Detection) {
  SearchTrace t;
  SearchStep s;
  s.sigma_t1 = 1.0;
  s.sigma_mid = 2.0;
  s.sigma_t2 = 3.0;
  t.steps.push_back(s);
  EXPECT_FALSE(has_tied_probes(t));
  s.sigma_t2 = 1.0;
  t.steps.push_back(s);
  EXPECT_TRUE(has_tied_probes(t));
}

TEST(Compare, StrictlyUnimodalImageHasZeroDeviation) {
  const auto h = testing::smooth_bimodal(70, 14, 170, 20, 0.45, 64 * 64);
  const MomentTable m(h);
  VarianceEvaluator ev(m);
  ASSERT_TRUE(check_unimodal(ev.full_profile()).strict_peak());
  const auto img = image_from_histogram(h, h.total(), 1, 3);
  const auto r = compare(img, BisectionConfig{}, "synthetic");
  EXPECT_EQ(r.id, "synthetic");
  EXPECT_EQ(r.deviation, 0);
  EXPECT_EQ(r.cost_exhaustive, 256u);
  EXPECT_EQ(r.iterations_exhaustive, 256u);
  EXPECT_EQ(r.cost_bisection, 3 * r.iterations_bisection);
  EXPECT_DOUBLE_EQ(r.reduction_percent, 100.0 * (1.0 - r.cost_bisection / 256.0));
}

TEST(Compare, TwoDeltaPlateauStillWellFormed) {
  const auto r = compare(two_delta_histogram(50, 200, 100), BisectionConfig{}, "delta");
  EXPECT_EQ(r.t_exhaustive, 51);
  EXPECT_GE(r.t_bisection, 51);
  EXPECT_LE(r.t_bisection, 200);
  EXPECT_EQ(r.deviation, r.t_bisection - 51);
  EXPECT_LE(r.iterations_bisection, 8u);
  EXPECT_GE(r.reduction_percent, 90.6);
}

TEST(Compare, DegeneratePropagates) {
  EXPECT_THROW(compare(GrayImage(3, 3, std::uint8_t{1}), BisectionConfig{}), DegenerateHistogram);
}

TEST(Aggregate, SingleExactRecord) {
  const auto st = aggregate({record("a", 0, 8)});
  EXPECT_EQ(st.buckets[0].count, 1u);
  EXPECT_DOUBLE_EQ(st.buckets[0].cumulative_percent, 100.0);
  EXPECT_DOUBLE_EQ(st.buckets[4].cumulative_percent, 100.0);
  EXPECT_EQ(st.computations.stddev, 0.0);
}

TEST(Aggregate, CostArithmetic) {
  const auto st = aggregate({record("a", 0, 8), record("b", 0, 8), record("c", 17, 3)});
  EXPECT_DOUBLE_EQ(st.computations.mean, 19.0);
  EXPECT_DOUBLE_EQ(st.computations.min, 9.0);
  EXPECT_DOUBLE_EQ(st.computations.max, 24.0);
  EXPECT_NEAR(st.max_reduction_percent, 96.48, 0.005);
  EXPECT_NEAR(st.min_reduction_percent, 90.63, 0.005);
  EXPECT_EQ(st.max_deviation, 17);
  EXPECT_EQ(st.buckets[4].count, 1u);
  EXPECT_NEAR(st.mean_abs_deviation, 17.0 / 3.0, 1e-12);
  EXPECT_NEAR(st.computations.stddev, std::sqrt(75.0), 1e-12);  // deviations 5,5,-10 over n-1
}

TEST(Aggregate, BucketEdges) {
  std::vector<ComparisonRecord> rs;
  for (int d : {0, 1, 2, 3, 5, 6, 10, 11, 40}) rs.push_back(record("x" + std::to_string(d), d, 8));
  const auto st = aggregate(rs);
  const std::size_t expected[] = {1, 2, 2, 2, 2};
  std::size_t total = 0;
  double prev = 0.0;
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_EQ(st.buckets[k].count, expected[k]) << st.buckets[k].label;
    total += st.buckets[k].count;
    EXPECT_GE(st.buckets[k].cumulative_percent, prev);
    prev = st.buckets[k].cumulative_percent;
  }
  EXPECT_EQ(total, rs.size());
  EXPECT_DOUBLE_EQ(prev, 100.0);
}

TEST(Aggregate, PermutationInvariant) {
  std::mt19937_64 rng(77);
  std::vector<ComparisonRecord> rs;
  for (int k = 0; k < 48; ++k)
    rs.push_back(record("img" + std::to_string(k), static_cast<int>(rng() % 20), 3 + rng() % 6));
  const auto base = aggregate(rs);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(rs.begin(), rs.end(), rng);
    const auto st = aggregate(rs);
    EXPECT_EQ(st.computations.mean, base.computations.mean);
    EXPECT_EQ(st.computations.stddev, base.computations.stddev);
    EXPECT_EQ(st.iterations.mean, base.iterations.mean);
    EXPECT_EQ(st.mean_reduction_percent, base.mean_reduction_percent);
    EXPECT_EQ(st.mean_abs_deviation, base.mean_abs_deviation);
    EXPECT_EQ(st.deviation_stddev, base.deviation_stddev);
    for (std::size_t k = 0; k < 5; ++k) EXPECT_EQ(st.buckets[k].count, base.buckets[k].count);
  }
}

TEST(Aggregate, EmptyRejected) { EXPECT_THROW(aggregate({}), std::invalid_argument); }

TEST(Aggregate, Categories) {
  const std::vector<ComparisonRecord> rs{record("a", 0, 8), record("b", 2, 6), record("c", 4, 4)};
  const auto cats = aggregate_by_category(rs, {{"a", "natural"}, {"b", "natural"}});
  ASSERT_EQ(cats.size(), 2u);
  EXPECT_EQ(cats[0].category, std::string(kUncategorized));
  EXPECT_EQ(cats[0].count, 1u);
  EXPECT_EQ(cats[1].category, "natural");
  EXPECT_DOUBLE_EQ(cats[1].mean_iterations, 7.0);
  EXPECT_DOUBLE_EQ(cats[1].mean_deviation, 1.0);
  EXPECT_DOUBLE_EQ(cats[1].efficiency_percent, 100.0 * (1.0 - 21.0 / 256.0));
}

}  // namespace
}  // namespace otsubis
