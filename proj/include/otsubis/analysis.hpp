#pragma once

// Unimodality certification of variance profiles, exhaustive-vs-bisection
// comparison records, and dataset-level aggregation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "otsubis/search.hpp"

namespace otsubis {

/// Inclusive threshold range.
struct Plateau {
  int start = 0;
  int end = 0;

  int length() const noexcept { return end - start + 1; }
  friend bool operator==(const Plateau&, const Plateau&) = default;
};

struct UnimodalityReport {
  bool is_unimodal = false;
  std::vector<Plateau> local_maxima;
  Plateau argmax_plateau;
  bool init_condition_holds = false;  // sigma(127) > max(sigma(0), sigma(255))

  /// Exactly one local maximum and it is a single threshold.
  bool strict_peak() const noexcept { return is_unimodal && argmax_plateau.length() == 1; }
};

/// Runs of equal values collapse into one plateau; a plateau is a local
/// maximum when it beats each neighbour it has. The leftmost plateau holding
/// the global maximum is reported as the argmax plateau.
inline UnimodalityReport check_unimodal(const VarianceProfile& profile) {
  std::vector<Plateau> runs;
  for (int t = 0; t < kLevels; ++t) {
    if (!runs.empty() && profile[t] == profile[runs.back().end])
      runs.back().end = t;
    else
      runs.push_back(Plateau{t, t});
  }

  UnimodalityReport report;
  std::size_t best = 0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const double v = profile[runs[k].start];
    const bool above_left = k == 0 || profile[runs[k - 1].start] < v;
    const bool above_right = k + 1 == runs.size() || profile[runs[k + 1].start] < v;
    if (above_left && above_right) report.local_maxima.push_back(runs[k]);
    if (v > profile[runs[best].start]) best = k;
  }
  report.argmax_plateau = runs[best];
  report.is_unimodal = report.local_maxima.size() == 1;
  report.init_condition_holds = profile[127] > std::max(profile[0], profile[255]);
  return report;
}

/// True when some decision step saw two equal scores among its three probes.
inline bool has_tied_probes(const SearchTrace& trace) {
  for (const auto& s : trace.steps) {
    if (!s.sigma_t1 || !s.sigma_mid || !s.sigma_t2) continue;
    if (*s.sigma_t1 == *s.sigma_mid || *s.sigma_mid == *s.sigma_t2 || *s.sigma_t1 == *s.sigma_t2) return true;
  }
  return false;
}

struct ComparisonRecord {
  std::string id;
  int t_exhaustive = 0;
  int t_bisection = 0;
  int deviation = 0;
  std::uint64_t iterations_exhaustive = 0;
  std::uint64_t iterations_bisection = 0;
  std::uint64_t cost_exhaustive = 0;
  std::uint64_t cost_bisection = 0;
  std::uint64_t raw_evaluations_bisection = 0;
  double reduction_percent = 0.0;
};

/// Both searches on independent evaluators over the same moment table.
inline ComparisonRecord compare(const Histogram& hist, const BisectionConfig& cfg, std::string id = {}) {
  const MomentTable moments(hist);
  VarianceEvaluator ev_exhaustive(moments);
  VarianceEvaluator ev_bisection(moments);
  const auto ex = exhaustive_otsu(ev_exhaustive);
  const auto bi = bisection_otsu(ev_bisection, cfg).result;

  ComparisonRecord r;
  r.id = std::move(id);
  r.t_exhaustive = ex.threshold;
  r.t_bisection = bi.threshold;
  r.deviation = std::abs(ex.threshold - bi.threshold);
  r.iterations_exhaustive = ex.iterations;
  r.iterations_bisection = bi.iterations;
  r.cost_exhaustive = ex.reported_cost;
  r.cost_bisection = bi.reported_cost;
  r.raw_evaluations_bisection = bi.raw_evaluations;
  r.reduction_percent = reduction_percent(bi.reported_cost);
  return r;
}

inline ComparisonRecord compare(const GrayImage& image, const BisectionConfig& cfg, std::string id = {}) {
  return compare(compute_histogram(image), cfg, std::move(id));
}

struct Summary {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single value
};

struct DeviationBucket {
  std::string label;
  int lo = 0;
  std::optional<int> hi;  // inclusive; empty = unbounded
  std::size_t count = 0;
  double cumulative_percent = 0.0;
};

struct AggregateStats {
  std::size_t records = 0;
  Summary computations;
  Summary iterations;
  Summary raw_evaluations;
  double mean_reduction_percent = 0.0;
  double min_reduction_percent = 0.0;
  double max_reduction_percent = 0.0;
  std::array<DeviationBucket, 5> buckets;
  double mean_abs_deviation = 0.0;
  double deviation_stddev = 0.0;
  int max_deviation = 0;
};

namespace detail {

// Integer-valued samples: sums stay exact, so the result does not depend on
// record order.
inline Summary summarize(const std::vector<std::uint64_t>& xs) {
  const double n = static_cast<double>(xs.size());
  long double sum = 0, sum_sq = 0;
  std::uint64_t lo = xs.front(), hi = xs.front();
  for (const auto x : xs) {
    sum += x;
    sum_sq += static_cast<long double>(x) * x;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  Summary s;
  s.mean = static_cast<double>(sum / n);
  s.min = static_cast<double>(lo);
  s.max = static_cast<double>(hi);
  if (xs.size() > 1) {
    const long double var = (n * sum_sq - sum * sum) / (n * (n - 1));
    s.stddev = static_cast<double>(std::sqrt(std::max<long double>(var, 0)));
  }
  return s;
}

}  // namespace detail

inline std::array<DeviationBucket, 5> empty_deviation_buckets() {
  return {DeviationBucket{"Exact match (0 levels)", 0, 0},
          DeviationBucket{"1-2 levels deviation", 1, 2},
          DeviationBucket{"3-5 levels deviation", 3, 5},
          DeviationBucket{"6-10 levels deviation", 6, 10},
          DeviationBucket{">10 levels deviation", 11, std::nullopt}};
}

inline AggregateStats aggregate(const std::vector<ComparisonRecord>& records) {
  if (records.empty()) throw std::invalid_argument("aggregate needs at least one record");

  std::vector<std::uint64_t> costs, iters, raws, devs;
  for (const auto& r : records) {
    costs.push_back(r.cost_bisection);
    iters.push_back(r.iterations_bisection);
    raws.push_back(r.raw_evaluations_bisection);
    devs.push_back(static_cast<std::uint64_t>(r.deviation));
  }

  AggregateStats st;
  st.records = records.size();
  st.computations = detail::summarize(costs);
  st.iterations = detail::summarize(iters);
  st.raw_evaluations = detail::summarize(raws);
  // Mean of per-image reductions equals the reduction at the mean cost.
  st.mean_reduction_percent = 100.0 * (1.0 - st.computations.mean / kLevels);
  st.min_reduction_percent = reduction_percent(static_cast<std::uint64_t>(st.computations.max));
  st.max_reduction_percent = reduction_percent(static_cast<std::uint64_t>(st.computations.min));

  const auto dev = detail::summarize(devs);
  st.mean_abs_deviation = dev.mean;
  st.deviation_stddev = dev.stddev;
  st.max_deviation = static_cast<int>(dev.max);

  st.buckets = empty_deviation_buckets();
  for (const auto d : devs) {
    for (auto& b : st.buckets) {
      if (static_cast<int>(d) >= b.lo && (!b.hi || static_cast<int>(d) <= *b.hi)) {
        ++b.count;
        break;
      }
    }
  }
  std::size_t running = 0;
  for (auto& b : st.buckets) {
    running += b.count;
    b.cumulative_percent = 100.0 * static_cast<double>(running) / static_cast<double>(records.size());
  }
  return st;
}

struct CategoryStats {
  std::string category;
  std::size_t count = 0;
  double mean_iterations = 0.0;
  double mean_deviation = 0.0;
  double efficiency_percent = 0.0;
};

inline constexpr std::string_view kUncategorized = "(uncategorized)";

/// Per-category breakdown; categories come from a caller-supplied id map and
/// are listed in lexicographic order.
inline std::vector<CategoryStats> aggregate_by_category(const std::vector<ComparisonRecord>& records,
                                                        const std::map<std::string, std::string>& category_of) {
  std::map<std::string, std::vector<const ComparisonRecord*>> groups;
  for (const auto& r : records) {
    const auto it = category_of.find(r.id);
    groups[it == category_of.end() ? std::string(kUncategorized) : it->second].push_back(&r);
  }
  std::vector<CategoryStats> out;
  for (const auto& [name, members] : groups) {
    std::uint64_t iters = 0, devs = 0, costs = 0;
    for (const auto* r : members) {
      iters += r->iterations_bisection;
      devs += static_cast<std::uint64_t>(r->deviation);
      costs += r->cost_bisection;
    }
    const double n = static_cast<double>(members.size());
    out.push_back(CategoryStats{name, members.size(), static_cast<double>(iters) / n, static_cast<double>(devs) / n,
                                100.0 * (1.0 - static_cast<double>(costs) / n / kLevels)});
  }
  return out;
}

}  // namespace otsubis
