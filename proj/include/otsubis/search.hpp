#pragma once

// Threshold searches over sigma_B^2: the exhaustive argmax baseline and the
// triplet bisection maximizer.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "otsubis/error.hpp"
#include "otsubis/variance.hpp"

namespace otsubis {

enum class Method { Exhaustive, Bisection };

enum class Decision { KeepMiddle, MoveLower, MoveUpper, Converged };

inline std::string_view to_string(Method m) { return m == Method::Exhaustive ? "exhaustive" : "bisection"; }

inline std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::KeepMiddle: return "KeepMiddle";
    case Decision::MoveLower: return "MoveLower";
    case Decision::MoveUpper: return "MoveUpper";
    case Decision::Converged: return "Converged";
  }
  return "?";
}

struct Triplet {
  int low = 0;
  int mid = 127;
  int high = 255;

  int width() const noexcept { return high - low; }
  int lower_probe() const noexcept { return (low + mid) / 2; }
  int upper_probe() const noexcept { return (mid + high) / 2; }

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

/// Interval update shared by the live search and decision replay. The new
/// middle point is always the floored midpoint of the new interval.
inline Triplet apply_decision(const Triplet& tri, Decision d) {
  int low = tri.low;
  int high = tri.high;
  switch (d) {
    case Decision::KeepMiddle:
      low = tri.lower_probe();
      high = tri.upper_probe();
      break;
    case Decision::MoveLower: high = tri.mid; break;
    case Decision::MoveUpper: low = tri.mid; break;
    case Decision::Converged: throw InvalidConfig("Converged is not an interval update");
  }
  return Triplet{low, (low + high) / 2, high};
}

/// Variance comparison rule. Ties favour KeepMiddle, then MoveLower.
inline Decision decide(double sigma_lower, double sigma_mid, double sigma_upper) {
  if (sigma_mid >= sigma_lower && sigma_mid >= sigma_upper) return Decision::KeepMiddle;
  if (sigma_lower >= sigma_upper) return Decision::MoveLower;
  return Decision::MoveUpper;
}

struct SearchStep {
  Triplet triplet;
  // Probe points and their scores; empty on a width-converged step.
  std::optional<int> t1;
  std::optional<int> t2;
  std::optional<double> sigma_t1;
  std::optional<double> sigma_mid;
  std::optional<double> sigma_t2;
  Decision decision = Decision::Converged;
  std::uint64_t raw_evaluations = 0;  // cumulative evaluate() calls after this step
  std::uint64_t reported_cost = 0;    // cumulative 3-per-iteration cost
};

struct SearchTrace {
  std::vector<SearchStep> steps;
};

struct BisectionConfig {
  Triplet initial{0, 127, 255};
  int width_stop = 2;
  std::optional<double> plateau_epsilon;

  void validate() const {
    if (!(0 <= initial.low && initial.low < initial.mid && initial.mid < initial.high && initial.high < kLevels))
      throw InvalidConfig("initial triplet must satisfy 0 <= low < mid < high <= 255");
    if (width_stop < 1) throw InvalidConfig("width_stop must be at least 1");
    if (plateau_epsilon && !(*plateau_epsilon >= 0.0)) throw InvalidConfig("plateau_epsilon must be non-negative");
  }
};

struct ThresholdResult {
  int threshold = 0;
  std::uint64_t iterations = 0;
  std::uint64_t reported_cost = 0;
  std::uint64_t raw_evaluations = 0;
  Method method = Method::Exhaustive;
};

struct BisectionOutcome {
  ThresholdResult result;
  SearchTrace trace;
};

/// What a decision policy sees before each interval update.
struct StepView {
  std::size_t iteration;  // 0-based
  Triplet triplet;
  int t1, t2;
  double sigma_t1, sigma_mid, sigma_t2;
};

using DecisionPolicy = std::function<Decision(const StepView&)>;

inline Decision variance_rule(const StepView& v) { return decide(v.sigma_t1, v.sigma_mid, v.sigma_t2); }

/// Replays a fixed decision sequence, ignoring the variance values.
class ScriptedDecisions {
 public:
  explicit ScriptedDecisions(std::vector<Decision> script) : script_(std::move(script)) {}

  Decision operator()(const StepView& v) const {
    if (v.iteration >= script_.size())
      throw InvalidConfig("decision script exhausted after " + std::to_string(script_.size()) + " steps");
    const Decision d = script_[v.iteration];
    if (d == Decision::Converged) throw InvalidConfig("decision script may not contain Converged");
    return d;
  }

 private:
  std::vector<Decision> script_;
};

inline void require_nondegenerate(const VarianceEvaluator& ev) {
  if (ev.moments().occupied_bins() < 2) throw DegenerateHistogram();
}

/// Smallest t maximizing sigma_B^2 over all 256 thresholds.
inline ThresholdResult exhaustive_otsu(VarianceEvaluator& ev) {
  require_nondegenerate(ev);
  const auto start = ev.eval_count();
  int best_t = 0;
  double best = -1.0;
  for (int t = 0; t < kLevels; ++t) {
    const double s = ev.evaluate(t);
    if (s > best) {
      best = s;
      best_t = t;
    }
  }
  const auto raw = ev.eval_count() - start;
  return ThresholdResult{best_t, static_cast<std::uint64_t>(kLevels), raw, raw, Method::Exhaustive};
}

namespace detail {

class CachedSigma {
 public:
  explicit CachedSigma(VarianceEvaluator& ev) : ev_(ev) {}

  double operator()(int t) {
    auto& slot = cache_[static_cast<std::size_t>(t)];
    if (!slot) slot = ev_.evaluate(t);
    return *slot;
  }

  /// Lowest of the given points with the largest sigma.
  int argmax(std::initializer_list<int> points) {
    int best_t = -1;
    double best = 0.0;
    for (const int t : points) {
      const double s = (*this)(t);
      if (best_t < 0 || s > best || (s == best && t < best_t)) {
        best = s;
        best_t = t;
      }
    }
    return best_t;
  }

 private:
  VarianceEvaluator& ev_;
  std::array<std::optional<double>, kLevels> cache_{};
};

}  // namespace detail

/// Triplet bisection with a pluggable decision policy. Each iteration probes
/// the floored midpoints of both halves and lets the policy pick the next
/// interval; the search stops once the interval is no wider than
/// cfg.width_stop (or on a flat triplet when plateau_epsilon is set) and
/// returns the best member of the final triplet. Repeated points are served
/// from a per-run cache, so raw_evaluations <= reported_cost.
inline BisectionOutcome bisection_search(VarianceEvaluator& ev, const BisectionConfig& cfg,
                                         const DecisionPolicy& policy) {
  cfg.validate();
  require_nondegenerate(ev);

  const auto start = ev.eval_count();
  detail::CachedSigma sigma(ev);
  BisectionOutcome out;
  out.result.method = Method::Bisection;
  auto& steps = out.trace.steps;

  auto finish_step = [&](SearchStep step) {
    step.raw_evaluations = ev.eval_count() - start;
    step.reported_cost = 3 * (steps.size() + 1);
    steps.push_back(step);
  };

  Triplet tri = cfg.initial;
  for (;;) {
    if (tri.width() <= cfg.width_stop) {
      out.result.threshold = sigma.argmax({tri.low, tri.mid, tri.high});
      finish_step(SearchStep{tri, {}, {}, {}, {}, {}, Decision::Converged});
      break;
    }

    const int t1 = tri.lower_probe();
    const int t2 = tri.upper_probe();
    const double s1 = sigma(t1);
    const double sm = sigma(tri.mid);
    const double s2 = sigma(t2);
    SearchStep step{tri, t1, t2, s1, sm, s2, Decision::Converged};

    if (cfg.plateau_epsilon) {
      const double hi = std::max({s1, sm, s2});
      const double lo = std::min({s1, sm, s2});
      if (hi - lo <= *cfg.plateau_epsilon * hi) {
        out.result.threshold = sigma.argmax({t1, tri.mid, t2});
        finish_step(step);
        break;
      }
    }

    step.decision = policy(StepView{steps.size(), tri, t1, t2, s1, sm, s2});
    if (step.decision == Decision::Converged) throw InvalidConfig("decision policy returned Converged");
    finish_step(step);
    tri = apply_decision(tri, step.decision);
  }

  out.result.iterations = steps.size();
  out.result.reported_cost = 3 * out.result.iterations;
  out.result.raw_evaluations = ev.eval_count() - start;
  return out;
}

inline BisectionOutcome bisection_otsu(VarianceEvaluator& ev, const BisectionConfig& cfg = {}) {
  return bisection_search(ev, cfg, variance_rule);
}

/// 256 / cost: how many times cheaper than the exhaustive scan.
inline double reduction_factor(const ThresholdResult& result) {
  return static_cast<double>(kLevels) / static_cast<double>(result.reported_cost);
}

inline double reduction_percent(std::uint64_t reported_cost) {
  return 100.0 * (1.0 - static_cast<double>(reported_cost) / static_cast<double>(kLevels));
}

}  // namespace otsubis
