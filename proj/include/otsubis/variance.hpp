#pragma once

#include <array>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "otsubis/histogram.hpp"

namespace otsubis {

/// sigma_B^2(t) for every t in [0, 255].
struct VarianceProfile {
  std::array<double, kLevels> values{};

  double operator[](int t) const { return values.at(static_cast<std::size_t>(t)); }
};

/// Counts every between-class variance evaluation it performs. One
/// evaluator per search run; the moment table must outlive it.
class VarianceEvaluator {
 public:
  explicit VarianceEvaluator(const MomentTable& moments) : moments_(&moments) {}

  const MomentTable& moments() const noexcept { return *moments_; }
  std::uint64_t eval_count() const noexcept { return eval_count_; }

  /// w0 * w1 * (mu1 - mu0)^2, or 0 when either class is empty.
  double evaluate(int t) {
    if (t < 0 || t >= kLevels) throw std::out_of_range("threshold must lie in [0, 255]");
    ++eval_count_;
    const auto below = moments_->count_below(t);
    if (below == 0 || below == moments_->total()) return 0.0;
    const double diff = moments_->mu1(t) - moments_->mu0(t);
    return moments_->omega0(t) * moments_->omega1(t) * diff * diff;
  }

  VarianceProfile full_profile() {
    VarianceProfile profile;
    for (int t = 0; t < kLevels; ++t) profile.values[static_cast<std::size_t>(t)] = evaluate(t);
    return profile;
  }

 private:
  const MomentTable* moments_;
  std::uint64_t eval_count_ = 0;
};

/// Reference sigma_B^2(t) by fresh summation over the normalized histogram.
/// O(L) per call and not counted; meant for cross-checking the evaluator.
inline double direct_sigma(const Histogram& hist, int t) {
  if (t < 0 || t >= kLevels) throw std::out_of_range("threshold must lie in [0, 255]");
  const double n = static_cast<double>(hist.total());
  double w0 = 0.0, w1 = 0.0, m0 = 0.0, m1 = 0.0;
  for (int i = 0; i < t; ++i) {
    const double p = static_cast<double>(hist[i]) / n;
    w0 += p;
    m0 += i * p;
  }
  for (int i = t; i < kLevels; ++i) {
    const double p = static_cast<double>(hist[i]) / n;
    w1 += p;
    m1 += i * p;
  }
  if (w0 <= 0.0 || w1 <= 0.0) return 0.0;
  const double diff = m1 / w1 - m0 / w0;
  return w0 * w1 * diff * diff;
}

/// `t,sigma` CSV with 256 data rows.
inline void write_profile_csv(const VarianceProfile& profile, std::ostream& out) {
  out << "t,sigma\n";
  const auto old_flags = out.flags();
  const auto old_precision = out.precision();
  out << std::setprecision(17);
  for (int t = 0; t < kLevels; ++t) out << t << ',' << profile[t] << '\n';
  out.flags(old_flags);
  out.precision(old_precision);
}

}  // namespace otsubis
