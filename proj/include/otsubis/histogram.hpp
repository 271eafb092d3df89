#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "otsubis/image.hpp"

namespace otsubis {

/// 256-bin intensity histogram. Counts always sum to total, and total >= 1.
class Histogram {
 public:
  using Counts = std::array<std::uint64_t, kLevels>;

  explicit Histogram(const Counts& counts)
      : counts_(counts), total_(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0})) {
    if (total_ == 0) throw std::invalid_argument("histogram must contain at least one pixel");
  }

  const Counts& counts() const noexcept { return counts_; }
  std::uint64_t operator[](int i) const { return counts_.at(static_cast<std::size_t>(i)); }
  std::uint64_t total() const noexcept { return total_; }

  int occupied_bins() const noexcept {
    int n = 0;
    for (auto c : counts_) n += c > 0 ? 1 : 0;
    return n;
  }

  friend bool operator==(const Histogram&, const Histogram&) = default;

 private:
  Counts counts_;
  std::uint64_t total_;
};

inline Histogram compute_histogram(const GrayImage& image) {
  Histogram::Counts counts{};
  for (const auto p : image.pixels()) ++counts[p];
  return Histogram(counts);
}

/// `index,count` CSV, one row per intensity level.
inline void write_histogram_csv(const Histogram& hist, std::ostream& out) {
  out << "index,count\n";
  for (int i = 0; i < kLevels; ++i) out << i << ',' << hist[i] << '\n';
}

/// Prefix tables over the histogram so class statistics at any threshold
/// cost O(1). Entry t covers intensities strictly below t, so t runs over
/// [0, 256] and index 0 is the empty prefix.
///
/// The integer prefixes (pixel count and intensity sum) are exact; the real
/// tables are derived from them with a single division by N.
class MomentTable {
 public:
  static constexpr int kEntries = kLevels + 1;

  explicit MomentTable(const Histogram& hist) : total_(hist.total()), occupied_(hist.occupied_bins()) {
    count_prefix_[0] = 0;
    moment_prefix_[0] = 0;
    for (int i = 0; i < kLevels; ++i) {
      count_prefix_[i + 1] = count_prefix_[i] + hist[i];
      moment_prefix_[i + 1] = moment_prefix_[i] + static_cast<std::uint64_t>(i) * hist[i];
    }
    const double n = static_cast<double>(total_);
    for (int t = 0; t < kEntries; ++t) {
      cum_prob_[t] = static_cast<double>(count_prefix_[t]) / n;
      cum_mean_[t] = static_cast<double>(moment_prefix_[t]) / n;
    }
    global_mean_ = cum_mean_[kLevels];
  }

  std::uint64_t total() const noexcept { return total_; }
  int occupied_bins() const noexcept { return occupied_; }
  double global_mean() const noexcept { return global_mean_; }

  /// Sum of p(i) for i < t.
  double cum_prob(int t) const { return cum_prob_.at(static_cast<std::size_t>(t)); }
  /// Sum of i*p(i) for i < t.
  double cum_mean(int t) const { return cum_mean_.at(static_cast<std::size_t>(t)); }

  std::uint64_t count_below(int t) const { return count_prefix_.at(static_cast<std::size_t>(t)); }
  std::uint64_t moment_below(int t) const { return moment_prefix_.at(static_cast<std::size_t>(t)); }

  double omega0(int t) const { return cum_prob(t); }
  double omega1(int t) const {
    return static_cast<double>(total_ - count_below(t)) / static_cast<double>(total_);
  }

  /// Background mean; only meaningful when omega0(t) > 0.
  double mu0(int t) const {
    return static_cast<double>(moment_below(t)) / static_cast<double>(count_below(t));
  }
  /// Foreground mean; only meaningful when omega1(t) > 0.
  double mu1(int t) const {
    return static_cast<double>(moment_prefix_[kLevels] - moment_below(t)) /
           static_cast<double>(total_ - count_below(t));
  }

 private:
  std::uint64_t total_;
  int occupied_;
  std::array<std::uint64_t, kEntries> count_prefix_{};
  std::array<std::uint64_t, kEntries> moment_prefix_{};
  std::array<double, kEntries> cum_prob_{};
  std::array<double, kEntries> cum_mean_{};
  double global_mean_ = 0.0;
};

inline MomentTable build_moments(const Histogram& hist) { return MomentTable(hist); }

}  // namespace otsubis
