#pragma once

// Random histogram generators for property tests. Independent of the
// synth module so that module can be tested against these.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "otsubis/histogram.hpp"

namespace otsubis::testing {

/// Sparse-to-dense random histograms: a random number of occupied bins with
/// random counts, always at least two occupied bins.
inline Histogram random_histogram(std::mt19937_64& rng) {
  Histogram::Counts counts{};
  std::uniform_int_distribution<int> occupied(2, 256);
  std::uniform_int_distribution<int> bin(0, 255);
  std::uniform_int_distribution<std::uint64_t> count(1, 5000);
  const int n = occupied(rng);
  for (int k = 0; k < n; ++k) counts[static_cast<std::size_t>(bin(rng))] += count(rng);
  if (std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }) < 2) {
    counts[0] += 1;
    counts[255] += 1;
  }
  return Histogram(counts);
}

/// Two rounded Gaussian bumps sampled by expected mass rather than draws.
inline Histogram smooth_bimodal(double m0, double s0, double m1, double s1, double mix, std::uint64_t scale) {
  Histogram::Counts counts{};
  for (int i = 0; i < 256; ++i) {
    const double g0 = std::exp(-0.5 * std::pow((i - m0) / s0, 2)) / s0;
    const double g1 = std::exp(-0.5 * std::pow((i - m1) / s1, 2)) / s1;
    counts[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(std::llround(scale * (mix * g0 + (1 - mix) * g1)));
  }
  counts[static_cast<std::size_t>(std::lround(m0))] += 1;
  counts[static_cast<std::size_t>(std::lround(m1))] += 1;
  return Histogram(counts);
}

inline bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 0.0}) || a == b;
}

}  // namespace otsubis::testing
