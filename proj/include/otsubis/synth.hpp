#pragma once

// Seeded synthetic histograms and images.
//
// All randomness comes from SplitMix64 so streams can be replayed from any
// language:
//
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
//
// uniform():  (next() >> 11) * 2^-53, in [0, 1)
// normal():   Box-Muller cosine branch, sqrt(-2 ln(1 - u1)) * cos(2 pi u2)
// below(n):   next() % n
//
// A bimodal sample draws u = uniform(); component 0 if u < mix, else 1; then
// value = mean + sigma * normal(), rounded half away from zero and clamped to
// [0, 255].

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "otsubis/histogram.hpp"
#include "otsubis/image.hpp"

namespace otsubis {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

struct BimodalSpec {
  double mean0 = 64.0;
  double mean1 = 192.0;
  double sigma0 = 16.0;
  double sigma1 = 16.0;
  double mix = 0.5;  // weight of the first (darker) mode
  std::uint64_t total = 512 * 512;
  std::uint64_t seed = 1;

  void validate() const {
    auto in_range = [](double m) { return m >= 0.0 && m <= 255.0; };
    if (!in_range(mean0) || !in_range(mean1)) throw std::invalid_argument("means must lie in [0, 255]");
    if (!(mean0 < mean1)) throw std::invalid_argument("mean0 must be below mean1");
    if (!(sigma0 > 0.0) || !(sigma1 > 0.0)) throw std::invalid_argument("sigmas must be positive");
    if (!(mix > 0.0 && mix < 1.0)) throw std::invalid_argument("mix must lie in (0, 1)");
    if (total == 0) throw std::invalid_argument("total must be positive");
  }
};

inline int clamp_level(double v) {
  const long r = std::lround(v);
  return r < 0 ? 0 : (r > 255 ? 255 : static_cast<int>(r));
}

inline Histogram bimodal_histogram(const BimodalSpec& spec) {
  spec.validate();
  SplitMix64 rng(spec.seed);
  Histogram::Counts counts{};
  for (std::uint64_t i = 0; i < spec.total; ++i) {
    const bool first = rng.uniform() < spec.mix;
    const double z = rng.normal();
    const double v = first ? spec.mean0 + spec.sigma0 * z : spec.mean1 + spec.sigma1 * z;
    ++counts[static_cast<std::size_t>(clamp_level(v))];
  }
  return Histogram(counts);
}

/// Half the mass at intensity a, half at b.
inline Histogram two_delta_histogram(int a, int b, std::uint64_t total) {
  if (a < 0 || b > 255 || !(a < b)) throw std::invalid_argument("two_delta_histogram needs 0 <= a < b <= 255");
  if (total == 0 || total % 2 != 0) throw std::invalid_argument("two_delta_histogram needs a positive even total");
  Histogram::Counts counts{};
  counts[static_cast<std::size_t>(a)] = total / 2;
  counts[static_cast<std::size_t>(b)] = total / 2;
  return Histogram(counts);
}

/// Image whose pixels are a seeded Fisher-Yates shuffle of the histogram's
/// multiset of intensities.
inline GrayImage image_from_histogram(const Histogram& hist, std::size_t width, std::size_t height,
                                      std::uint64_t seed) {
  if (width == 0 || height == 0 || hist.total() != width * height)
    throw std::invalid_argument("histogram total must equal width*height");
  std::vector<std::uint8_t> pixels;
  pixels.reserve(width * height);
  for (int i = 0; i < kLevels; ++i) pixels.insert(pixels.end(), hist[i], static_cast<std::uint8_t>(i));
  SplitMix64 rng(seed);
  for (std::size_t i = pixels.size() - 1; i > 0; --i) std::swap(pixels[i], pixels[rng.below(i + 1)]);
  return GrayImage(width, height, std::move(pixels));
}

}  // namespace otsubis
