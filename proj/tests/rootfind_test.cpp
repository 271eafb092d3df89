#include <gtest/gtest.h>

#include <cmath>

#include "otsubis/rootfind.hpp"

namespace otsubis {
namespace {

double f(double x) { return std::exp(x) - 3.0 * x - 2.0; }

// Independent reference root by Newton iteration from the right bracket end.
double newton_root() {
  double x = 3.0;
  for (int i = 0; i < 50; ++i) x -= f(x) / (std::exp(x) - 3.0);
  return x;
}

TEST(RootFind, BracketSigns) {
  EXPECT_NEAR(f(2.0), -0.611, 5e-4);
  EXPECT_NEAR(f(3.0), 9.086, 5e-4);
  EXPECT_LT(f(2.0), 0.0);
  EXPECT_GT(f(3.0), 0.0);
}

TEST(RootFind, TranscendentalRoot) {
  const auto r = bisect_root(f, 2.0, 3.0, 1e-6, 60);
  EXPECT_LE(std::abs(f(r.root)), 1e-5);
  EXPECT_NEAR(r.root, 2.1254, 5e-5);
  EXPECT_NEAR(r.root, newton_root(), 1e-6);
  EXPECT_LE(r.iterations, static_cast<int>(std::ceil(std::log2(1.0 / 1e-6))));
  EXPECT_EQ(r.bracket_history.front().fc, f(2.5));
}

TEST(RootFind, OddFunction) {
  const auto r = bisect_root([](double x) { return x; }, -1.0, 1.0, 1e-9, 60);
  EXPECT_EQ(r.root, 0.0);
  EXPECT_EQ(r.iterations, 1);
}

TEST(RootFind, BracketHalvesAndKeepsSignChange) {
  const auto r = bisect_root(f, 2.0, 3.0, 1e-9, 60);
  for (std::size_t k = 0; k < r.bracket_history.size(); ++k) {
    const auto& s = r.bracket_history[k];
    EXPECT_EQ(s.b - s.a, std::ldexp(1.0, -static_cast<int>(k)));
    EXPECT_LT(f(s.a) * f(s.b), 0.0);
    EXPECT_EQ(s.c, s.a + (s.b - s.a) / 2);
    if (k + 1 < r.bracket_history.size()) {
      EXPECT_EQ(r.bracket_history[k + 1].a, s.next_a);
      EXPECT_EQ(r.bracket_history[k + 1].b, s.next_b);
    }
  }
}

TEST(RootFind, Errors) {
  EXPECT_THROW(bisect_root(f, 3.0, 4.0, 1e-6, 60), InvalidBracket);
  EXPECT_THROW(bisect_root([](double x) { return x; }, 0.0, 1.0, 1e-6, 60), InvalidBracket);
  EXPECT_THROW(bisect_root(f, 2.0, 3.0, 0.0, 60), InvalidBracket);
  EXPECT_THROW(bisect_root(f, 2.0, 3.0, 1e-12, 5), MaxIterationsExceeded);
}

}  // namespace
}  // namespace otsubis
