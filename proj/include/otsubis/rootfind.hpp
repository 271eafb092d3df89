#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "otsubis/error.hpp"

namespace otsubis {

/// One bisection iteration: the bracket [a, b], its midpoint c, f(c) and
/// the bracket kept for the next iteration.
struct BracketStep {
  double a;
  double b;
  double c;
  double fc;
  double next_a;
  double next_b;
};

struct RootResult {
  double root = 0.0;
  int iterations = 0;
  std::vector<BracketStep> bracket_history;
};

/// Sign-change bisection on [a, b]. Stops at the first midpoint where
/// either the half-width or |f(c)| drops to tol.
template <class F>
RootResult bisect_root(F&& f, double a, double b, double tol, int max_iter) {
  if (!(tol > 0.0)) throw InvalidBracket("tolerance must be positive");
  if (max_iter < 1) throw InvalidBracket("max_iter must be positive");
  const double fa = f(a);
  const double fb = f(b);
  if (!(fa * fb < 0.0))
    throw InvalidBracket("f(a) and f(b) must have opposite signs (f(a)=" + std::to_string(fa) +
                         ", f(b)=" + std::to_string(fb) + ")");

  const bool a_negative = fa < 0.0;
  RootResult result;
  for (int k = 1; k <= max_iter; ++k) {
    const double c = a + (b - a) / 2;
    const double fc = f(c);
    const bool done = std::abs(fc) <= tol || (b - a) / 2 <= tol;
    BracketStep step{a, b, c, fc, a, b};
    if ((fc < 0.0) == a_negative)
      step.next_a = c;
    else
      step.next_b = c;
    result.bracket_history.push_back(step);
    result.iterations = k;
    if (done) {
      result.root = c;
      return result;
    }
    a = step.next_a;
    b = step.next_b;
  }
  throw MaxIterationsExceeded("bisection did not reach tolerance within " + std::to_string(max_iter) + " iterations");
}

}  // namespace otsubis
