#pragma once

#include <optional>
#include <vector>

#include "tauber/expression.hpp"

namespace tauber {

struct SignPiece {
  double lo = 0.0;
  double hi = 0.0;
  int sign = 0;  // -1 or +1
};

/// Sign pattern of a density on [lo, hi). Either an explicit list of
/// pieces (the last may extend to +inf), or, when the density is
/// x^p e^{-a x} g(x) with g periodic and the interval spans several periods,
/// a pattern on one period [lo, lo + period) that repeats up to hi.
struct SignPattern {
  std::vector<SignPiece> pieces;
  std::optional<double> period;

  bool single_signed() const { return !period && pieces.size() <= 1; }
};

struct SignAnalysisOptions {
  /// Sample spacing as a fraction of the interval length.
  double resolution = 1e-3;
  /// Root bracketing stops at this width.
  double root_tol = 1e-12;
  /// Sample budget for unbounded segments (per decay envelope window).
  int unbounded_samples = 1000;
  /// Hard cap on samples for any single interval.
  long long max_samples = 20'000'000;
};

/// Isolates the sign changes of `f` on [lo, hi). Throws
/// SignChangeIsolationFailure when the pattern cannot be certified (an
/// unbounded segment whose sign neither settles nor repeats periodically).
SignPattern analyse_sign(const ExpressionDensity& f, double lo, double hi,
                         const SignAnalysisOptions& opts = {});

/// When all terms share one power and one decay and the oscillation
/// frequencies are commensurate, the period of the sign pattern.
std::optional<double> common_period(const ExpressionDensity& f);

/// Bisection on a bracketing interval; f(a) and f(b) must differ in sign.
double bisect_root(const ExpressionDensity& f, double a, double b, double tol);

}  // namespace tauber
