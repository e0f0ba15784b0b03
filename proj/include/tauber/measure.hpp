#pragma once

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "tauber/closed_form.hpp"
#include "tauber/expression.hpp"
#include "tauber/extended_real.hpp"
#include "tauber/sign_analysis.hpp"

namespace tauber {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Atom {
  double location = 0.0;
  double weight = 0.0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Periodic piecewise-constant multiplier. Pieces are offsets within one
/// period; the pattern starts at `anchor` and repeats to the right.
/// Produced by the Jordan decomposition of densities whose sign pattern is
/// periodic, so that x(1/2 + cos x) on [0, inf) splits into two finite
/// representations.
struct PeriodicMask {
  struct Piece {
    double begin = 0.0;
    double end = 0.0;
    double weight = 0.0;
    friend bool operator==(const Piece&, const Piece&) = default;
  };

  double period = 0.0;
  double anchor = 0.0;
  std::vector<Piece> pieces;

  double weight_at(double x) const;
  friend bool operator==(const PeriodicMask&, const PeriodicMask&) = default;
};

/// Density on [lo, hi), hi possibly +inf. With a mask the density value at
/// x is density(x) * mask.weight_at(x).
struct DensitySegment {
  double lo = 0.0;
  double hi = kInf;
  ExpressionDensity density;
  std::optional<PeriodicMask> mask;

  bool unbounded() const { return hi == kInf; }
  double operator()(double x) const;

  friend bool operator==(const DensitySegment&, const DensitySegment&) = default;
};

/// A generalised signed Radon measure on [0, inf): finitely many atoms plus
/// piecewise expression densities. Always held in canonical form (atoms
/// sorted and merged, segments disjoint, sorted, adjacent equal segments
/// merged), so equality of measures is equality of representations.
class SignedMeasure {
 public:
  SignedMeasure() = default;
  SignedMeasure(std::vector<Atom> atoms, std::vector<DensitySegment> segments);

  static SignedMeasure dirac(double x, double weight = 1.0);
  static SignedMeasure lebesgue(double lo = 0.0, double hi = kInf);
  static SignedMeasure with_density(ExpressionDensity f, double lo = 0.0, double hi = kInf);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<DensitySegment>& segments() const { return segments_; }
  bool is_zero() const { return atoms_.empty() && segments_.empty(); }

  bool has_atom_at(double x) const;
  /// True when some unbounded segment carries a term without decay: the
  /// measure is Radon but has infinite total variation.
  bool locally_finite_only() const;

  SignedMeasure operator+(const SignedMeasure& other) const;
  SignedMeasure operator-(const SignedMeasure& other) const;
  SignedMeasure operator-() const { return scaled(-1.0); }
  SignedMeasure scaled(double c) const;

  friend bool operator==(const SignedMeasure&, const SignedMeasure&) = default;

 private:
  std::vector<Atom> atoms_;
  std::vector<DensitySegment> segments_;
};

/// Same structure with every number equal up to `rel_tol`.
bool approx_equal(const SignedMeasure& a, const SignedMeasure& b, double rel_tol);

/// int over [a, b) of segment(x) exp(-s x) dx (clipped to the segment).
Integral integrate_segment(const DensitySegment& seg, double s, double a, double b);

/// mu of the interval (a, b] (or [a, b] with include_left); b may be +inf.
/// +inf when either Jordan part has infinite mass on the interval.
ExtendedReal eval_interval(const SignedMeasure& mu, double a, double b, bool include_left = false);

/// The Jordan decomposition (mu+, mu-), both nonnegative.
std::pair<SignedMeasure, SignedMeasure> jordan(const SignedMeasure& mu,
                                               const SignAnalysisOptions& opts = {});

SignedMeasure total_variation(const SignedMeasure& mu, const SignAnalysisOptions& opts = {});

/// ||mu|| = |mu|([0, inf)).
ExtendedReal total_mass(const SignedMeasure& mu);

/// F(x) = mu([0, x]) for x > 0 and F(0) = 0.
ExtendedReal distribution(const SignedMeasure& mu, double x);

/// exp(-eps x) mu(dx).
SignedMeasure tilt(const SignedMeasure& mu, double eps);

/// nu with nu((a, b]) = mu((t a, t b]) / c.
SignedMeasure scale_normalize(const SignedMeasure& mu, double t, double c);

/// xi with density 1_{[X, inf)}(t) F_mu(t).
SignedMeasure integrated_tail(const SignedMeasure& mu, double X);

/// mu restricted to [0, T].
SignedMeasure restrict_to(const SignedMeasure& mu, double T);

/// int_{[a, b]} (alpha + beta x) mu(dx), exact; used for hat test functions.
double integrate_affine(const SignedMeasure& mu, double a, double b, double alpha, double beta);

}  // namespace tauber
