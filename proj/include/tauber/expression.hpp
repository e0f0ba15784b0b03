#pragma once

#include <compare>
#include <vector>

namespace tauber {

enum class Oscillation { none, cos, sin };

/// One term c * x^p * exp(-a x) * trig(b x).
///
/// The power p is a real number > -1; integer powers admit exact
/// antiderivatives on any interval, non-integer powers only on a few
/// interval shapes (see closed_form.hpp).
struct Term {
  double coeff = 0.0;
  double power = 0.0;
  double decay = 0.0;
  Oscillation osc = Oscillation::none;
  double freq = 0.0;

  double operator()(double x) const;
  bool integer_power() const;
  int int_power() const { return static_cast<int>(power); }
  bool oscillating() const { return osc != Oscillation::none; }

  /// Ordering key used for canonical form; the coefficient is not part of it.
  std::weak_ordering key_compare(const Term& other) const;
  bool same_key(const Term& other) const { return key_compare(other) == 0; }

  friend bool operator==(const Term&, const Term&) = default;
};

/// Finite sum of terms in canonical form: sorted by (power, decay, osc,
/// freq), duplicates merged, zero coefficients dropped, cos(0 x) folded into
/// the non-oscillating term and sin(0 x) dropped, negative frequencies
/// normalised to positive ones.
class ExpressionDensity {
 public:
  ExpressionDensity() = default;
  explicit ExpressionDensity(std::vector<Term> terms);

  static ExpressionDensity constant(double c);
  static ExpressionDensity monomial(double c, double power, double decay = 0.0);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool all_integer_powers() const;
  /// True when every term has strictly positive decay.
  bool decays() const;
  double max_freq() const;

  double operator()(double x) const;

  ExpressionDensity operator+(const ExpressionDensity& other) const;
  ExpressionDensity operator-() const { return scaled(-1.0); }
  ExpressionDensity scaled(double c) const;
  /// f(x) * exp(-eps x).
  ExpressionDensity tilted(double eps) const;
  /// x -> f(t x).
  ExpressionDensity dilated(double t) const;
  /// (alpha + beta x) f(x).
  ExpressionDensity times_affine(double alpha, double beta) const;

  /// An antiderivative G with G' = f, expressed in the same grammar.
  /// Throws UnrepresentableDensity for non-integer powers combined with
  /// decay or oscillation.
  ExpressionDensity antiderivative() const;

  friend bool operator==(const ExpressionDensity&, const ExpressionDensity&) = default;

 private:
  std::vector<Term> terms_;
};

bool approx_equal(const ExpressionDensity& a, const ExpressionDensity& b, double rel_tol);

}  // namespace tauber
