#pragma once

#include <cmath>
#include <limits>
#include <ostream>

namespace tauber {

/// A real number or +infinity. Set evaluations of generalised signed
/// measures never produce -infinity: if either Jordan part has infinite
/// mass on the set, the value is +infinity.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr ExtendedReal(double v) : value_(v) {}  // NOLINT(implicit)

  static constexpr ExtendedReal infinity() {
    return ExtendedReal(std::numeric_limits<double>::infinity());
  }

  bool is_finite() const { return std::isfinite(value_); }
  bool is_infinite() const { return !is_finite(); }
  double value() const { return value_; }

  /// Combines the masses of the two Jordan parts on a set.
  static ExtendedReal from_parts(double positive, double negative) {
    if (!std::isfinite(positive) || !std::isfinite(negative)) return infinity();
    return ExtendedReal(positive - negative);
  }

  friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    return ExtendedReal(a.value_ + b.value_);
  }
  friend ExtendedReal operator-(ExtendedReal a, ExtendedReal b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    return ExtendedReal(a.value_ - b.value_);
  }
  friend bool operator==(ExtendedReal a, ExtendedReal b) = default;

  friend std::ostream& operator<<(std::ostream& os, ExtendedReal x) {
    if (x.is_infinite()) return os << "+inf";
    return os << x.value_;
  }

 private:
  double value_ = 0.0;
};

}  // namespace tauber
