#pragma once

#include <complex>

#include "tauber/expression.hpp"

namespace tauber {

/// Value of an integral together with an error bound; the bound is zero on
/// purely closed-form paths.
struct Integral {
  double value = 0.0;
  double error = 0.0;

  Integral& operator+=(const Integral& o) {
    value += o.value;
    error += o.error;
    return *this;
  }
};

namespace closed_form {

/// int_lo^hi x^k exp(-z x) dx for integer k >= 0 and Re z >= 0. `hi` may be
/// +inf, in which case Re z > 0 is required.
std::complex<double> power_exp_integral(int k, std::complex<double> z, double lo, double hi);

/// int_lo^hi term(x) exp(-s x) dx. Exact for integer powers; non-integer
/// powers use the Gamma function, incomplete Gamma functions, or (when the
/// term also oscillates) adaptive quadrature, reported through `error`.
/// Throws DivergentTransform when hi = +inf and the effective decay is not
/// positive.
Integral term(const Term& t, double s, double lo, double hi);

/// Sum of `term` over the density's terms.
Integral density(const ExpressionDensity& f, double s, double lo, double hi);

/// sum_{m >= 0} m^j q^m for 0 <= q < 1; `one_minus_q` is passed separately
/// so callers can supply it without cancellation.
double power_series_sum(int j, double q, double one_minus_q);

/// sum_{m = 0}^{count - 1} m^j q^m.
double partial_power_sum(int j, double q, long long count);

}  // namespace closed_form
}  // namespace tauber
