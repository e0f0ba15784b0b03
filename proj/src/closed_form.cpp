#include "tauber/closed_form.hpp"

#include <array>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <vector>

#include "tauber/errors.hpp"
#include "tauber/quadrature.hpp"

namespace tauber::closed_form {

namespace {

using cplx = std::complex<double>;

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= static_cast<double>(i);
  return r;
}

// int_0^h y^j e^{-z y} dy
cplx integral_from_zero(int j, cplx z, double h) {
  const cplx w = z * h;
  const double hp = std::pow(h, j + 1);
  if (std::abs(w) < static_cast<double>(j + 1)) {
    // e^{-w} h^{j+1} sum_n w^n / ((j+1)(j+2)...(j+1+n)); no cancellation for real w.
    cplx term = 1.0 / static_cast<double>(j + 1);
    cplx sum = term;
    for (int n = 1; n < 400; ++n) {
      term *= w / static_cast<double>(j + 1 + n);
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return std::exp(-w) * hp * sum;
  }
  // j!/z^{j+1} (1 - e^{-w} sum_{m<=j} w^m/m!)
  cplx partial = 1.0, wm = 1.0;
  for (int m = 1; m <= j; ++m) {
    wm *= w / static_cast<double>(m);
    partial += wm;
  }
  return factorial(j) / std::pow(z, j + 1) * (1.0 - std::exp(-w) * partial);
}

// int_0^h x^p e^{-z x} dx from the series of e^{-z x}; meant for |z| h <= 1.
cplx power_head(double p, cplx z, double h) {
  cplx term = 1.0, sum = 0.0;
  for (int k = 0; k < 80; ++k) {
    const cplx add = term / (p + static_cast<double>(k) + 1.0);
    sum += add;
    if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    term *= -z * h / static_cast<double>(k + 1);
  }
  return std::pow(h, p + 1.0) * sum;
}

double pick(const Term& t, cplx c) { return t.osc == Oscillation::sin ? c.imag() : c.real(); }

Integral noninteger_term(const Term& t, double s, double lo, double hi) {
  const double p = t.power;
  const double sigma = t.decay + s;
  const double b = t.oscillating() ? t.freq : 0.0;
  const bool unbounded = std::isinf(hi);

  if (sigma == 0.0 && b == 0.0) {
    if (unbounded) throw DivergentTransform("non-decaying power on an unbounded interval");
    return {t.coeff * (std::pow(hi, p + 1.0) - std::pow(lo, p + 1.0)) / (p + 1.0), 0.0};
  }
  if (unbounded && !(sigma > 0.0)) {
    throw DivergentTransform("effective decay must be positive on an unbounded interval");
  }
  if (lo == 0.0 && unbounded) {
    const cplx z(sigma, -b);
    return {t.coeff * pick(t, std::tgamma(p + 1.0) / std::pow(z, p + 1.0)), 0.0};
  }
  if (b == 0.0) {
    // Gamma(p+1)/sigma^{p+1} [P(p+1, sigma hi) - P(p+1, sigma lo)]
    const double a = p + 1.0;
    const double scale = std::tgamma(a) / std::pow(sigma, a);
    double diff;
    if (unbounded) {
      diff = boost::math::gamma_q(a, sigma * lo);
    } else if (sigma * hi <= a) {
      diff = boost::math::gamma_p(a, sigma * hi) - boost::math::gamma_p(a, sigma * lo);
    } else {
      diff = boost::math::gamma_q(a, sigma * lo) - boost::math::gamma_q(a, sigma * hi);
    }
    return {t.coeff * scale * diff, 0.0};
  }

  // Oscillating non-integer power: the x^p singularity is handled by a
  // series on a short head, the smooth remainder by panel quadrature.
  const double top = unbounded ? lo : hi;
  const double from = unbounded ? 0.0 : lo;
  const double panel = std::min(1.0, 1.0 / b) * 2.0;
  double head = 0.0;
  double start = from;
  if (from == 0.0) {
    const cplx z(sigma, -b);
    start = std::min(top, 1.0 / std::abs(z));
    head = t.coeff * pick(t, power_head(p, z, start));
  }
  Term shifted = t;
  shifted.decay = sigma;
  const QuadratureResult q = integrate_panels([&](double x) { return shifted(x); }, start, top, panel);
  const double part = head + q.value;
  if (!unbounded) return {part, q.error};
  Term full = t;
  const double whole = noninteger_term(full, s, 0.0, hi).value;
  return {whole - part, q.error};
}

// Eulerian numbers E(j, i), j < 32.
const std::vector<std::vector<double>>& eulerian_table() {
  static const auto table = [] {
    std::vector<std::vector<double>> e(32);
    e[0] = {1.0};
    for (int n = 1; n < 32; ++n) {
      e[n].assign(static_cast<std::size_t>(n), 0.0);
      for (int i = 0; i < n; ++i) {
        const double left = (static_cast<std::size_t>(i) < e[n - 1].size()) ? e[n - 1][static_cast<std::size_t>(i)] : 0.0;
        const double right = (i > 0) ? e[n - 1][static_cast<std::size_t>(i - 1)] : 0.0;
        e[n][static_cast<std::size_t>(i)] =
            static_cast<double>(i + 1) * left + static_cast<double>(n - i) * right;
      }
    }
    return e;
  }();
  return table;
}

}  // namespace

cplx power_exp_integral(int k, cplx z, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  const cplx shift = lo == 0.0 ? cplx(1.0) : std::exp(-z * lo);
  cplx sum = 0.0;
  if (std::isinf(hi)) {
    cplx zp = z;
    for (int j = 0; j <= k; ++j) {
      const double lop = (k - j == 0) ? 1.0 : std::pow(lo, k - j);
      sum += binomial(k, j) * lop * factorial(j) / zp;
      zp *= z;
    }
    return shift * sum;
  }
  const double h = hi - lo;
  for (int j = 0; j <= k; ++j) {
    const double lop = (k - j == 0) ? 1.0 : std::pow(lo, k - j);
    if (lop == 0.0) continue;
    sum += binomial(k, j) * lop * integral_from_zero(j, z, h);
  }
  return shift * sum;
}

Integral term(const Term& t, double s, double lo, double hi) {
  if (!(hi > lo) || t.coeff == 0.0) return {};
  if (!t.integer_power()) return noninteger_term(t, s, lo, hi);
  const double sigma = t.decay + s;
  if (std::isinf(hi) && !(sigma > 0.0)) {
    throw DivergentTransform("effective decay must be positive on an unbounded interval");
  }
  const double b = t.oscillating() ? t.freq : 0.0;
  const cplx v = power_exp_integral(t.int_power(), cplx(sigma, -b), lo, hi);
  return {t.coeff * pick(t, v), 0.0};
}

Integral density(const ExpressionDensity& f, double s, double lo, double hi) {
  Integral total;
  for (const Term& t : f.terms()) total += term(t, s, lo, hi);
  return total;
}

double power_series_sum(int j, double q, double one_minus_q) {
  if (j == 0) return 1.0 / one_minus_q;
  const auto& e = eulerian_table();
  if (j >= static_cast<int>(e.size())) throw Error("power too large for periodic summation");
  double a = 0.0;
  for (int i = j - 1; i >= 0; --i) a = a * q + e[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  return q * a / std::pow(one_minus_q, j + 1);
}

double partial_power_sum(int j, double q, long long count) {
  double sum = 0.0, qm = 1.0;
  for (long long m = 0; m < count; ++m) {
    const double md = static_cast<double>(m);
    sum += (j == 0 ? 1.0 : std::pow(md, j)) * qm;
    qm *= q;
  }
  return sum;
}

}  // namespace tauber::closed_form
