#include "tauber/expression.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "tauber/errors.hpp"

namespace tauber {

double Term::operator()(double x) const {
  double v = coeff;
  if (power != 0.0) v *= std::pow(x, power);
  if (decay != 0.0) v *= std::exp(-decay * x);
  switch (osc) {
    case Oscillation::cos:
      v *= std::cos(freq * x);
      break;
    case Oscillation::sin:
      v *= std::sin(freq * x);
      break;
    case Oscillation::none:
      break;
  }
  return v;
}

bool Term::integer_power() const {
  return power >= 0.0 && power == std::floor(power) && power < 1024.0;
}

std::weak_ordering Term::key_compare(const Term& o) const {
  if (auto c = std::weak_order(power, o.power); c != 0) return c;
  if (auto c = std::weak_order(decay, o.decay); c != 0) return c;
  if (auto c = static_cast<int>(osc) <=> static_cast<int>(o.osc); c != 0) return c;
  return std::weak_order(freq, o.freq);
}

namespace {

std::vector<Term> canonicalise(std::vector<Term> in) {
  std::vector<Term> out;
  out.reserve(in.size());
  for (Term t : in) {
    if (t.osc == Oscillation::none) {
      t.freq = 0.0;
    } else if (t.freq == 0.0) {
      if (t.osc == Oscillation::sin) continue;
      t.osc = Oscillation::none;
    } else if (t.freq < 0.0) {
      t.freq = -t.freq;
      if (t.osc == Oscillation::sin) t.coeff = -t.coeff;
    }
    if (t.coeff == 0.0) continue;
    out.push_back(t);
  }
  std::sort(out.begin(), out.end(),
            [](const Term& a, const Term& b) { return a.key_compare(b) < 0; });
  std::vector<Term> merged;
  for (const Term& t : out) {
    if (!merged.empty() && merged.back().same_key(t)) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coeff == 0.0; });
  return merged;
}

}  // namespace

ExpressionDensity::ExpressionDensity(std::vector<Term> terms)
    : terms_(canonicalise(std::move(terms))) {}

ExpressionDensity ExpressionDensity::constant(double c) {
  return ExpressionDensity({Term{c, 0.0, 0.0, Oscillation::none, 0.0}});
}

ExpressionDensity ExpressionDensity::monomial(double c, double power, double decay) {
  return ExpressionDensity({Term{c, power, decay, Oscillation::none, 0.0}});
}

bool ExpressionDensity::all_integer_powers() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const Term& t) { return t.integer_power(); });
}

bool ExpressionDensity::decays() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const Term& t) { return t.decay > 0.0; });
}

double ExpressionDensity::max_freq() const {
  double b = 0.0;
  for (const Term& t : terms_) b = std::max(b, t.freq);
  return b;
}

double ExpressionDensity::operator()(double x) const {
  double v = 0.0;
  for (const Term& t : terms_) v += t(x);
  return v;
}

ExpressionDensity ExpressionDensity::operator+(const ExpressionDensity& other) const {
  std::vector<Term> all = terms_;
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return ExpressionDensity(std::move(all));
}

ExpressionDensity ExpressionDensity::scaled(double c) const {
  std::vector<Term> out = terms_;
  for (Term& t : out) t.coeff *= c;
  return ExpressionDensity(std::move(out));
}

ExpressionDensity ExpressionDensity::tilted(double eps) const {
  std::vector<Term> out = terms_;
  for (Term& t : out) t.decay += eps;
  return ExpressionDensity(std::move(out));
}

ExpressionDensity ExpressionDensity::dilated(double t) const {
  std::vector<Term> out = terms_;
  for (Term& term : out) {
    term.coeff *= std::pow(t, term.power);
    term.decay *= t;
    term.freq *= t;
  }
  return ExpressionDensity(std::move(out));
}

ExpressionDensity ExpressionDensity::times_affine(double alpha, double beta) const {
  std::vector<Term> out;
  out.reserve(2 * terms_.size());
  for (const Term& t : terms_) {
    Term a = t;
    a.coeff *= alpha;
    out.push_back(a);
    Term b = t;
    b.coeff *= beta;
    b.power += 1.0;
    out.push_back(b);
  }
  return ExpressionDensity(std::move(out));
}

ExpressionDensity ExpressionDensity::antiderivative() const {
  std::vector<Term> out;
  for (const Term& t : terms_) {
    if (t.decay == 0.0 && !t.oscillating()) {
      out.push_back(Term{t.coeff / (t.power + 1.0), t.power + 1.0, 0.0, Oscillation::none, 0.0});
      continue;
    }
    if (!t.integer_power()) {
      throw UnrepresentableDensity("antiderivative of x^" + std::to_string(t.power) +
                                   " with decay or oscillation is outside the grammar");
    }
    // int x^k e^{-zx} dx = -e^{-zx} sum_j k!/(k-j)! x^{k-j} / z^{j+1}, z = a - i b
    const int k = t.int_power();
    const double b = t.oscillating() ? t.freq : 0.0;
    const std::complex<double> z(t.decay, -b);
    double falling = 1.0;  // k!/(k-j)!
    std::complex<double> zpow = z;
    for (int j = 0; j <= k; ++j) {
      const std::complex<double> w = -falling / zpow;
      const double pw = static_cast<double>(k - j);
      switch (t.osc) {
        case Oscillation::none:
          out.push_back(Term{t.coeff * w.real(), pw, t.decay, Oscillation::none, 0.0});
          break;
        case Oscillation::cos:
          out.push_back(Term{t.coeff * w.real(), pw, t.decay, Oscillation::cos, b});
          out.push_back(Term{-t.coeff * w.imag(), pw, t.decay, Oscillation::sin, b});
          break;
        case Oscillation::sin:
          out.push_back(Term{t.coeff * w.real(), pw, t.decay, Oscillation::sin, b});
          out.push_back(Term{t.coeff * w.imag(), pw, t.decay, Oscillation::cos, b});
          break;
      }
      falling *= static_cast<double>(k - j);
      zpow *= z;
    }
  }
  return ExpressionDensity(std::move(out));
}

namespace {
bool close(double x, double y, double tol) {
  return std::abs(x - y) <= tol * std::max(std::abs(x), std::abs(y));
}
}  // namespace

bool approx_equal(const ExpressionDensity& a, const ExpressionDensity& b, double rel_tol) {
  if (a.terms().size() != b.terms().size()) return false;
  for (std::size_t i = 0; i < a.terms().size(); ++i) {
    const Term& s = a.terms()[i];
    const Term& t = b.terms()[i];
    if (s.osc != t.osc) return false;
    if (!close(s.coeff, t.coeff, rel_tol) || !close(s.power, t.power, rel_tol) ||
        !close(s.decay, t.decay, rel_tol) || !close(s.freq, t.freq, rel_tol)) {
      return false;
    }
  }
  return true;
}

}  // namespace tauber
