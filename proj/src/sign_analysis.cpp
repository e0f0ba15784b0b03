#include "tauber/sign_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <utility>

#include "tauber/errors.hpp"

namespace tauber {

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

int sign_inside(const ExpressionDensity& f, double lo, double hi) {
  for (double frac : {0.5, 1.0 / 3.0, 2.0 / 3.0, 0.25, 0.75}) {
    const double v = f(lo + frac * (hi - lo));
    if (std::isfinite(v) && v != 0.0) return sign_of(v);
  }
  return 0;
}

long long samples_for(const ExpressionDensity& f, double length, const SignAnalysisOptions& opts,
                      long long floor_samples) {
  const double by_freq = length * f.max_freq() * 8.0 / std::numbers::pi;
  const double n = std::max({static_cast<double>(floor_samples), 1.0 / opts.resolution, by_freq});
  if (n > static_cast<double>(opts.max_samples)) {
    throw SignChangeIsolationFailure("sign isolation needs more than the sample budget on [" +
                                     std::to_string(length) + "]-long interval");
  }
  return static_cast<long long>(std::ceil(n));
}

std::vector<SignPiece> finite_pieces(const ExpressionDensity& f, double lo, double hi,
                                     long long n, double root_tol) {
  std::vector<double> breaks{lo};
  const double h = (hi - lo) / static_cast<double>(n);
  double prev_x = lo, prev_v = f(lo);
  bool have_prev = std::isfinite(prev_v);
  for (long long i = 1; i <= n; ++i) {
    const double x = (i == n) ? hi : lo + h * static_cast<double>(i);
    const double v = f(x);
    if (!std::isfinite(v)) continue;
    if (have_prev) {
      if (v == 0.0 && i != n) {
        breaks.push_back(x);
      } else if (prev_v != 0.0 && v != 0.0 && sign_of(prev_v) != sign_of(v)) {
        breaks.push_back(bisect_root(f, prev_x, x, root_tol));
      }
    }
    prev_x = x;
    prev_v = v;
    have_prev = true;
  }
  breaks.push_back(hi);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::vector<SignPiece> pieces;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i], b = breaks[i + 1];
    if (!(b > a)) continue;
    const int s = sign_inside(f, a, b);
    if (s == 0) continue;
    if (!pieces.empty() && pieces.back().sign == s && pieces.back().hi == a) {
      pieces.back().hi = b;
    } else {
      pieces.push_back({a, b, s});
    }
  }
  return pieces;
}

// Beyond the returned point the sign of f is that of the dominant
// non-oscillating coefficient.
std::optional<std::pair<double, int>> eventual_sign(const ExpressionDensity& f, double lo) {
  const auto& ts = f.terms();
  double a_min = ts.front().decay;
  for (const Term& t : ts) a_min = std::min(a_min, t.decay);
  double p_max = -1.0;
  for (const Term& t : ts)
    if (t.decay == a_min) p_max = std::max(p_max, t.power);

  double c = 0.0, osc = 0.0;
  std::vector<std::pair<double, std::pair<double, double>>> others;  // |c|, (d, e)
  double x0 = std::max(lo, 1.0);
  for (const Term& t : ts) {
    if (t.decay == a_min && t.power == p_max) {
      if (t.oscillating()) {
        osc += std::abs(t.coeff);
      } else {
        c += t.coeff;
      }
      continue;
    }
    const double d = t.power - p_max, e = t.decay - a_min;
    if (e > 0.0 && d > 0.0) x0 = std::max(x0, d / e);
    others.push_back({std::abs(t.coeff), {d, e}});
  }
  const double margin = std::abs(c) - osc;
  if (!(margin > 0.0)) return std::nullopt;

  auto bound = [&](double x) {
    double b = 0.0;
    for (const auto& [coef, de] : others) b += coef * std::pow(x, de.first) * std::exp(-de.second * x);
    return b;
  };
  double x = x0;
  while (bound(x) >= 0.5 * margin) {
    x *= 2.0;
    if (x > 1e12) return std::nullopt;
  }
  return std::make_pair(x, sign_of(c));
}

}  // namespace

double bisect_root(const ExpressionDensity& f, double a, double b, double tol) {
  double fa = f(a);
  for (int it = 0; it < 200; ++it) {
    const double width_tol = std::max(tol, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(b));
    if (b - a <= width_tol) break;
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if (sign_of(fm) == sign_of(fa)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

std::optional<double> common_period(const ExpressionDensity& f) {
  const auto& ts = f.terms();
  if (ts.empty()) return std::nullopt;
  std::vector<double> freqs;
  for (const Term& t : ts) {
    if (t.power != ts.front().power || t.decay != ts.front().decay) return std::nullopt;
    if (t.oscillating()) freqs.push_back(t.freq);
  }
  if (freqs.empty()) return std::nullopt;
  const double ref = *std::min_element(freqs.begin(), freqs.end());
  long long denom = 1;
  for (double b : freqs) {
    const double r = b / ref;
    long long q = 1;
    for (; q <= 64; ++q) {
      const double rq = r * static_cast<double>(q);
      if (std::abs(rq - std::round(rq)) <= 1e-9 * rq) break;
    }
    if (q > 64) return std::nullopt;
    denom = std::lcm(denom, q);
    if (denom > 4096) return std::nullopt;
  }
  const double omega = ref / static_cast<double>(denom);
  return 2.0 * std::numbers::pi / omega;
}

SignPattern analyse_sign(const ExpressionDensity& f, double lo, double hi,
                         const SignAnalysisOptions& opts) {
  SignPattern out;
  if (f.is_zero() || !(hi > lo)) return out;
  const std::optional<double> period = common_period(f);

  auto periodic_pattern = [&](double p) {
    std::vector<Term> gt = f.terms();
    for (Term& t : gt) {
      t.power = 0.0;
      t.decay = 0.0;
    }
    const ExpressionDensity g(std::move(gt));
    const double harmonics = g.max_freq() * p / (2.0 * std::numbers::pi);
    const auto n = static_cast<long long>(std::max(1.0 / opts.resolution, 64.0 * harmonics));
    SignPattern pat;
    pat.pieces = finite_pieces(g, lo, lo + p, n, opts.root_tol);
    if (pat.pieces.size() <= 1) {
      // One sign throughout the period: the whole segment carries it.
      const int s = pat.pieces.empty() ? 0 : pat.pieces.front().sign;
      pat.pieces.clear();
      if (s != 0) pat.pieces.push_back({lo, hi, s});
      return pat;
    }
    pat.period = p;
    return pat;
  };

  if (std::isinf(hi)) {
    if (auto ev = eventual_sign(f, lo)) {
      const auto [x, s] = *ev;
      if (x > lo) {
        const long long n = samples_for(f, x - lo, opts, opts.unbounded_samples);
        out.pieces = finite_pieces(f, lo, x, n, opts.root_tol);
      }
      if (!out.pieces.empty() && out.pieces.back().sign == s) {
        out.pieces.back().hi = hi;
      } else {
        out.pieces.push_back({std::max(lo, x), hi, s});
      }
      return out;
    }
    if (period) return periodic_pattern(*period);
    throw SignChangeIsolationFailure(
        "density on an unbounded segment neither settles to one sign nor repeats periodically");
  }
  if (period && hi - lo > 4.0 * *period) return periodic_pattern(*period);
  const long long n = samples_for(f, hi - lo, opts, 0);
  out.pieces = finite_pieces(f, lo, hi, n, opts.root_tol);
  return out;
}

}  // namespace tauber
