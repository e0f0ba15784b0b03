#include "tauber/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tauber/errors.hpp"
#include "tauber/quadrature.hpp"

namespace tauber {

namespace {

void require_positive(double lambda) {
  if (!(lambda > 0.0)) throw DivergentTransform("transform argument must be positive");
}

// Upper bound for int_T^inf |seg(x)| e^{-s x} dx, valid once T >= lo and
// T is past every x^p e^{-sigma x / 2} maximum.
double tail_bound(const DensitySegment& seg, double s, double T) {
  double wmax = 1.0;
  if (seg.mask) {
    wmax = 0.0;
    for (const auto& p : seg.mask->pieces) wmax = std::max(wmax, std::abs(p.weight));
  }
  double b = 0.0;
  for (const Term& t : seg.density.terms()) {
    const double sigma = t.decay + s;
    b += std::abs(t.coeff) * 2.0 * std::pow(T, t.power) * std::exp(-sigma * T) / sigma;
  }
  return wmax * b;
}

double truncation_point(const DensitySegment& seg, double s, double budget) {
  double T = std::max(seg.lo, 1.0);
  for (const Term& t : seg.density.terms()) {
    const double sigma = t.decay + s;
    if (!(sigma > 0.0)) throw DivergentTransform("effective decay must be positive on an unbounded interval");
    T = std::max(T, 2.0 * std::max(t.power, 0.0) / sigma);
  }
  while (tail_bound(seg, s, T) > budget) {
    T *= 1.25;
    if (T > 1e9) throw DivergentTransform("no truncation point meets the tail budget");
  }
  return T;
}

QuadratureResult integrate_plain(const ExpressionDensity& f, double s, double lo, double hi,
                                 double rel_tol) {
  auto g = [&](double x) { return f(x) * std::exp(-s * x); };
  const double b = f.max_freq();
  double p_min = 0.0;
  for (const Term& t : f.terms()) p_min = std::min(p_min, t.power);
  const double panel = b > 0.0 ? std::numbers::pi / b : std::max(1.0, (hi - lo) / 64.0);

  QuadratureResult total;
  double start = lo;
  if (lo == 0.0 && p_min < 0.0) {
    // x = u^m flattens the x^p singularity at the origin.
    const double top = std::min(hi, 1.0);
    const double m = std::ceil(2.0 / (p_min + 1.0));
    auto h = [&](double u) { return g(std::pow(u, m)) * m * std::pow(u, m - 1.0); };
    total = integrate_panels(h, 0.0, std::pow(top, 1.0 / m), panel, rel_tol);
    start = top;
  }
  if (hi > start) {
    const QuadratureResult rest = integrate_panels(g, start, hi, panel, rel_tol);
    total.value += rest.value;
    total.error += rest.error;
  }
  return total;
}

QuadratureResult integrate_segment_numeric(const DensitySegment& seg, double s, double hi,
                                           double rel_tol) {
  if (!seg.mask) return integrate_plain(seg.density, s, seg.lo, hi, rel_tol);
  const PeriodicMask& m = *seg.mask;
  QuadratureResult total;
  auto k = static_cast<long long>(std::floor((seg.lo - m.anchor) / m.period));
  for (;; ++k) {
    const double base = m.anchor + static_cast<double>(k) * m.period;
    if (base >= hi) break;
    for (const auto& p : m.pieces) {
      const double a = std::max(seg.lo, base + p.begin);
      const double b = std::min(hi, base + p.end);
      if (!(b > a) || p.weight == 0.0) continue;
      const QuadratureResult q = integrate_plain(seg.density, s, a, b, rel_tol);
      total.value += p.weight * q.value;
      total.error += std::abs(p.weight) * q.error;
    }
  }
  return total;
}

double atom_sum(const SignedMeasure& mu, double lambda) {
  double v = 0.0;
  for (const Atom& a : mu.atoms()) v += a.weight * std::exp(-lambda * a.location);
  return v;
}

}  // namespace

TransformValue psi_closed(const SignedMeasure& mu, double lambda) {
  require_positive(lambda);
  TransformValue out{atom_sum(mu, lambda), 0.0};
  for (const DensitySegment& seg : mu.segments()) {
    const Integral in = integrate_segment(seg, lambda, seg.lo, seg.hi);
    out.value += in.value;
    out.error_bound += in.error;
  }
  return out;
}

TransformValue psi_quadrature(const SignedMeasure& mu, double lambda,
                              const QuadratureSettings& settings) {
  require_positive(lambda);
  TransformValue out{atom_sum(mu, lambda), 0.0};
  const auto n_unbounded = std::count_if(mu.segments().begin(), mu.segments().end(),
                                         [](const DensitySegment& s) { return s.unbounded(); });
  const double budget = 0.5 * settings.abs_tol / static_cast<double>(std::max<long>(1, n_unbounded));
  const double inner_rel = std::min(1e-13, settings.rel_tol * 1e-2);
  for (const DensitySegment& seg : mu.segments()) {
    double hi = seg.hi;
    if (seg.unbounded()) {
      hi = truncation_point(seg, lambda, budget);
      out.error_bound += tail_bound(seg, lambda, hi);
    }
    const QuadratureResult q = integrate_segment_numeric(seg, lambda, hi, inner_rel);
    out.value += q.value;
    out.error_bound += q.error;
  }
  return out;
}

TransformEvaluator::TransformEvaluator(SignedMeasure mu, Backend backend,
                                       QuadratureSettings settings, bool cache)
    : mu_(std::move(mu)),
      backend_(backend),
      settings_(settings),
      cache_enabled_(cache),
      shared_(std::make_shared<Shared>()) {}

TransformValue TransformEvaluator::compute(double lambda) const {
  return backend_ == Backend::closed_form ? psi_closed(mu_, lambda)
                                          : psi_quadrature(mu_, lambda, settings_);
}

TransformValue TransformEvaluator::evaluate(double lambda) const {
  require_positive(lambda);
  if (!cache_enabled_) return compute(lambda);
  {
    std::lock_guard lock(shared_->lock);
    if (auto it = shared_->cache.find(lambda); it != shared_->cache.end()) return it->second;
  }
  // Computed outside the lock; a racing duplicate yields the same value.
  const TransformValue v = compute(lambda);
  std::lock_guard lock(shared_->lock);
  shared_->cache.emplace(lambda, v);
  return v;
}

const TransformEvaluator& TransformEvaluator::total_variation_evaluator() const {
  std::call_once(shared_->abs_once, [this] {
    shared_->abs = std::make_unique<TransformEvaluator>(total_variation(mu_), backend_, settings_,
                                                        cache_enabled_);
  });
  return *shared_->abs;
}

double psi(const TransformEvaluator& ev, double lambda) { return ev.evaluate(lambda).value; }

double psi_abs(const TransformEvaluator& ev, double lambda) {
  return ev.total_variation_evaluator().evaluate(lambda).value;
}

double psi(const SignedMeasure& mu, double lambda) { return psi_closed(mu, lambda).value; }

double psi_abs(const SignedMeasure& mu, double lambda) {
  return psi_closed(total_variation(mu), lambda).value;
}

std::string to_string(Membership m) {
  switch (m) {
    case Membership::member:
      return "member";
    case Membership::not_member:
      return "not_member";
    case Membership::inconclusive:
      return "inconclusive";
  }
  return "?";
}

MembershipVerdict check_membership(const SignedMeasure& mu) {
  MembershipVerdict v;
  v.status = Membership::member;
  if (mu.locally_finite_only()) {
    v.evidence =
        "unbounded segment without decay; polynomial growth is dominated by exp(-lambda x) for "
        "every lambda > 0";
  } else if (std::any_of(mu.segments().begin(), mu.segments().end(),
                         [](const DensitySegment& s) { return s.unbounded(); })) {
    v.evidence = "every unbounded term decays exponentially";
  } else {
    v.evidence = "finite total variation on a bounded support";
  }
  return v;
}

double tilt_identity_residual(const SignedMeasure& mu, double eps, double lambda) {
  return std::abs(psi(mu, lambda + eps) - psi(tilt(mu, eps), lambda));
}

}  // namespace tauber
