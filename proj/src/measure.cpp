#include "tauber/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tauber/errors.hpp"

namespace tauber {

// ---------------------------------------------------------------------------
// Masks and segments

double PeriodicMask::weight_at(double x) const {
  if (x < anchor) return 0.0;
  const double off = std::fmod(x - anchor, period);
  for (const Piece& p : pieces)
    if (off >= p.begin && off < p.end) return p.weight;
  return 0.0;
}

double DensitySegment::operator()(double x) const {
  if (x < lo || x >= hi) return 0.0;
  const double v = density(x);
  return mask ? v * mask->weight_at(x) : v;
}

namespace {

bool close(double x, double y, double tol) {
  if (x == y) return true;
  return std::abs(x - y) <= tol * std::max(std::abs(x), std::abs(y));
}

std::vector<Atom> canonical_atoms(std::vector<Atom> atoms) {
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.location) || a.location < 0.0)
      throw std::invalid_argument("atom location must be finite and >= 0");
    if (!std::isfinite(a.weight)) throw std::invalid_argument("atom weight must be finite");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.location < b.location; });
  std::vector<Atom> out;
  for (const Atom& a : atoms) {
    if (!out.empty() && out.back().location == a.location) {
      out.back().weight += a.weight;
    } else {
      out.push_back(a);
    }
  }
  std::erase_if(out, [](const Atom& a) { return a.weight == 0.0; });
  return out;
}

std::optional<PeriodicMask> normalise_mask(PeriodicMask m) {
  std::erase_if(m.pieces, [](const PeriodicMask::Piece& p) { return p.weight == 0.0 || !(p.end > p.begin); });
  std::vector<PeriodicMask::Piece> merged;
  for (const auto& p : m.pieces) {
    if (!merged.empty() && merged.back().end == p.begin && merged.back().weight == p.weight) {
      merged.back().end = p.end;
    } else {
      merged.push_back(p);
    }
  }
  m.pieces = std::move(merged);
  return m;
}

// Sum of several segments covering the same elementary interval [lo, hi).
std::optional<DensitySegment> combine(const std::vector<const DensitySegment*>& cover, double lo,
                                      double hi) {
  const bool any_mask = std::any_of(cover.begin(), cover.end(),
                                    [](const DensitySegment* s) { return s->mask.has_value(); });
  if (cover.size() == 1 || !any_mask) {
    ExpressionDensity sum;
    for (const DensitySegment* s : cover) sum = sum + s->density;
    if (sum.is_zero()) return std::nullopt;
    DensitySegment out{lo, hi, sum, cover.size() == 1 ? cover.front()->mask : std::nullopt};
    return out;
  }

  const DensitySegment* ref = nullptr;
  for (const DensitySegment* s : cover)
    if (s->mask) ref = s;
  const PeriodicMask& rm = *ref->mask;
  std::vector<double> cuts{0.0, rm.period};
  for (const DensitySegment* s : cover) {
    if (s->density != ref->density)
      throw Error("cannot add overlapping periodic segments with different densities");
    if (!s->mask) continue;
    if (s->mask->period != rm.period || s->mask->anchor != rm.anchor)
      throw Error("cannot add overlapping periodic segments with different periods");
    for (const auto& p : s->mask->pieces) {
      cuts.push_back(p.begin);
      cuts.push_back(p.end);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  PeriodicMask m{rm.period, rm.anchor, {}};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    double w = 0.0;
    for (const DensitySegment* s : cover) {
      if (!s->mask) {
        w += 1.0;
        continue;
      }
      for (const auto& p : s->mask->pieces)
        if (mid >= p.begin && mid < p.end) w += p.weight;
    }
    m.pieces.push_back({cuts[i], cuts[i + 1], w});
  }
  auto nm = normalise_mask(std::move(m));
  if (nm->pieces.empty()) return std::nullopt;
  if (nm->pieces.size() == 1 && nm->pieces.front().begin == 0.0 &&
      nm->pieces.front().end == nm->period) {
    return DensitySegment{lo, hi, ref->density.scaled(nm->pieces.front().weight), std::nullopt};
  }
  return DensitySegment{lo, hi, ref->density, std::move(nm)};
}

std::vector<DensitySegment> canonical_segments(std::vector<DensitySegment> segs) {
  for (const DensitySegment& s : segs) {
    if (!std::isfinite(s.lo) || s.lo < 0.0)
      throw std::invalid_argument("segment lower end must be finite and >= 0");
    if (!(s.hi > s.lo)) throw std::invalid_argument("segment must satisfy lo < hi");
  }
  std::erase_if(segs, [](const DensitySegment& s) {
    return s.density.is_zero() || (s.mask && s.mask->pieces.empty());
  });
  if (segs.empty()) return {};

  std::vector<double> cuts;
  for (const DensitySegment& s : segs) {
    cuts.push_back(s.lo);
    cuts.push_back(s.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<DensitySegment> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    std::vector<const DensitySegment*> cover;
    for (const DensitySegment& s : segs)
      if (s.lo <= lo && s.hi >= hi) cover.push_back(&s);
    if (cover.empty()) continue;
    auto piece = combine(cover, lo, hi);
    if (!piece) continue;
    if (!out.empty() && out.back().hi == lo && out.back().density == piece->density &&
        out.back().mask == piece->mask) {
      out.back().hi = hi;
    } else {
      out.push_back(std::move(*piece));
    }
  }
  return out;
}

// int over [lo, hi) of f(x) w(x) e^{-s x} with periodic w.
Integral masked_integral(const ExpressionDensity& f, const PeriodicMask& m, double s, double lo,
                         double hi) {
  if (!f.all_integer_powers())
    throw Error("periodic masks are only supported for integer powers");
  const double P = m.period;

  auto one_period = [&](long long k, double a, double b) {
    Integral total;
    const double base = m.anchor + static_cast<double>(k) * P;
    for (const auto& p : m.pieces) {
      const double x0 = std::max(a, base + p.begin);
      const double x1 = std::min(b, base + p.end);
      if (!(x1 > x0)) continue;
      Integral piece = closed_form::density(f, s, x0, x1);
      total.value += p.weight * piece.value;
      total.error += std::abs(p.weight) * piece.error;
    }
    return total;
  };

  // Periods first .. first + count - 1, count < 0 meaning all the way to +inf.
  auto full_periods = [&](long long first, long long count) {
    Integral total;
    const double base = m.anchor + static_cast<double>(first) * P;
    for (const Term& t : f.terms()) {
      const double sigma = t.decay + s;
      if (count < 0 && !(sigma > 0.0))
        throw DivergentTransform("periodic segment without decay on an unbounded interval");
      const double q = std::exp(-sigma * P);
      const double omq = -std::expm1(-sigma * P);
      const int k = t.int_power();
      double binom = 1.0, ppow = 1.0;
      for (int j = 0; j <= k; ++j) {
        const double S = count < 0 ? closed_form::power_series_sum(j, q, omq)
                                   : closed_form::partial_power_sum(j, q, count);
        Term reduced = t;
        reduced.power = static_cast<double>(k - j);
        for (const auto& p : m.pieces) {
          const Integral in = closed_form::term(reduced, s, base + p.begin, base + p.end);
          total.value += p.weight * binom * ppow * S * in.value;
        }
        binom = binom * static_cast<double>(k - j) / static_cast<double>(j + 1);
        ppow *= P;
      }
    }
    return total;
  };

  const auto first = static_cast<long long>(std::floor((lo - m.anchor) / P));
  Integral total = one_period(first, lo, hi);
  if (std::isinf(hi)) {
    total += full_periods(first + 1, -1);
    return total;
  }
  const auto last = static_cast<long long>(std::floor((hi - m.anchor) / P));
  if (last == first) return total;
  if (last > first + 1) total += full_periods(first + 1, last - first - 1);
  total += one_period(last, lo, hi);
  return total;
}

bool masks_close(const std::optional<PeriodicMask>& a, const std::optional<PeriodicMask>& b,
                 double tol) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  if (!close(a->period, b->period, tol) || !close(a->anchor, b->anchor, tol)) return false;
  if (a->pieces.size() != b->pieces.size()) return false;
  for (std::size_t i = 0; i < a->pieces.size(); ++i) {
    const auto& p = a->pieces[i];
    const auto& q = b->pieces[i];
    if (!close(p.begin, q.begin, tol) || !close(p.end, q.end, tol) ||
        !close(p.weight, q.weight, tol))
      return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// SignedMeasure

SignedMeasure::SignedMeasure(std::vector<Atom> atoms, std::vector<DensitySegment> segments)
    : atoms_(canonical_atoms(std::move(atoms))),
      segments_(canonical_segments(std::move(segments))) {}

SignedMeasure SignedMeasure::dirac(double x, double weight) {
  return SignedMeasure({Atom{x, weight}}, {});
}

SignedMeasure SignedMeasure::lebesgue(double lo, double hi) {
  return with_density(ExpressionDensity::constant(1.0), lo, hi);
}

SignedMeasure SignedMeasure::with_density(ExpressionDensity f, double lo, double hi) {
  return SignedMeasure({}, {DensitySegment{lo, hi, std::move(f), std::nullopt}});
}

bool SignedMeasure::has_atom_at(double x) const {
  const double tol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
  return std::any_of(atoms_.begin(), atoms_.end(),
                     [&](const Atom& a) { return std::abs(a.location - x) <= tol; });
}

bool SignedMeasure::locally_finite_only() const {
  return std::any_of(segments_.begin(), segments_.end(), [](const DensitySegment& s) {
    return s.unbounded() && !s.density.decays();
  });
}

SignedMeasure SignedMeasure::operator+(const SignedMeasure& other) const {
  std::vector<Atom> atoms = atoms_;
  atoms.insert(atoms.end(), other.atoms_.begin(), other.atoms_.end());
  std::vector<DensitySegment> segs = segments_;
  segs.insert(segs.end(), other.segments_.begin(), other.segments_.end());
  return SignedMeasure(std::move(atoms), std::move(segs));
}

SignedMeasure SignedMeasure::operator-(const SignedMeasure& other) const {
  return *this + other.scaled(-1.0);
}

SignedMeasure SignedMeasure::scaled(double c) const {
  if (c == 0.0) return {};
  std::vector<Atom> atoms = atoms_;
  for (Atom& a : atoms) a.weight *= c;
  std::vector<DensitySegment> segs = segments_;
  for (DensitySegment& s : segs) s.density = s.density.scaled(c);
  return SignedMeasure(std::move(atoms), std::move(segs));
}

bool approx_equal(const SignedMeasure& a, const SignedMeasure& b, double rel_tol) {
  if (a.atoms().size() != b.atoms().size() || a.segments().size() != b.segments().size())
    return false;
  for (std::size_t i = 0; i < a.atoms().size(); ++i) {
    if (!close(a.atoms()[i].location, b.atoms()[i].location, rel_tol) ||
        !close(a.atoms()[i].weight, b.atoms()[i].weight, rel_tol))
      return false;
  }
  for (std::size_t i = 0; i < a.segments().size(); ++i) {
    const DensitySegment& s = a.segments()[i];
    const DensitySegment& t = b.segments()[i];
    if (!close(s.lo, t.lo, rel_tol) || !close(s.hi, t.hi, rel_tol)) return false;
    if (!approx_equal(s.density, t.density, rel_tol)) return false;
    if (!masks_close(s.mask, t.mask, rel_tol)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Operations

Integral integrate_segment(const DensitySegment& seg, double s, double a, double b) {
  const double lo = std::max(a, seg.lo);
  const double hi = std::min(b, seg.hi);
  if (!(hi > lo)) return {};
  if (!seg.mask) return closed_form::density(seg.density, s, lo, hi);
  return masked_integral(seg.density, *seg.mask, s, lo, hi);
}

ExtendedReal eval_interval(const SignedMeasure& mu, double a, double b, bool include_left) {
  if (!(b > a)) return 0.0;
  double total = 0.0;
  for (const Atom& at : mu.atoms()) {
    const bool left_ok = at.location > a || (include_left && at.location == a);
    if (left_ok && at.location <= b) total += at.weight;
  }
  if (std::isinf(b)) {
    // A nonzero non-decaying term has non-integrable modulus on any
    // half-line, so at least one Jordan part is infinite there.
    for (const DensitySegment& s : mu.segments())
      if (s.unbounded() && !s.density.decays()) return ExtendedReal::infinity();
  }
  for (const DensitySegment& s : mu.segments()) total += integrate_segment(s, 0.0, a, b).value;
  return total;
}

ExtendedReal distribution(const SignedMeasure& mu, double x) {
  if (!(x > 0.0)) return 0.0;
  return eval_interval(mu, 0.0, x, true);
}

std::pair<SignedMeasure, SignedMeasure> jordan(const SignedMeasure& mu,
                                               const SignAnalysisOptions& opts) {
  std::vector<Atom> pos_atoms, neg_atoms;
  for (const Atom& a : mu.atoms()) {
    if (a.weight > 0.0) {
      pos_atoms.push_back(a);
    } else {
      neg_atoms.push_back({a.location, -a.weight});
    }
  }
  std::vector<DensitySegment> pos, neg;
  for (const DensitySegment& seg : mu.segments()) {
    if (seg.mask) {
      // The density keeps one sign on each mask piece.
      PeriodicMask pm{seg.mask->period, seg.mask->anchor, {}};
      PeriodicMask nm = pm;
      for (const auto& p : seg.mask->pieces) {
        const double x = seg.mask->anchor + 0.5 * (p.begin + p.end);
        const double v = seg.density(x) * p.weight;
        if (v > 0.0) {
          pm.pieces.push_back(p);
        } else if (v < 0.0) {
          nm.pieces.push_back({p.begin, p.end, -p.weight});
        }
      }
      if (!pm.pieces.empty()) pos.push_back({seg.lo, seg.hi, seg.density, pm});
      if (!nm.pieces.empty()) neg.push_back({seg.lo, seg.hi, seg.density, nm});
      continue;
    }
    const SignPattern pat = analyse_sign(seg.density, seg.lo, seg.hi, opts);
    if (pat.period) {
      PeriodicMask pm{*pat.period, seg.lo, {}};
      PeriodicMask nm = pm;
      for (const SignPiece& p : pat.pieces) {
        const PeriodicMask::Piece piece{p.lo - seg.lo, p.hi - seg.lo, 0.0};
        if (p.sign > 0) {
          pm.pieces.push_back({piece.begin, piece.end, 1.0});
        } else {
          nm.pieces.push_back({piece.begin, piece.end, -1.0});
        }
      }
      if (!pm.pieces.empty()) pos.push_back({seg.lo, seg.hi, seg.density, pm});
      if (!nm.pieces.empty()) neg.push_back({seg.lo, seg.hi, seg.density, nm});
      continue;
    }
    for (const SignPiece& p : pat.pieces) {
      if (p.sign > 0) {
        pos.push_back({p.lo, p.hi, seg.density, std::nullopt});
      } else {
        neg.push_back({p.lo, p.hi, -seg.density, std::nullopt});
      }
    }
  }
  return {SignedMeasure(std::move(pos_atoms), std::move(pos)),
          SignedMeasure(std::move(neg_atoms), std::move(neg))};
}

SignedMeasure total_variation(const SignedMeasure& mu, const SignAnalysisOptions& opts) {
  auto [pos, neg] = jordan(mu, opts);
  return pos + neg;
}

ExtendedReal total_mass(const SignedMeasure& mu) {
  return eval_interval(total_variation(mu), 0.0, kInf, true);
}

SignedMeasure tilt(const SignedMeasure& mu, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("tilt requires eps > 0");
  std::vector<Atom> atoms = mu.atoms();
  for (Atom& a : atoms) a.weight *= std::exp(-eps * a.location);
  std::vector<DensitySegment> segs = mu.segments();
  for (DensitySegment& s : segs) s.density = s.density.tilted(eps);
  return SignedMeasure(std::move(atoms), std::move(segs));
}

SignedMeasure scale_normalize(const SignedMeasure& mu, double t, double c) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("scale requires t > 0");
  if (c == 0.0 || !std::isfinite(c)) throw std::invalid_argument("normaliser must be nonzero");
  std::vector<Atom> atoms = mu.atoms();
  for (Atom& a : atoms) {
    a.location /= t;
    a.weight /= c;
  }
  std::vector<DensitySegment> segs = mu.segments();
  for (DensitySegment& s : segs) {
    s.lo /= t;
    s.hi /= t;
    s.density = s.density.dilated(t).scaled(t / c);
    if (s.mask) {
      s.mask->period /= t;
      s.mask->anchor /= t;
      for (auto& p : s.mask->pieces) {
        p.begin /= t;
        p.end /= t;
      }
    }
  }
  return SignedMeasure(std::move(atoms), std::move(segs));
}

SignedMeasure integrated_tail(const SignedMeasure& mu, double X) {
  if (!(X > 0.0) || !std::isfinite(X)) throw std::invalid_argument("integrated tail requires X > 0");
  std::vector<double> cuts{X};
  for (const Atom& a : mu.atoms())
    if (a.location > X) cuts.push_back(a.location);
  for (const DensitySegment& s : mu.segments()) {
    if (s.mask) throw UnrepresentableDensity("distribution of a periodically masked segment");
    if (s.lo > X) cuts.push_back(s.lo);
    if (s.hi > X && std::isfinite(s.hi)) cuts.push_back(s.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.push_back(kInf);

  std::vector<DensitySegment> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double u = cuts[i], v = cuts[i + 1];
    // F(t) = F(u) + sum over covering segments of G(t) - G(u), for t in [u, v).
    ExpressionDensity f = ExpressionDensity::constant(distribution(mu, u).value());
    for (const DensitySegment& s : mu.segments()) {
      if (!(s.lo <= u && s.hi >= v)) continue;
      const ExpressionDensity g = s.density.antiderivative();
      f = f + g + ExpressionDensity::constant(-g(u));
    }
    out.push_back({u, v, f, std::nullopt});
  }
  return SignedMeasure({}, std::move(out));
}

SignedMeasure restrict_to(const SignedMeasure& mu, double T) {
  if (!(T >= 0.0)) throw std::invalid_argument("restriction requires T >= 0");
  std::vector<Atom> atoms;
  for (const Atom& a : mu.atoms())
    if (a.location <= T) atoms.push_back(a);
  std::vector<DensitySegment> segs;
  for (DensitySegment s : mu.segments()) {
    if (s.lo >= T) continue;
    s.hi = std::min(s.hi, T);
    segs.push_back(std::move(s));
  }
  return SignedMeasure(std::move(atoms), std::move(segs));
}

double integrate_affine(const SignedMeasure& mu, double a, double b, double alpha, double beta) {
  double total = 0.0;
  for (const Atom& at : mu.atoms())
    if (at.location >= a && at.location <= b) total += at.weight * (alpha + beta * at.location);
  for (const DensitySegment& s : mu.segments()) {
    DensitySegment weighted = s;
    weighted.density = s.density.times_affine(alpha, beta);
    total += integrate_segment(weighted, 0.0, a, b).value;
  }
  return total;
}

}  // namespace tauber
