#pragma once
// Seeded random grammar measures for the property suites.

#include <random>
#include <vector>

#include "tauber/measure.hpp"

namespace gen {

using namespace tauber;

struct Options {
  bool integer_powers_only = false;
  /// Oscillating terms without decay get power <= 1 and frequency <= 2.
  bool tame_oscillation = false;
  bool allow_atom_at_zero = true;
};

class MeasureGen {
 public:
  explicit MeasureGen(std::uint64_t seed, Options o = {}) : rng_(seed), o_(o) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
  double signed_weight() { return (integer(0, 1) ? 1.0 : -1.0) * uniform(0.1, 2.0); }
  std::mt19937_64& engine() { return rng_; }

  Term term(double min_decay) {
    Term t;
    t.coeff = signed_weight();
    if (o_.integer_powers_only || integer(0, 3) != 0) {
      t.power = integer(0, 3);
    } else {
      const double choices[] = {-0.5, 0.5, 1.5};
      t.power = choices[integer(0, 2)];
    }
    t.decay = integer(0, 2) == 0 ? 0.0 : uniform(0.1, 1.5);
    t.decay = std::max(t.decay, min_decay);
    switch (integer(0, 2)) {
      case 0:
        break;
      case 1:
        t.osc = Oscillation::cos;
        t.freq = uniform(0.5, 3.0);
        break;
      default:
        t.osc = Oscillation::sin;
        t.freq = uniform(0.5, 3.0);
    }
    if (o_.tame_oscillation && t.oscillating() && t.decay == 0.0) {
      t.power = std::min(t.power, 1.0);
      t.freq = std::min(t.freq, 2.0);
    }
    return t;
  }

  SignedMeasure measure() {
    std::vector<Atom> atoms;
    const int n_atoms = integer(0, 3);
    for (int i = 0; i < n_atoms; ++i) {
      double x = uniform(0.0, 6.0);
      if (o_.allow_atom_at_zero && integer(0, 7) == 0) x = 0.0;
      atoms.push_back({x, signed_weight()});
    }
    std::vector<DensitySegment> segs;
    if (integer(0, 3) != 0) {
      const double lo = integer(0, 1) ? 0.0 : uniform(0.0, 1.0);
      std::vector<Term> ts;
      for (int i = integer(1, 3); i > 0; --i) ts.push_back(term(0.0));
      segs.push_back({lo, uniform(2.0, 3.5), ExpressionDensity(ts), std::nullopt});
    }
    if (integer(0, 1)) {
      const double lo = uniform(4.0, 5.0);
      std::vector<Term> ts;
      if (integer(0, 1)) {
        // Unbounded: a dominant non-oscillating term fixes the eventual sign.
        ts.push_back(Term{signed_weight(), static_cast<double>(integer(1, 2)), 0.3, Oscillation::none, 0.0});
        for (int i = integer(0, 2); i > 0; --i) {
          Term t = term(0.6);
          t.power = std::min(t.power, 1.0);
          ts.push_back(t);
        }
        segs.push_back({lo, kInf, ExpressionDensity(ts), std::nullopt});
      } else {
        for (int i = integer(1, 3); i > 0; --i) ts.push_back(term(0.0));
        segs.push_back({lo, lo + uniform(1.0, 4.0), ExpressionDensity(ts), std::nullopt});
      }
    }
    return SignedMeasure(std::move(atoms), std::move(segs));
  }

 private:
  std::mt19937_64 rng_;
  Options o_;
};

/// Atom locations and segment ends: where F may jump or kink.
inline std::vector<double> breakpoints(const SignedMeasure& mu) {
  std::vector<double> b;
  for (const Atom& a : mu.atoms()) b.push_back(a.location);
  for (const DensitySegment& s : mu.segments()) {
    b.push_back(s.lo);
    if (!s.unbounded()) b.push_back(s.hi);
  }
  return b;
}

}  // namespace gen
