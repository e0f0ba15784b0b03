#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "oracle.hpp"
#include "tauber/errors.hpp"
#include "tauber/measure.hpp"
#include "tauber/measure_json.hpp"

using namespace tauber;
using std::numbers::pi;

namespace {

ExpressionDensity wobble() {
  return ExpressionDensity({Term{0.5, 1, 0, Oscillation::none, 0}, Term{1, 1, 0, Oscillation::cos, 1}});
}

double F_wobble(double t) { return t * t / 4 + t * std::sin(t) + std::cos(t) - 1; }

}  // namespace

TEST_CASE("atoms and intervals") {
  const auto mu = SignedMeasure::dirac(1.0) - SignedMeasure::dirac(1.5);
  CHECK(eval_interval(mu, 0.5, 1.2).value() == 1.0);
  CHECK(eval_interval(mu, 0.5, 2.0).value() == 0.0);
  CHECK(eval_interval(mu, 1.0, 2.0).value() == -1.0);
  CHECK(eval_interval(mu, 1.0, 2.0, true).value() == 0.0);
  CHECK(mu.atoms().size() == 2);

  const auto cancelled = SignedMeasure::dirac(1.0) - SignedMeasure::dirac(1.0);
  CHECK(cancelled.is_zero());
  CHECK_THROWS_AS(SignedMeasure::dirac(-1.0), std::invalid_argument);
}

TEST_CASE("lebesgue intervals") {
  const auto leb = SignedMeasure::lebesgue();
  CHECK(eval_interval(leb, 0.25, 3.0).value() == doctest::Approx(2.75).epsilon(1e-15));
  CHECK(eval_interval(leb, 1.0, kInf).is_infinite());
  CHECK(total_mass(leb).is_infinite());
  CHECK(leb.locally_finite_only());
}

TEST_CASE("wobble density on (0, 2 pi] is pi squared") {
  const auto mu = SignedMeasure::with_density(wobble());
  CHECK(eval_interval(mu, 0.0, 2 * pi).value() == doctest::Approx(pi * pi).epsilon(1e-13));
  for (double t : {0.3, 1.0, 2.5, 7.0, 40.0}) {
    CHECK(distribution(mu, t).value() == doctest::Approx(F_wobble(t)).epsilon(1e-12));
  }
  CHECK(distribution(mu, 0.0).value() == 0.0);
  // Both Jordan parts are infinite on the half line: +inf by convention.
  CHECK(eval_interval(mu, 0.0, kInf).is_infinite());
}

TEST_CASE("jordan of atoms") {
  const auto mu = SignedMeasure::dirac(1.0) - SignedMeasure::dirac(2.0);
  const auto [pos, neg] = jordan(mu);
  CHECK(pos == SignedMeasure::dirac(1.0));
  CHECK(neg == SignedMeasure::dirac(2.0));
  CHECK(total_variation(mu) == SignedMeasure::dirac(1.0) + SignedMeasure::dirac(2.0));
  CHECK(total_variation(SignedMeasure{}).is_zero());
}

TEST_CASE("jordan of wobble on [0, 2 pi]") {
  const auto mu = SignedMeasure::with_density(wobble(), 0.0, 2 * pi);
  const auto [pos, neg] = jordan(mu);
  REQUIRE(neg.segments().size() == 1);
  CHECK(neg.segments()[0].lo == doctest::Approx(2 * pi / 3).epsilon(1e-12));
  CHECK(neg.segments()[0].hi == doctest::Approx(4 * pi / 3).epsilon(1e-12));
  REQUIRE(pos.segments().size() == 2);
  CHECK(pos.segments()[0].lo == 0.0);
  CHECK(pos.segments()[0].hi == doctest::Approx(2 * pi / 3).epsilon(1e-12));
  CHECK(pos.segments()[1].hi == doctest::Approx(2 * pi).epsilon(1e-15));

  // Negative-part mass: 2 sqrt3 pi / 3 - pi^2 / 3 ... evaluated symbolically.
  const double neg_mass = std::sqrt(3.0) * pi - pi * pi / 3.0;
  CHECK(total_mass(neg).value() == doctest::Approx(neg_mass).epsilon(1e-11));
  CHECK(total_mass(pos).value() - total_mass(neg).value() == doctest::Approx(pi * pi).epsilon(1e-11));
}

TEST_CASE("restricted norm of wobble") {
  // Frozen: int_0^{2pi} x |1/2 + cos x| dx = pi^2 + 2 (sqrt3 pi - pi^2/3) = 14.1726643191...
  const auto mu = restrict_to(SignedMeasure::with_density(wobble()), 2 * pi);
  const double expected = pi * pi + 2.0 * (std::sqrt(3.0) * pi - pi * pi / 3.0);
  CHECK(expected == doctest::Approx(14.1726643191).epsilon(1e-10));
  CHECK(total_mass(mu).value() == doctest::Approx(expected).epsilon(1e-11));
  const std::vector<double> breaks{0, 2 * pi / 3, 4 * pi / 3, 2 * pi};
  const double brute = oracle::integrate_broken(
      [](double x) { return std::abs(x * (0.5 + std::cos(x))); }, breaks);
  CHECK(total_mass(mu).value() == doctest::Approx(brute).epsilon(1e-12));
}

TEST_CASE("jordan of wobble on the half line is periodic") {
  const auto mu = SignedMeasure::with_density(wobble());
  const auto [pos, neg] = jordan(mu);
  REQUIRE(pos.segments().size() == 1);
  REQUIRE(neg.segments().size() == 1);
  REQUIRE(pos.segments()[0].mask.has_value());
  CHECK(pos.segments()[0].mask->period == doctest::Approx(2 * pi));
  for (double x : {0.1, 2.2, 3.0, 5.0, 100.0, 1234.5}) {
    const double f = wobble()(x);
    CHECK(pos.segments()[0](x) == doctest::Approx(std::max(f, 0.0)).epsilon(1e-13));
    CHECK(neg.segments()[0](x) == doctest::Approx(std::max(-f, 0.0)).epsilon(1e-13));
    CHECK(pos.segments()[0](x) * neg.segments()[0](x) == 0.0);
  }
  // Mass of |mu| on (0, 4 pi].
  const double per = pi * pi + 2.0 * (std::sqrt(3.0) * pi - pi * pi / 3.0);
  const auto absmu = total_variation(mu);
  const double two_periods = eval_interval(absmu, 0.0, 4 * pi).value();
  const double brute = oracle::integrate_broken(
      [](double x) { return std::abs(x * (0.5 + std::cos(x))); },
      std::vector<double>{0, 2 * pi / 3, 4 * pi / 3, 2 * pi, 8 * pi / 3, 10 * pi / 3, 4 * pi});
  CHECK(two_periods == doctest::Approx(brute).epsilon(1e-12));
  CHECK(two_periods > 2 * per);
}

TEST_CASE("jordan of a nonnegative density") {
  const auto mu = SignedMeasure::with_density(ExpressionDensity::monomial(1.0, 0.0, 1.0));
  const auto [pos, neg] = jordan(mu);
  CHECK(pos == mu);
  CHECK(neg.is_zero());
}

TEST_CASE("eventual sign on an unbounded segment") {
  // x e^{-x} - 3 e^{-2x}: negative near 0, positive past the root of x = 3 e^{-x}.
  const ExpressionDensity f({Term{1, 1, 1, Oscillation::none, 0}, Term{-3, 0, 2, Oscillation::none, 0}});
  const auto mu = SignedMeasure::with_density(f);
  const auto [pos, neg] = jordan(mu);
  REQUIRE(neg.segments().size() == 1);
  const double root = neg.segments()[0].hi;
  CHECK(root * std::exp(root) == doctest::Approx(3.0).epsilon(1e-11));
  CHECK(total_mass(mu).is_finite());
  const double tv = total_mass(mu).value();
  const double brute = oracle::integrate(
                           [&](double x) { return std::abs(f(x)); }, 0.0, root, 2000) +
                       oracle::integrate([&](double x) { return std::abs(f(x)); }, root, 60.0, 4000);
  CHECK(tv == doctest::Approx(brute).epsilon(1e-11));
}

TEST_CASE("tilt") {
  const auto d = tilt(SignedMeasure::dirac(1.0), 1.0);
  REQUIRE(d.atoms().size() == 1);
  CHECK(d.atoms()[0].weight == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));

  const auto leb = tilt(SignedMeasure::lebesgue(), 0.25);
  CHECK(total_mass(leb).value() == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(tilt(SignedMeasure{}, 2.0).is_zero());
  CHECK_THROWS(tilt(leb, 0.0));

  // Decays add exactly for dyadic eps; atom weights pick up one rounding per exp.
  const auto w = SignedMeasure::with_density(wobble());
  CHECK(tilt(tilt(w, 0.25), 0.5) == tilt(w, 0.75));
  const auto a = w + SignedMeasure::dirac(2.0, -1.0);
  CHECK(approx_equal(tilt(tilt(a, 0.25), 0.5), tilt(a, 0.75), 1e-14));
}

TEST_CASE("scale_normalize") {
  CHECK(scale_normalize(SignedMeasure::dirac(2.0), 2.0, 1.0) == SignedMeasure::dirac(1.0));
  const auto flip = scale_normalize(SignedMeasure::dirac(1.0) - SignedMeasure::dirac(2.0), 1.0, -1.0);
  CHECK(flip == SignedMeasure::dirac(2.0) - SignedMeasure::dirac(1.0));
  const auto leb = scale_normalize(SignedMeasure::lebesgue(), 3.0, 2.0);
  CHECK(eval_interval(leb, 0.0, 1.0).value() == doctest::Approx(1.5).epsilon(1e-15));

  const auto w = SignedMeasure::with_density(wobble());
  const auto nu = scale_normalize(w, 2.5, 0.75);
  for (auto [a, b] : {std::pair{0.1, 0.7}, std::pair{1.0, 5.0}}) {
    CHECK(eval_interval(nu, a, b).value() ==
          doctest::Approx(eval_interval(w, 2.5 * a, 2.5 * b).value() / 0.75).epsilon(1e-12));
  }
  CHECK(approx_equal(scale_normalize(nu, 1 / 2.5, 1 / 0.75), w, 1e-14));
}

TEST_CASE("integrated_tail") {
  const auto xi = integrated_tail(SignedMeasure::lebesgue(), 1.0);
  for (double x : {0.5, 1.0, 2.0, 7.5}) {
    const double expect = x >= 1.0 ? (x * x - 1) / 2 : 0.0;
    CHECK(distribution(xi, x).value() == doctest::Approx(expect).epsilon(1e-14));
  }
  const auto xi2 = integrated_tail(SignedMeasure::dirac(0.5), 1.0);
  for (double x : {0.25, 1.0, 3.0}) {
    CHECK(distribution(xi2, x).value() == doctest::Approx(std::max(0.0, x - 1.0)).epsilon(1e-14));
  }
  // Wobble: density of xi is F(t) on [X, inf).
  const auto xi3 = integrated_tail(SignedMeasure::with_density(wobble()), 6.0);
  REQUIRE(xi3.segments().size() == 1);
  for (double t : {6.0, 7.3, 20.0}) CHECK(xi3.segments()[0](t) == doctest::Approx(F_wobble(t)).epsilon(1e-12));
}

TEST_CASE("restrict_to") {
  const auto leb = restrict_to(SignedMeasure::lebesgue(), 3.0);
  CHECK(total_mass(leb).value() == doctest::Approx(3.0));
  CHECK(restrict_to(SignedMeasure::dirac(5.0), 3.0).is_zero());
}

TEST_CASE("atom at zero and the distribution identity") {
  const auto mu = SignedMeasure::dirac(0.0) + SignedMeasure::lebesgue(0.0, 2.0);
  CHECK(distribution(mu, 1.0).value() == doctest::Approx(2.0));
  // For a > 0 the identity holds; with a = 0 the atom sits on the left edge.
  CHECK(distribution(mu, 1.5).value() - distribution(mu, 0.5).value() ==
        doctest::Approx(eval_interval(mu, 0.5, 1.5).value()));
  CHECK(eval_interval(mu, 0.0, 1.0).value() == doctest::Approx(1.0));
  CHECK(eval_interval(mu, 0.0, 1.0, true).value() == doctest::Approx(2.0));
}

TEST_CASE("integrate_affine") {
  const auto mu = SignedMeasure::lebesgue() + SignedMeasure::dirac(1.0, 2.0);
  // int_0^2 (1 + x) dx + 2 * (1 + 1) = 4 + 4
  CHECK(integrate_affine(mu, 0.0, 2.0, 1.0, 1.0) == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("json round trip") {
  const auto mu = SignedMeasure::with_density(wobble()) + SignedMeasure::dirac(1.0, -1.0) +
                  SignedMeasure::with_density(ExpressionDensity::monomial(2.0, 0.5, 1.0), 1.0, 3.0);
  const auto back = measure_from_json(to_json(mu));
  CHECK(back == mu);
  const auto jor = total_variation(SignedMeasure::with_density(wobble()));
  CHECK(measure_from_json(to_json(jor)) == jor);

  const json spec_example = json::parse(R"({"atoms":[{"x":1.0,"w":-1.0}],
    "segments":[{"lo":0,"hi":null,"terms":[{"c":0.5,"k":1,"a":0,"osc":null},
                                           {"c":1,"k":1,"a":0,"osc":{"cos":1.0}}]}]})");
  CHECK(measure_from_json(spec_example) ==
        SignedMeasure::with_density(wobble()) + SignedMeasure::dirac(1.0, -1.0));

  const json bad = json::parse(R"({"segments":[{"lo":0,"hi":null,"terms":[{"c":1,"k":-2,"a":0}]}]})");
  try {
    (void)measure_from_json(bad);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "measure.segments[0].terms[0].k");
  }
}
