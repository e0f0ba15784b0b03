#include <doctest.h>

#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

#include "oracle.hpp"
#include "tauber/errors.hpp"
#include "tauber/laplace.hpp"

using namespace tauber;
using std::numbers::pi;

namespace {

ExpressionDensity wobble() {
  return ExpressionDensity({Term{0.5, 1, 0, Oscillation::none, 0}, Term{1, 1, 0, Oscillation::cos, 1}});
}

// Psi of x(1/2 + cos x) at tau: 1/(2 tau^2) + (tau^2 - 1)/(tau^2 + 1)^2.
double psi_wobble(double t) { return 0.5 / (t * t) + (t * t - 1) / ((t * t + 1) * (t * t + 1)); }

}  // namespace

TEST_CASE("transform of the wobble density") {
  const auto mu = SignedMeasure::with_density(wobble());
  CHECK(psi(mu, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  for (double t : {0.01, 0.1, 0.5, 2.0, 10.0}) {
    CHECK(psi(mu, t) == doctest::Approx(psi_wobble(t)).epsilon(1e-12));
    const double closed = (3 * std::pow(t, 4) + 1) / (2 * std::pow(t * t * t + t, 2));
    CHECK(psi(mu, t) == doctest::Approx(closed).epsilon(1e-12));
  }
}

TEST_CASE("transform of |wobble|") {
  const auto mu = SignedMeasure::with_density(wobble());
  // Frozen from an independent 50-digit evaluation.
  CHECK(psi_abs(mu, 1.0) == doctest::Approx(0.694109995176937).epsilon(1e-12));
  std::vector<double> breaks{0.0};
  for (int k = 0; k < 20; ++k) {
    breaks.push_back(2 * pi * k + 2 * pi / 3);
    breaks.push_back(2 * pi * k + 4 * pi / 3);
    breaks.push_back(2 * pi * (k + 1));
  }
  const double brute = oracle::integrate_broken(
      [](double x) { return std::abs(x * (0.5 + std::cos(x))) * std::exp(-x); }, breaks, 400);
  CHECK(psi_abs(mu, 1.0) == doctest::Approx(brute).epsilon(1e-12));
}

TEST_CASE("Example 2.6 transforms") {
  const double x = 1.0;
  for (int n : {1, 10, 1000}) {
    const auto mu = SignedMeasure::dirac(x) - SignedMeasure::dirac(x + 1.0 / n);
    for (double l : {0.1, 1.0, 5.0}) {
      CHECK(psi(mu, l) == doctest::Approx(std::exp(-l * x) - std::exp(-l * (x + 1.0 / n))).epsilon(1e-14));
      CHECK(psi_abs(mu, l) == doctest::Approx(std::exp(-l * x) + std::exp(-l * (x + 1.0 / n))).epsilon(1e-14));
    }
  }
}

TEST_CASE("elementary transforms") {
  const auto leb = SignedMeasure::lebesgue();
  for (double l : {0.01, 1.0, 7.0}) CHECK(psi(leb, l) == doctest::Approx(1 / l).epsilon(1e-15));
  const auto g = SignedMeasure::with_density(ExpressionDensity::monomial(1.0, 5.0));
  CHECK(psi(g, 2.0) == doctest::Approx(120.0 / 64.0).epsilon(1e-14));
  // Non-integer power: x^{-1/2} -> sqrt(pi / lambda).
  const auto h = SignedMeasure::with_density(ExpressionDensity::monomial(1.0, -0.5));
  CHECK(psi(h, 4.0) == doctest::Approx(std::sqrt(pi / 4.0)).epsilon(1e-14));
  CHECK_THROWS_AS(psi(leb, 0.0), DivergentTransform);
  CHECK_THROWS_AS(psi(leb, -1.0), DivergentTransform);
}

TEST_CASE("evaluator backends agree") {
  const auto mu = SignedMeasure::with_density(wobble()) + SignedMeasure::dirac(0.5, -2.0) +
                  SignedMeasure::with_density(ExpressionDensity::monomial(1.5, 0.5, 0.2), 1.0, 4.0);
  const TransformEvaluator closed(mu);
  const TransformEvaluator quad(mu, Backend::quadrature);
  for (double l : {0.05, 0.3, 1.0, 10.0}) {
    const TransformValue c = closed.evaluate(l);
    const TransformValue q = quad.evaluate(l);
    CHECK(c.error_bound == 0.0);
    CHECK(q.value == doctest::Approx(c.value).epsilon(1e-9));
    CHECK(std::abs(q.value - c.value) <= std::max(1e-8 * std::abs(c.value), 1e-10));
    CHECK(q.error_bound <= std::max(1e-12 * std::abs(q.value), 1e-10));
  }
  CHECK(psi_abs(quad, 1.0) == doctest::Approx(psi_abs(closed, 1.0)).epsilon(1e-9));
}

TEST_CASE("cache is consistent under concurrent use") {
  const TransformEvaluator ev(SignedMeasure::with_density(wobble()));
  std::vector<std::thread> pool;
  std::vector<double> out(8);
  for (int i = 0; i < 8; ++i)
    pool.emplace_back([&, i] { out[static_cast<std::size_t>(i)] = psi(ev, 0.5) + psi_abs(ev, 0.5); });
  for (auto& t : pool) t.join();
  for (double v : out) CHECK(v == out.front());
}

TEST_CASE("oscillating fractional powers") {
  // x = u^2 makes the oracle integrands smooth.
  const double lambda = 0.7;
  const auto finite = SignedMeasure::with_density(ExpressionDensity({Term{1, 0.5, 0, Oscillation::cos, 2}}), 0, 3);
  const double want = oracle::integrate(
      [&](double u) { return 2 * u * u * std::cos(2 * u * u) * std::exp(-lambda * u * u); }, 0, std::sqrt(3.0));
  CHECK(psi(finite, lambda) == doctest::Approx(want).epsilon(1e-11));

  const auto tail = SignedMeasure::with_density(ExpressionDensity({Term{1, -0.5, 0.2, Oscillation::sin, 3}}), 0, kInf);
  const double want_tail = oracle::integrate(
      [&](double u) { return 2 * std::sin(3 * u * u) * std::exp(-(lambda + 0.2) * u * u); }, 0, 8, 20000);
  CHECK(psi(tail, lambda) == doctest::Approx(want_tail).epsilon(1e-11));
}

TEST_CASE("membership") {
  CHECK(check_membership(SignedMeasure::lebesgue()).status == Membership::member);
  CHECK(check_membership(SignedMeasure::dirac(1) - SignedMeasure::dirac(2)).status == Membership::member);
  CHECK(check_membership(SignedMeasure::with_density(ExpressionDensity::monomial(1, 5))).status ==
        Membership::member);
}

TEST_CASE("tilt identity") {
  CHECK(tilt_identity_residual(SignedMeasure::dirac(1.0), 1.0, 1.0) <= 1e-16);
  CHECK(tilt_identity_residual(SignedMeasure::with_density(wobble()), 0.5, 0.5) <= 1e-10);
  CHECK(psi(tilt(SignedMeasure::with_density(wobble()), 0.5), 0.5) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(tilt_identity_residual(SignedMeasure::lebesgue(), 0.3, 0.2) <= 1e-14);
}
