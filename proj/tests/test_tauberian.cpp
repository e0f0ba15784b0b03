#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tauber/errors.hpp"
#include "tauber/laplace.hpp"
#include "tauber/tauberian.hpp"

using namespace tauber;
using std::numbers::pi;

namespace {

ExpressionDensity wobble() {
  return ExpressionDensity({Term{0.5, 1, 0, Oscillation::none, 0}, Term{1, 1, 0, Oscillation::cos, 1}});
}

SignedMeasure wobble_measure() { return SignedMeasure::with_density(wobble()); }

const VerdictReport& child(const VerdictReport& r, const std::string& q) {
  const VerdictReport* c = r.child(q);
  REQUIRE_MESSAGE(c != nullptr, q);
  return *c;
}

}  // namespace

TEST_CASE("default grids") {
  const auto tau = default_tau_grid();
  CHECK(tau.size() == 25);
  CHECK(tau.front() == 1.0);
  CHECK(tau.back() == doctest::Approx(1e-6).epsilon(1e-14));
  CHECK(default_t_grid().back() == doctest::Approx(1e6).epsilon(1e-14));
  const auto h = default_window_h_grid();
  CHECK(h.size() == 7);
  CHECK(h.front() == doctest::Approx(0.1));
}

TEST_CASE("gamma function accuracy") {
  double fact = 1.0;
  for (int k = 0; k <= 15; ++k) {
    if (k > 0) fact *= k;
    CHECK(std::abs(std::tgamma(k + 1.0) - fact) <= 1e-12 * fact);
  }
  CHECK(std::abs(std::tgamma(0.5) - std::sqrt(pi)) <= 1e-12 * std::sqrt(pi));
}

TEST_CASE("index from the transform") {
  const auto w = rv_index_psi(wobble_measure());
  CHECK(w.rho_hat == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(w.dispersion <= 0.05);
  CHECK(w.per_parameter.size() == 4);

  const auto leb = rv_index_psi(SignedMeasure::lebesgue());
  CHECK(leb.rho_hat == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rv_index_psi(SignedMeasure::dirac(0.0)).rho_hat == 0.0);

  // delta_1 - 2 delta_2: Psi(0) = -1 but Psi(1) > 0.
  CHECK_THROWS_AS(rv_index_psi(SignedMeasure::dirac(1.0) - SignedMeasure::dirac(2.0, 2.0)), SignChangeNearZero);
}

TEST_CASE("index from the distribution function") {
  CHECK(rv_index_F(SignedMeasure::lebesgue()).rho_hat == doctest::Approx(1.0).epsilon(1e-12));
  std::vector<double> t4;
  for (int k = 0; k <= 16; ++k) t4.push_back(std::pow(10.0, k / 4.0));
  const auto w = rv_index_F(wobble_measure(), default_lambda_grid(), t4);
  CHECK(w.rho_hat == doctest::Approx(2.0).epsilon(0.05 / 2));
  CHECK(w.dispersion <= 0.05);
  for (double rho : {0.5, 1.0, 2.0, 3.7}) {
    CHECK(rv_index_F(gamma_limit_measure(rho).realised).rho_hat == doctest::Approx(rho).epsilon(1e-12));
  }
  // A finite signed measure with zero total mass: F vanishes near infinity.
  CHECK_THROWS_AS(rv_index_F(SignedMeasure::dirac(1.0) - SignedMeasure::dirac(2.0)), SignChangeNearInfinity);
}

TEST_CASE("ratio condition") {
  const auto c = tauberian_condition_ratio(wobble_measure());
  // Frozen: the ratio tends to (1/2) / ((pi/3 + 2 sqrt3) / (2 pi)) = 0.69638...
  const double limit = 0.5 / ((pi / 3 + 2 * std::sqrt(3.0)) / (2 * pi));
  CHECK(c.statistic == doctest::Approx(limit).epsilon(1e-4));
  CHECK(c.statistic > 1.0 / 3.0);
  CHECK(c.status == Status::pass);

  CHECK(tauberian_condition_ratio(SignedMeasure::lebesgue()).statistic == 1.0);
  CHECK(tauberian_condition_ratio(SignedMeasure::with_density(ExpressionDensity::monomial(1, 2, 1))).statistic ==
        1.0);

  const auto d = tauberian_condition_ratio(SignedMeasure::dirac(1.0) - SignedMeasure::dirac(2.0, 0.5));
  CHECK(d.statistic == doctest::Approx(1.0 / 3.0).epsilon(1e-5));
}

TEST_CASE("window condition") {
  const auto c = tauberian_condition_window(wobble_measure(), 1.0);
  CHECK(c.statistic < 1e-3);
  CHECK(c.status == Status::pass);
  CHECK(tauberian_condition_window(SignedMeasure::dirac(1.0), 1.0).statistic == 0.0);
  CHECK(tauberian_condition_window(SignedMeasure::dirac(1.0) - SignedMeasure::dirac(2.0, 0.5), 1.0).statistic ==
        0.0);
}

TEST_CASE("asymptotic ratio") {
  const auto leb = asymptotic_ratio(SignedMeasure::lebesgue(), 1.0);
  for (const auto& [t, r] : leb.table) CHECK(r == doctest::Approx(1.0).epsilon(1e-13));

  std::vector<double> t4;
  for (int k = 0; k <= 12; ++k) t4.push_back(std::pow(10.0, k / 4.0));
  const auto w = asymptotic_ratio(wobble_measure(), 2.0, t4);
  CHECK(std::abs(w.windowed_mean - 1.0) < 0.02);

  for (double rho : {0.5, 2.0, 3.7}) {
    const auto g = asymptotic_ratio(gamma_limit_measure(rho).realised, rho);
    for (const auto& [t, r] : g.table) CHECK(r == doctest::Approx(1.0).epsilon(1e-10));
  }
  const auto z = asymptotic_ratio(SignedMeasure::dirac(2.0), 0.0, {1.0, 3.0});
  CHECK(z.skipped == std::vector<double>{1.0});
}

TEST_CASE("gamma-type limit") {
  CHECK(gamma_limit_measure(0.0).realised == SignedMeasure::dirac(0.0));
  CHECK(gamma_limit_measure(1.0).realised == SignedMeasure::lebesgue());
  const auto two = gamma_limit_measure(2.0).realised;
  CHECK(distribution(two, 3.0).value() == doctest::Approx(4.5).epsilon(1e-14));
  for (double rho : {0.0, 0.5, 1.0, 2.0, 3.7})
    for (double l : {0.1, 1.0, 10.0})
      CHECK(std::abs(psi(gamma_limit_measure(rho).realised, l) - std::pow(l, -rho)) <= 1e-8 * std::pow(l, -rho));
  CHECK_THROWS(gamma_limit_measure(-1.0));
}

TEST_CASE("rescaled family") {
  auto inv = [](long long n) { return 1.0 / static_cast<double>(n); };
  const auto leb = rescaled_family(SignedMeasure::lebesgue(), inv);
  for (long long n : {1LL, 7LL, 1000LL})
    CHECK(eval_interval(leb.rule(n), 0.5, 2.0).value() == doctest::Approx(1.5).epsilon(1e-13));

  const auto lin = rescaled_family(SignedMeasure::with_density(ExpressionDensity::monomial(1.0, 1.0)), inv, 2.0);
  CHECK(approx_equal(lin.rule(10), lin.limit, 1e-13));

  const auto w = rescaled_family(wobble_measure(), inv);
  for (long long n : {3LL, 40LL})
    for (double x : {0.5, 2.0}) {
      const double tau = 1.0 / static_cast<double>(n);
      CHECK(distribution(w.rule(n), x).value() ==
            doctest::Approx(distribution(wobble_measure(), x / tau).value() / psi(wobble_measure(), tau))
                .epsilon(1e-10));
    }

  // Psi vanishes at tau = ln 2 for delta_1 - 2 delta_2... use exp(-tau) = 2 exp(-2 tau).
  const auto z = rescaled_family(SignedMeasure::dirac(1.0) - SignedMeasure::dirac(2.0, 2.0),
                                 [](long long) { return std::log(2.0); });
  const double v = psi(SignedMeasure::dirac(1.0) - SignedMeasure::dirac(2.0, 2.0), std::log(2.0));
  if (v == 0.0) {
    CHECK_THROWS_AS(z.rule(1), ZeroTransform);
  } else {
    CHECK(std::abs(v) < 1e-15);
  }
  const auto exact_zero = rescaled_family(SignedMeasure{}, inv);
  CHECK_THROWS_AS(exact_zero.rule(1), ZeroTransform);
}

TEST_CASE("slow variation") {
  const auto leb = slow_variation_diagnostic(SignedMeasure::lebesgue(), 1.0);
  for (const auto& row : leb.ratios)
    for (double r : row) CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(leb.status == Status::pass);
  const auto w = slow_variation_diagnostic(wobble_measure(), 2.0);
  CHECK(w.status == Status::pass);
  for (double d : w.tail_deviation) CHECK(d < 0.01);
  const auto g = slow_variation_diagnostic(gamma_limit_measure(3.0).realised, 3.0);
  for (const auto& [t, l] : g.samples) CHECK(l == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("tail start") {
  const double X = choose_tail_start(wobble_measure());
  CHECK(X > 5.46);
  CHECK(X < 7.0);
  CHECK(choose_tail_start(SignedMeasure::lebesgue()) == 1.0);
}

TEST_CASE("pipeline, transform to distribution") {
  const auto r = karamata_pipeline(wobble_measure(), Direction::psi_to_F);
  for (const auto& c : r.children) CHECK_MESSAGE(c.status == Status::pass, c.quantity, " ", c.diagnostic);
  CHECK(r.status == Status::pass);
  CHECK(r.statistic == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(r.details.at("hypotheses_pass") == true);

  CHECK(karamata_pipeline(SignedMeasure::lebesgue(), Direction::psi_to_F).status == Status::pass);
}

TEST_CASE("pipeline, distribution to transform") {
  for (const auto& mu : {SignedMeasure::lebesgue(), gamma_limit_measure(0.5).realised, wobble_measure()}) {
    const auto r = karamata_pipeline(mu, Direction::F_to_psi);
    for (const auto& c : r.children) CHECK_MESSAGE(c.status == Status::pass, c.quantity, " ", c.diagnostic);
    CHECK(r.status == Status::pass);
    CHECK(child(child(r, "integrated_tail"), "integrated_tail_identity").statistic < 1e-8);
  }
}
