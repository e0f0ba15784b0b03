#include <doctest.h>

#include <cmath>

#include "sequences.hpp"
#include "tauber/convergence.hpp"
#include "tauber/laplace.hpp"

using namespace tauber;
using fixtures::constant;
using fixtures::dipole;
using fixtures::mollified_delta;

namespace {

ExpressionDensity wobble() {
  return ExpressionDensity({Term{0.5, 1, 0, Oscillation::none, 0}, Term{1, 1, 0, Oscillation::cos, 1}});
}

const VerdictReport& child(const VerdictReport& r, const std::string& q) {
  const VerdictReport* c = r.child(q);
  REQUIRE(c != nullptr);
  return *c;
}

}  // namespace

TEST_CASE("grids") {
  const auto ns = geometric_index_grid(10000);
  CHECK(ns.size() == 17);
  CHECK(ns.front() == 1);
  CHECK(ns[4] == 10);
  CHECK(ns.back() == 10000);
  CHECK(geometric_index_grid(500).back() == 500);
  const auto h = default_h_grid(10000);
  CHECK(h.front() == 0.5);
  CHECK(h.back() >= 1e-3);
  CHECK(h.back() / 2 < 1e-3);
  const auto hats = hat_basis({2.0, 0.5, 1.0});
  REQUIRE(hats.size() == 3);
  CHECK(hats[0].half_width == 0.25);
}

TEST_CASE("hat integrals") {
  const Hat h{1.0, 0.25};
  CHECK(integrate_hat(SignedMeasure::dirac(1.0), h) == 1.0);
  CHECK(integrate_hat(SignedMeasure::dirac(1.125), h) == doctest::Approx(0.5));
  CHECK(integrate_hat(SignedMeasure::lebesgue(), h) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(integrate_hat(SignedMeasure::dirac(0.0), Hat{0.0, 0.5}) == 1.0);
}

TEST_CASE("vague convergence") {
  MeasureSequence shift{"shift",
                        [](long long n) { return SignedMeasure::dirac(1.0 + 1.0 / static_cast<double>(n)); },
                        SignedMeasure::dirac(1.0),
                        {}};
  CHECK(vague_test(shift, hat_basis({0.5, 1.0, 2.0}), 10000, 1e-3).status == Status::pass);
  CHECK(vague_test(dipole(1.0), hat_basis({0.5, 1.0, 2.0}), 10000, 1e-3).status == Status::pass);
  const auto c = constant(SignedMeasure::with_density(wobble(), 0.0, 5.0));
  const auto r = vague_test(c, hat_basis({0.5, 1.0, 2.0}), 1000, 0.0);
  CHECK(r.status == Status::pass);
  CHECK(r.statistic == 0.0);
}

TEST_CASE("bounded transforms") {
  const auto r = bounded_laplace_test(dipole(1.0), {1.0}, 10000, 1e6);
  CHECK(r.status == Status::pass);
  CHECK(r.statistic == doctest::Approx(2 * std::exp(-1.0)).epsilon(1e-8));

  MeasureSequence heavy{"heavy",
                        [](long long n) { return SignedMeasure::dirac(1.0, static_cast<double>(n)); },
                        SignedMeasure::dirac(1.0),
                        {}};
  const auto h = bounded_laplace_test(heavy, {1.0}, 10000, 1e6);
  CHECK(h.status == Status::fail);
  REQUIRE(h.witnesses.size() == 1);
  CHECK(h.witnesses[0].params.at("n") == 10000);
  CHECK(h.witnesses[0].params.at("lambda") == 1.0);
  CHECK(bounded_laplace_test(constant(SignedMeasure::lebesgue()), {1.0}, 100, 1e6).status == Status::pass);
}

TEST_CASE("right-equicontinuity") {
  const auto r = right_equicontinuity_test(dipole(1.0), 1.0, 0.1, default_h_grid(10000), 10000);
  CHECK(r.status == Status::fail);
  CHECK(r.statistic == 1.0);
  for (const auto& w : r.witnesses) {
    CHECK(w.value == 1.0);
    CHECK(w.params.at("n") >= 1.0 / w.params.at("delta"));
  }
  const auto c = constant(SignedMeasure::dirac(1.0) - SignedMeasure::dirac(2.0));
  CHECK(right_equicontinuity_test(c, 1.5, 0.1, default_h_grid(1000), 1000).status == Status::pass);

  // Densities bounded by M = 3 pass once delta < eps / M.
  MeasureSequence bounded{"bounded",
                          [](long long n) {
                            return SignedMeasure::with_density(
                                ExpressionDensity::constant(3.0 * (1.0 - 1.0 / static_cast<double>(n))));
                          },
                          SignedMeasure{},
                          {}};
  const auto b = right_equicontinuity_test(bounded, 0.7, 0.1, default_h_grid(10000), 10000);
  CHECK(b.status == Status::pass);
  CHECK(b.details.at("h").get<double>() <= 0.1 / 3);
  CHECK(b.details.at("h").get<double>() > 0.1 / 3 / 4);
}

TEST_CASE("distribution convergence") {
  const auto f = F_convergence_test(dipole(1.0), {1.0}, 10000, 1e-3);
  CHECK(f.status == Status::fail);
  CHECK(f.statistic == 1.0);
  CHECK(F_convergence_test(mollified_delta(), {0.5, 2.0}, 10000, 1e-3).status == Status::pass);
  CHECK(F_convergence_test(constant(SignedMeasure::dirac(1.0)), {0.5, 2.0}, 100, 0.0).status ==
        Status::pass);
  // Points inside the exceptional set are skipped.
  const auto s = F_convergence_test(mollified_delta(), {1.0}, 100, 1e-3);
  CHECK(s.status == Status::inconclusive);
}

TEST_CASE("continuity points") {
  const auto mu = SignedMeasure::dirac(1) - SignedMeasure::dirac(2);
  CHECK_FALSE(continuity_point_test(mu, 1.0));
  CHECK(continuity_point_test(mu, 1.5));
  CHECK(continuity_point_test(SignedMeasure::with_density(wobble()), 1.0));
}

TEST_CASE("counterexample pattern") {
  ConvergenceConfig cfg;
  cfg.tol = 1e-6;
  const auto r = continuity_forward(dipole(1.0), 1.0, cfg);
  CHECK(child(r, "psi_convergence").status == Status::pass);
  CHECK(child(r, "bounded_laplace").status == Status::pass);
  CHECK(child(r, "continuity_point").status == Status::pass);
  CHECK(child(r, "right_equicontinuity").status == Status::fail);
  CHECK(child(r, "F_convergence").status == Status::fail);
  CHECK(r.status == Status::fail);
  CHECK(r.details.at("pattern") == "hypothesis-fail, conclusion-fail");
}

TEST_CASE("forward direction on mollified deltas") {
  ConvergenceConfig cfg;
  const auto r = continuity_forward(mollified_delta(), 2.0, cfg);
  for (const auto& c : r.children) CHECK_MESSAGE(c.status == Status::pass, c.quantity);
  CHECK(r.status == Status::pass);
  cfg.skip_equicontinuity = true;
  const auto s = continuity_forward(mollified_delta(), 2.0, cfg);
  CHECK(s.status == Status::pass);
  CHECK(child(s, "right_equicontinuity").status == Status::skipped);
  CHECK(s.details.at("hypotheses_pass") == true);
  // Skipping on a signed sequence leaves the hypotheses incomplete.
  const auto d = continuity_forward(dipole(1.0), 1.0, cfg);
  CHECK(d.details.at("hypotheses_pass") == false);
}

TEST_CASE("backward direction") {
  ConvergenceConfig cfg;
  const auto r = continuity_backward(mollified_delta(), {0.5, 1.0, 2.0}, cfg);
  CHECK(r.status == Status::pass);
  CHECK(r.details.at("hypotheses_pass") == true);
  CHECK(child(r, "F_convergence").grids.at("skipped").size() == 1);

  const auto d = continuity_backward(dipole(1.0), {0.5, 1.0, 2.0}, cfg);
  CHECK(d.status == Status::pass);
  CHECK(d.details.at("pattern") == "hypothesis-fail, conclusion-pass");

  cfg.tol = 0.0;
  cfg.n_max = 100;
  CHECK(continuity_backward(constant(SignedMeasure::dirac(1.0)), {1.0}, cfg).status == Status::pass);
}

TEST_CASE("sufficient condition of the remark") {
  const auto c = constant(SignedMeasure::dirac(1) - SignedMeasure::dirac(2, 0.25));
  const auto r = remark_sufficient_condition_test(c, 0.5, {0.5, 1.0, 2.0}, 100);
  CHECK(r.status == Status::pass);
  CHECK(child(r, "bounded_laplace").status == Status::pass);
  CHECK(remark_sufficient_condition_test(mollified_delta(), 0.0, {1.0}, 100).status == Status::pass);
  const auto close = constant(SignedMeasure::dirac(1) - SignedMeasure::dirac(1.001));
  CHECK(remark_sufficient_condition_test(close, 0.5, {0.01, 1.0}, 100).status == Status::fail);
}

TEST_CASE("verdicts are deterministic and round-trip") {
  ConvergenceConfig cfg;
  const auto a = continuity_forward(dipole(1.0), 1.0, cfg);
  const auto b = continuity_forward(dipole(1.0), 1.0, cfg);
  CHECK(to_json(a).dump() == to_json(b).dump());
  CHECK(verdict_from_json(to_json(a)) == a);
}
