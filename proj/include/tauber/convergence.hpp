#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tauber/measure.hpp"
#include "tauber/verdict.hpp"

namespace tauber {

/// n -> mu_n together with the declared limit mu. The rule must be a pure
/// function: it is called concurrently.
struct MeasureSequence {
  std::string name;
  std::function<SignedMeasure(long long)> rule;
  SignedMeasure limit;
  std::vector<double> exceptional_set;
};

/// Hat function: 1 at `centre`, 0 outside (centre - half_width, centre + half_width).
struct Hat {
  double centre = 0.0;
  double half_width = 0.0;
};

/// Centres on a grid, half-width = half the minimum centre spacing (0.5 for
/// a single centre).
std::vector<Hat> hat_basis(std::vector<double> centres);

/// int hat d mu, exact.
double integrate_hat(const SignedMeasure& mu, const Hat& h);

struct ConvergenceConfig {
  long long n_max = 10000;
  int per_decade = 4;
  double window = 0.25;
  double tol = 1e-3;
  std::vector<double> lambda_grid{0.5, 1.0, 2.0};
  /// F-convergence points for the backward direction (grid-a.e.).
  std::vector<double> x_grid{0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> hat_centres{0.5, 1.0, 2.0};
  double cap = 1e6;
  double growth_tol = 0.05;
  /// Right-equicontinuity: epsilon and the delta grid (empty: 2^-k down to 10/n_max).
  double eps = 0.1;
  std::vector<double> h_grid;
  bool skip_equicontinuity = false;

  json to_json() const;
};

std::vector<double> default_h_grid(long long n_max);

VerdictReport vague_test(const MeasureSequence& seq, const std::vector<Hat>& test_fns,
                         long long n_max, double tol, const ConvergenceConfig& cfg = {});

/// |Psi_{mu_n}(lambda) - Psi_mu(lambda)| on the tail, per lambda.
VerdictReport psi_convergence_test(const MeasureSequence& seq, const std::vector<double>& lambda_grid,
                                   long long n_max, double tol, const ConvergenceConfig& cfg = {});

VerdictReport bounded_laplace_test(const MeasureSequence& seq, const std::vector<double>& lambda_grid,
                                   long long n_max, double cap, const ConvergenceConfig& cfg = {});

VerdictReport right_equicontinuity_test(const MeasureSequence& seq, double x, double eps,
                                        const std::vector<double>& h_grid, long long n_max,
                                        const ConvergenceConfig& cfg = {});

VerdictReport F_convergence_test(const MeasureSequence& seq, const std::vector<double>& points,
                                 long long n_max, double tol, const ConvergenceConfig& cfg = {});

/// No atom of mu at x.
bool continuity_point_test(const SignedMeasure& mu, double x);

/// Hypotheses of the forward direction as children; status is that of the
/// conclusion (F-convergence at x). details.hypotheses_pass records whether
/// all hypotheses held.
VerdictReport continuity_forward(const MeasureSequence& seq, double x, const ConvergenceConfig& cfg);

/// F-convergence on x_grid minus the exceptional set plus boundedness as
/// hypotheses; Psi-convergence as conclusion.
VerdictReport continuity_backward(const MeasureSequence& seq, const std::vector<double>& lambda_grid,
                                  const ConvergenceConfig& cfg);

VerdictReport remark_sufficient_condition_test(const MeasureSequence& seq, double delta,
                                               const std::vector<double>& lambda_grid, long long n_max,
                                               const ConvergenceConfig& cfg = {});

}  // namespace tauber
