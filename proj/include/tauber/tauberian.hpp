#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tauber/convergence.hpp"
#include "tauber/measure.hpp"
#include "tauber/verdict.hpp"

namespace tauber {

/// 10^{-k/4}, k = 0..24.
std::vector<double> default_tau_grid();
/// 10^{k/4}, k = 0..24.
std::vector<double> default_t_grid();
/// {0.25, 0.5, 1, 2, 4}
std::vector<double> default_lambda_grid();
/// 10^{-k/2}, k = 2..8.
std::vector<double> default_window_h_grid();

struct RVEstimate {
  double rho_hat = 0.0;
  /// (lambda or x, estimate)
  std::vector<std::pair<double, double>> per_parameter;
  double dispersion = 0.0;
  json grids = json::object();

  json to_json() const;
};

/// rho_lambda = -log(Psi(tau_min lambda) / Psi(tau_min)) / log(lambda);
/// median over lambda (lambda = 1 carries no information and is skipped).
/// Throws SignChangeNearZero if Psi vanishes or changes sign on the tau grid.
RVEstimate rv_index_psi(const SignedMeasure& mu, const std::vector<double>& lambda_grid = default_lambda_grid(),
                        const std::vector<double>& tau_grid = default_tau_grid());

/// rho_x = log(F(t x) / F(t)) / log(x), averaged over the t-grid points in
/// the top decade; median over x. Throws SignChangeNearInfinity if F
/// vanishes or changes sign on the points used.
RVEstimate rv_index_F(const SignedMeasure& mu, const std::vector<double>& x_grid = default_lambda_grid(),
                      const std::vector<double>& t_grid = default_t_grid());

/// liminf over tau of |Psi_mu(tau)| / Psi_|mu|(tau); `status` against the floor.
struct ConditionEstimate {
  LimsupEstimate estimate;
  double statistic = 0.0;
  double threshold = 0.0;
  Status status = Status::pass;
  json details = json::object();
};

ConditionEstimate tauberian_condition_ratio(const SignedMeasure& mu,
                                            const std::vector<double>& tau_grid = default_tau_grid(),
                                            double floor = 0.01, double window = 0.25);

/// limsup over h of limsup over tau of |F(tau^-1 (x + h)) - F(tau^-1 x)| / |Psi(tau)|.
ConditionEstimate tauberian_condition_window(const SignedMeasure& mu, double x,
                                             const std::vector<double>& h_grid = default_window_h_grid(),
                                             const std::vector<double>& tau_grid = default_tau_grid(),
                                             double ceiling = 0.05, double window = 0.25);

struct AsymptoticRatio {
  std::vector<std::pair<double, double>> table;  // (t, ratio)
  std::vector<double> skipped;                   // F(t) = 0
  double windowed_mean = 0.0;
  double window_lo = 0.0;

  json to_json() const;
};

/// Psi(1/t) / (F(t) Gamma(rho + 1)); mean over the top decade of the grid.
AsymptoticRatio asymptotic_ratio(const SignedMeasure& mu, double rho,
                                 const std::vector<double>& t_grid = default_t_grid());

struct GammaLimitMeasure {
  double rho = 0.0;
  SignedMeasure realised;
};

/// x^{rho-1} / Gamma(rho) dx for rho > 0, delta_0 for rho = 0.
GammaLimitMeasure gamma_limit_measure(double rho);

/// n -> scale_normalize(mu, 1/tau_n, Psi_mu(tau_n)); the declared limit is
/// the gamma-type measure when rho is given. Throws ZeroTransform from the
/// rule when Psi_mu(tau_n) = 0.
MeasureSequence rescaled_family(const SignedMeasure& mu, std::function<double(long long)> tau_rule,
                                std::optional<double> rho = std::nullopt);

struct SlowVariationDiagnostic {
  double rho = 0.0;
  std::vector<std::pair<double, double>> samples;  // (t, l(t))
  /// ratio[i][j] = l(lambda_j t_i) / l(t_i)
  std::vector<std::vector<double>> ratios;
  std::vector<double> t_grid, lambda_grid;
  std::vector<double> tail_deviation;  // per lambda
  Status status = Status::pass;
  double tol = 0.0;

  json to_json() const;
};

SlowVariationDiagnostic slow_variation_diagnostic(const SignedMeasure& mu, double rho,
                                                  const std::vector<double>& t_grid = default_t_grid(),
                                                  const std::vector<double>& lambda_grid = default_lambda_grid(),
                                                  double tol = 0.01, double window = 0.25);

enum class Direction { psi_to_F, F_to_psi };
std::string to_string(Direction d);

struct TauberianConfig {
  std::vector<double> tau_grid = default_tau_grid();
  std::vector<double> t_grid = default_t_grid();
  std::vector<double> lambda_grid = default_lambda_grid();
  std::vector<double> x_grid = default_lambda_grid();
  std::vector<double> h_grid = default_window_h_grid();
  std::vector<double> window_points{1.0};
  double window = 0.25;
  double ratio_floor = 0.01;
  double window_ceiling = 0.05;
  double rho_tol = 0.05;
  double asymptotic_tol = 0.02;
  double slow_tol = 0.01;
  /// Start of the integrated tail; chosen past the last sign change of F when unset.
  std::optional<double> X;
  /// The rescaled family tau_n = 1/n is checked against the gamma limit up to n_max.
  long long n_max = 10000;
  double family_tol = 1e-2;

  json to_json() const;
};

/// Smallest X >= 1 past which F keeps one sign on the scanned range.
double choose_tail_start(const SignedMeasure& mu, double scan_to = 1000.0, double step = 0.05);

VerdictReport karamata_pipeline(const SignedMeasure& mu, Direction direction, const TauberianConfig& cfg = {});

}  // namespace tauber
