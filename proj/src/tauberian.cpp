#include "tauber/tauberian.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "tauber/errors.hpp"
#include "tauber/laplace.hpp"
#include "tauber/parallel.hpp"

namespace tauber {

std::vector<double> default_tau_grid() { return decimal_grid(0, 24, 4); }
std::vector<double> default_t_grid() { return decimal_grid(0, -24, 4); }
std::vector<double> default_lambda_grid() { return {0.25, 0.5, 1.0, 2.0, 4.0}; }
std::vector<double> default_window_h_grid() { return decimal_grid(2, 8, 2); }

namespace {

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of an empty set");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

RVEstimate summarise(std::vector<std::pair<double, double>> per, json grids) {
  std::vector<double> est;
  for (const auto& [p, r] : per) est.push_back(r);
  RVEstimate out;
  out.rho_hat = median(est);
  for (double r : est) out.dispersion = std::max(out.dispersion, std::abs(r - out.rho_hat));
  if (std::any_of(est.begin(), est.end(), [](double r) { return std::isnan(r); }))
    out.dispersion = std::numeric_limits<double>::quiet_NaN();
  out.per_parameter = std::move(per);
  out.grids = std::move(grids);
  return out;
}

double F(const SignedMeasure& mu, double t) { return distribution(mu, t).value(); }

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

std::vector<double> evaluate(std::size_t n, const std::function<double(std::size_t)>& f) {
  std::vector<double> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = f(i); });
  return out;
}

std::vector<double> reciprocals(const std::vector<double>& v) {
  std::vector<double> out;
  for (double x : v) out.push_back(1.0 / x);
  return out;
}

}  // namespace

json RVEstimate::to_json() const {
  json per = json::array();
  for (const auto& [p, r] : per_parameter) per.push_back(json::array({number_json(p), number_json(r)}));
  return json{{"rho_hat", number_json(rho_hat)},
              {"dispersion", number_json(dispersion)},
              {"per_parameter", per},
              {"grids", grids}};
}

RVEstimate rv_index_psi(const SignedMeasure& mu, const std::vector<double>& lambda_grid,
                        const std::vector<double>& tau_grid) {
  if (tau_grid.empty()) throw std::invalid_argument("empty tau grid");
  const std::vector<double> psis = evaluate(tau_grid.size(), [&](std::size_t i) { return psi(mu, tau_grid[i]); });
  const int s = sign_of(psis.front());
  for (std::size_t i = 0; i < psis.size(); ++i) {
    if (sign_of(psis[i]) != s || s == 0)
      throw SignChangeNearZero("Psi changes sign or vanishes near tau = " + std::to_string(tau_grid[i]));
  }
  const double tau = *std::min_element(tau_grid.begin(), tau_grid.end());
  const double base = psi(mu, tau);
  std::vector<std::pair<double, double>> per;
  for (double l : lambda_grid) {
    if (l == 1.0) continue;
    const double v = psi(mu, tau * l);
    if (sign_of(v) != s) throw SignChangeNearZero("Psi changes sign at tau = " + std::to_string(tau * l));
    per.emplace_back(l, -std::log(v / base) / std::log(l));
  }
  if (per.empty()) throw std::invalid_argument("lambda grid needs a value other than 1");
  return summarise(std::move(per), json{{"lambda", number_array(lambda_grid)},
                                        {"tau", number_array(tau_grid)},
                                        {"tau_used", tau}});
}

RVEstimate rv_index_F(const SignedMeasure& mu, const std::vector<double>& x_grid,
                      const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw std::invalid_argument("empty t grid");
  const double t_max = *std::max_element(t_grid.begin(), t_grid.end());
  std::vector<double> ts;
  for (double t : t_grid)
    if (t >= t_max / 10.0 * (1.0 - 1e-12)) ts.push_back(t);
  std::sort(ts.begin(), ts.end());

  std::vector<double> xs;
  for (double x : x_grid)
    if (x != 1.0) xs.push_back(x);
  if (xs.empty()) throw std::invalid_argument("x grid needs a value other than 1");

  // F at t and at t x for every window point.
  const std::size_t cols = xs.size() + 1;
  const std::vector<double> vals = evaluate(ts.size() * cols, [&](std::size_t k) {
    const double t = ts[k / cols];
    const std::size_t j = k % cols;
    return F(mu, j == 0 ? t : t * xs[j - 1]);
  });
  const int s = sign_of(vals.front());
  for (std::size_t k = 0; k < vals.size(); ++k) {
    if (sign_of(vals[k]) != s || s == 0)
      throw SignChangeNearInfinity("F changes sign or vanishes near t = " +
                                   std::to_string(ts[k / cols]));
  }
  std::vector<std::pair<double, double>> per;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i)
      acc += std::log(vals[i * cols + j + 1] / vals[i * cols]) / std::log(xs[j]);
    per.emplace_back(xs[j], acc / static_cast<double>(ts.size()));
  }
  return summarise(std::move(per), json{{"x", number_array(x_grid)},
                                        {"t", number_array(t_grid)},
                                        {"t_window", number_array(ts)}});
}

ConditionEstimate tauberian_condition_ratio(const SignedMeasure& mu, const std::vector<double>& tau_grid,
                                            double floor, double window) {
  const SignedMeasure abs = total_variation(mu);
  std::vector<double> vals = evaluate(tau_grid.size(), [&](std::size_t i) {
    const double a = psi(abs, tau_grid[i]);
    return a == 0.0 ? 1.0 : std::abs(psi(mu, tau_grid[i])) / a;
  });
  ConditionEstimate c;
  c.estimate = tail_estimate(tau_grid, std::move(vals), tau_grid, window);
  c.statistic = c.estimate.liminf();
  c.threshold = floor;
  c.status = classify_above(c.statistic, floor);
  c.details = json{{"tail_min", number_json(c.estimate.tail_min)},
                   {"extrapolated", number_json(c.estimate.limit)},
                   {"values", number_array(c.estimate.values)}};
  return c;
}

ConditionEstimate tauberian_condition_window(const SignedMeasure& mu, double x,
                                             const std::vector<double>& h_grid,
                                             const std::vector<double>& tau_grid, double ceiling,
                                             double window) {
  if (!(x > 0.0)) throw std::invalid_argument("window condition needs x > 0");
  const std::vector<double> psis = evaluate(tau_grid.size(), [&](std::size_t i) { return psi(mu, tau_grid[i]); });
  const std::vector<double> base = evaluate(tau_grid.size(), [&](std::size_t i) { return F(mu, x / tau_grid[i]); });
  std::vector<double> inner;
  json per = json::array();
  for (double h : h_grid) {
    std::vector<double> vals = evaluate(tau_grid.size(), [&](std::size_t i) {
      return std::abs(F(mu, (x + h) / tau_grid[i]) - base[i]) / std::abs(psis[i]);
    });
    const LimsupEstimate e = tail_estimate(tau_grid, std::move(vals), tau_grid, window);
    inner.push_back(e.limsup());
    per.push_back(json{{"h", number_json(h)}, {"limsup_tau", number_json(inner.back())}});
  }
  ConditionEstimate c;
  c.estimate = tail_estimate(h_grid, inner, h_grid, window);
  c.statistic = c.estimate.limsup();
  c.threshold = ceiling;
  c.status = classify_below(c.statistic, ceiling);
  c.details = json{{"x", number_json(x)}, {"per_h", per}};
  return c;
}

json AsymptoticRatio::to_json() const {
  json t = json::array();
  for (const auto& [x, r] : table) t.push_back(json::array({number_json(x), number_json(r)}));
  return json{{"table", t},
              {"skipped", number_array(skipped)},
              {"windowed_mean", number_json(windowed_mean)},
              {"window_lo", number_json(window_lo)}};
}

AsymptoticRatio asymptotic_ratio(const SignedMeasure& mu, double rho, const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw std::invalid_argument("empty t grid");
  const double g = std::tgamma(rho + 1.0);
  const std::vector<double> Fs = evaluate(t_grid.size(), [&](std::size_t i) { return F(mu, t_grid[i]); });
  const std::vector<double> Ps = evaluate(t_grid.size(), [&](std::size_t i) { return psi(mu, 1.0 / t_grid[i]); });
  AsymptoticRatio out;
  out.window_lo = *std::max_element(t_grid.begin(), t_grid.end()) / 10.0 * (1.0 - 1e-12);
  double acc = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (Fs[i] == 0.0) {
      out.skipped.push_back(t_grid[i]);
      continue;
    }
    const double r = Ps[i] / (Fs[i] * g);
    out.table.emplace_back(t_grid[i], r);
    if (t_grid[i] >= out.window_lo) {
      acc += r;
      ++count;
    }
  }
  out.windowed_mean = count ? acc / count : std::numeric_limits<double>::quiet_NaN();
  return out;
}

GammaLimitMeasure gamma_limit_measure(double rho) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw std::invalid_argument("gamma limit needs rho >= 0");
  if (rho == 0.0) return {0.0, SignedMeasure::dirac(0.0)};
  return {rho, SignedMeasure::with_density(ExpressionDensity::monomial(1.0 / std::tgamma(rho), rho - 1.0))};
}

MeasureSequence rescaled_family(const SignedMeasure& mu, std::function<double(long long)> tau_rule,
                                std::optional<double> rho) {
  MeasureSequence seq;
  seq.name = "rescaled";
  seq.rule = [mu, tau_rule = std::move(tau_rule)](long long n) {
    const double tau = tau_rule(n);
    const double c = psi(mu, tau);
    if (c == 0.0) throw ZeroTransform("Psi vanishes at tau_" + std::to_string(n) + " = " + std::to_string(tau));
    return scale_normalize(mu, 1.0 / tau, c);
  };
  if (rho) seq.limit = gamma_limit_measure(*rho).realised;
  return seq;
}

json SlowVariationDiagnostic::to_json() const {
  json s = json::array();
  for (const auto& [t, l] : samples) s.push_back(json::array({number_json(t), number_json(l)}));
  json r = json::array();
  for (const auto& row : ratios) r.push_back(number_array(row));
  return json{{"rho", number_json(rho)},
              {"samples", s},
              {"ratios", r},
              {"t_grid", number_array(t_grid)},
              {"lambda_grid", number_array(lambda_grid)},
              {"tail_deviation", number_array(tail_deviation)},
              {"status", to_string(status)},
              {"tol", tol}};
}

SlowVariationDiagnostic slow_variation_diagnostic(const SignedMeasure& mu, double rho,
                                                  const std::vector<double>& t_grid,
                                                  const std::vector<double>& lambda_grid, double tol,
                                                  double window) {
  auto l = [&](double t) { return F(mu, t) / std::pow(t, rho); };
  SlowVariationDiagnostic d;
  d.rho = rho;
  d.t_grid = t_grid;
  d.lambda_grid = lambda_grid;
  d.tol = tol;
  const std::size_t cols = lambda_grid.size() + 1;
  const std::vector<double> vals = evaluate(t_grid.size() * cols, [&](std::size_t k) {
    const double t = t_grid[k / cols];
    const std::size_t j = k % cols;
    return l(j == 0 ? t : t * lambda_grid[j - 1]);
  });
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    d.samples.emplace_back(t_grid[i], vals[i * cols]);
    std::vector<double> row;
    for (std::size_t j = 0; j < lambda_grid.size(); ++j) row.push_back(vals[i * cols + j + 1] / vals[i * cols]);
    d.ratios.push_back(std::move(row));
  }
  double worst_dev = 0.0;
  for (std::size_t j = 0; j < lambda_grid.size(); ++j) {
    std::vector<double> col;
    for (const auto& row : d.ratios) col.push_back(row[j]);
    const LimsupEstimate e = tail_estimate(t_grid, std::move(col), reciprocals(t_grid), window);
    d.tail_deviation.push_back(e.distance_to(1.0));
    worst_dev = std::isnan(d.tail_deviation.back()) ? d.tail_deviation.back()
                                                    : std::max(worst_dev, d.tail_deviation.back());
  }
  d.status = classify_below(worst_dev, tol);
  return d;
}

std::string to_string(Direction d) { return d == Direction::psi_to_F ? "psi_to_F" : "F_to_psi"; }

json TauberianConfig::to_json() const {
  json j{{"tau_grid", number_array(tau_grid)},
         {"t_grid", number_array(t_grid)},
         {"lambda_grid", number_array(lambda_grid)},
         {"x_grid", number_array(x_grid)},
         {"h_grid", number_array(h_grid)},
         {"window_points", number_array(window_points)},
         {"window", window},
         {"ratio_floor", ratio_floor},
         {"window_ceiling", window_ceiling},
         {"rho_tol", rho_tol},
         {"asymptotic_tol", asymptotic_tol},
         {"slow_tol", slow_tol},
         {"n_max", n_max},
         {"family_tol", family_tol}};
  j["X"] = X ? json(*X) : json(nullptr);
  return j;
}

double choose_tail_start(const SignedMeasure& mu, double scan_to, double step) {
  const auto steps = static_cast<long long>(std::ceil(scan_to / step));
  const int final_sign = sign_of(F(mu, static_cast<double>(steps) * step));
  if (final_sign == 0) throw SignChangeNearInfinity("F vanishes at the end of the scan");
  double last_bad = 0.0;
  for (long long k = 1; k <= steps; ++k) {
    const double x = static_cast<double>(k) * step;
    if (sign_of(F(mu, x)) != final_sign) last_bad = x;
  }
  return std::max(1.0, last_bad + 1.0);
}

namespace {

template <class F>
VerdictReport guarded(const std::string& quantity, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    VerdictReport r;
    r.quantity = quantity;
    r.status = Status::error;
    r.statistic = std::numeric_limits<double>::quiet_NaN();
    r.diagnostic = e.what();
    return r;
  }
}

VerdictReport rv_report(const std::string& quantity, const RVEstimate& e, double tol) {
  VerdictReport r;
  r.quantity = quantity;
  r.statistic = e.rho_hat;
  r.tolerance = tol;
  r.status = classify_below(e.dispersion, tol);
  r.details = e.to_json();
  for (const auto& [p, v] : e.per_parameter) r.witnesses.push_back(Witness{{{"parameter", p}}, v, ""});
  return r;
}

VerdictReport condition_report(const std::string& quantity, const ConditionEstimate& c) {
  VerdictReport r;
  r.quantity = quantity;
  r.statistic = c.statistic;
  r.tolerance = c.threshold;
  r.status = c.status;
  r.details = c.details;
  r.grids = json{{"grid", number_array(c.estimate.grid)}, {"window", c.estimate.window}};
  return r;
}

VerdictReport agreement_report(const std::string& quantity, double a, double b, double tol) {
  VerdictReport r;
  r.quantity = quantity;
  r.statistic = std::abs(a - b);
  r.tolerance = tol;
  r.status = classify_below(r.statistic, tol);
  r.witnesses.push_back(Witness{{}, a, "estimate"});
  r.witnesses.push_back(Witness{{}, b, "reference"});
  return r;
}

VerdictReport ratio_report(const SignedMeasure& mu, double rho, const TauberianConfig& cfg) {
  const AsymptoticRatio a = asymptotic_ratio(mu, rho, cfg.t_grid);
  VerdictReport r;
  r.quantity = "asymptotic_ratio";
  r.statistic = a.windowed_mean;
  r.tolerance = cfg.asymptotic_tol;
  r.status = classify_below(std::abs(a.windowed_mean - 1.0), cfg.asymptotic_tol);
  r.details = a.to_json();
  r.details["rho"] = number_json(rho);
  for (const auto& [t, v] : a.table) r.witnesses.push_back(Witness{{{"t", t}}, v, ""});
  r.grids = json{{"t", number_array(cfg.t_grid)}};
  return r;
}

VerdictReport slow_report(const SignedMeasure& mu, double rho, const TauberianConfig& cfg) {
  const SlowVariationDiagnostic d =
      slow_variation_diagnostic(mu, rho, cfg.t_grid, cfg.lambda_grid, cfg.slow_tol, cfg.window);
  VerdictReport r;
  r.quantity = "slow_variation";
  r.tolerance = cfg.slow_tol;
  r.status = d.status;
  r.statistic = 0.0;
  for (double v : d.tail_deviation) r.statistic = std::max(r.statistic, v);
  r.details = d.to_json();
  r.details["role"] = "diagnostic";
  return r;
}

VerdictReport family_report(const SignedMeasure& mu, double rho, const TauberianConfig& cfg) {
  const MeasureSequence fam =
      rescaled_family(mu, [](long long n) { return 1.0 / static_cast<double>(n); }, rho);
  ConvergenceConfig cc;
  cc.n_max = cfg.n_max;
  cc.window = cfg.window;
  cc.tol = cfg.family_tol;
  VerdictReport r;
  r.quantity = "rescaled_family";
  r.tolerance = cfg.family_tol;
  r.children.push_back(psi_convergence_test(fam, cfg.lambda_grid, cfg.n_max, cfg.family_tol, cc));
  r.children.push_back(F_convergence_test(fam, cfg.x_grid, cfg.n_max, cfg.family_tol, cc));
  r.status = Status::pass;
  for (const auto& c : r.children) {
    r.status = worst(r.status, c.status);
    r.statistic = std::max(r.statistic, c.statistic);
  }
  r.details["limit"] = "gamma-type measure with the estimated index";
  r.details["tau_n"] = "1/n";
  return r;
}

}  // namespace

VerdictReport karamata_pipeline(const SignedMeasure& mu, Direction direction, const TauberianConfig& cfg) {
  std::vector<VerdictReport> hyps, concl, diag;
  double rho = std::numeric_limits<double>::quiet_NaN();
  json summary = json::object();

  if (direction == Direction::psi_to_F) {
    hyps.push_back(guarded("rv_index_psi", [&] {
      const RVEstimate e = rv_index_psi(mu, cfg.lambda_grid, cfg.tau_grid);
      rho = e.rho_hat;
      summary["dispersion"] = number_json(e.dispersion);
      return rv_report("rv_index_psi", e, cfg.rho_tol);
    }));
    hyps.push_back(guarded("condition_ratio", [&] {
      return condition_report("condition_ratio",
                              tauberian_condition_ratio(mu, cfg.tau_grid, cfg.ratio_floor, cfg.window));
    }));
    json windows = json::array();
    for (double x : cfg.window_points) {
      hyps.push_back(guarded("condition_window", [&] {
        return condition_report("condition_window",
                                tauberian_condition_window(mu, x, cfg.h_grid, cfg.tau_grid, cfg.window_ceiling,
                                                           cfg.window));
      }));
      windows.push_back(json{{"x", number_json(x)}, {"statistic", number_json(hyps.back().statistic)}});
    }
    summary["condition_window"] = windows;
    if (std::isfinite(rho)) {
      hyps.push_back(guarded("rescaled_family", [&] { return family_report(mu, rho, cfg); }));
      concl.push_back(guarded("rv_index_F", [&] {
        const RVEstimate e = rv_index_F(mu, cfg.x_grid, cfg.t_grid);
        VerdictReport r = agreement_report("rv_index_F", e.rho_hat, rho, cfg.rho_tol);
        r.details = e.to_json();
        return r;
      }));
      concl.push_back(guarded("asymptotic_ratio", [&] { return ratio_report(mu, rho, cfg); }));
      diag.push_back(guarded("slow_variation", [&] { return slow_report(mu, rho, cfg); }));
    }
  } else {
    hyps.push_back(guarded("rv_index_F", [&] {
      const RVEstimate e = rv_index_F(mu, cfg.x_grid, cfg.t_grid);
      rho = e.rho_hat;
      summary["dispersion"] = number_json(e.dispersion);
      return rv_report("rv_index_F", e, cfg.rho_tol);
    }));
    if (std::isfinite(rho)) {
      hyps.push_back(guarded("integrated_tail", [&] {
        const double X = cfg.X ? *cfg.X : choose_tail_start(mu);
        // The proof works with F eventually positive; flip the sign otherwise.
        const double s = F(mu, cfg.t_grid.empty() ? 1e6 : *std::max_element(cfg.t_grid.begin(), cfg.t_grid.end())) < 0
                             ? -1.0
                             : 1.0;
        const SignedMeasure m = mu.scaled(s);
        const SignedMeasure xi = integrated_tail(m, X);
        VerdictReport r;
        r.quantity = "integrated_tail";
        r.details["X"] = X;
        r.details["sign"] = s;

        const RVEstimate e = rv_index_F(xi, cfg.x_grid, cfg.t_grid);
        VerdictReport idx = agreement_report("integrated_tail_index", e.rho_hat, rho + 1.0, cfg.rho_tol);
        idx.details = e.to_json();

        // Psi_xi(l) = e^{-l X} F(X) / l + (1/l) int_{(X, inf)} e^{-l x} mu(dx).
        VerdictReport ident;
        ident.quantity = "integrated_tail_identity";
        ident.tolerance = 1e-8;
        const double FX = F(m, X);
        for (double l : cfg.lambda_grid) {
          const double lhs = psi(xi, l);
          const double beyond = psi(m, l) - psi(restrict_to(m, X), l);
          const double rhs = std::exp(-l * X) * FX / l + beyond / l;
          const double rel = std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-300);
          ident.statistic = std::max(ident.statistic, rel);
          ident.witnesses.push_back(Witness{{{"lambda", l}}, rel, "relative residual"});
        }
        ident.status = classify_below(ident.statistic, ident.tolerance);
        r.children = {idx, ident};
        r.status = worst(idx.status, ident.status);
        r.statistic = idx.statistic;
        r.tolerance = cfg.rho_tol;
        return r;
      }));
      concl.push_back(guarded("asymptotic_ratio", [&] { return ratio_report(mu, rho, cfg); }));
      concl.push_back(guarded("rv_index_psi", [&] {
        const RVEstimate e = rv_index_psi(mu, cfg.lambda_grid, cfg.tau_grid);
        VerdictReport r = agreement_report("rv_index_psi", e.rho_hat, rho, cfg.rho_tol);
        r.details = e.to_json();
        return r;
      }));
      diag.push_back(guarded("slow_variation", [&] { return slow_report(mu, rho, cfg); }));
    }
  }

  VerdictReport r;
  r.quantity = "karamata_pipeline";
  r.grids = cfg.to_json();
  bool hyp_ok = true;
  for (const auto& h : hyps) hyp_ok = hyp_ok && h.status == Status::pass;
  if (concl.empty()) {
    r.status = Status::error;
    r.diagnostic = "index estimate unavailable; conclusion not evaluated";
  } else {
    r.status = Status::pass;
    for (const auto& c : concl) r.status = worst(r.status, c.status);
  }
  r.statistic = rho;
  r.tolerance = cfg.rho_tol;
  summary["direction"] = to_string(direction);
  summary["rho_hat"] = number_json(rho);
  for (const auto& h : hyps)
    if (h.quantity == "condition_ratio") summary["condition_ratio"] = number_json(h.statistic);
  for (const auto& c : concl)
    if (c.quantity == "asymptotic_ratio") summary["asymptotic_ratio"] = c.details;
  summary["hypotheses_pass"] = hyp_ok;
  json names = json::array();
  for (const auto& c : concl) names.push_back(c.quantity);
  summary["conclusion"] = names;
  summary["pattern"] = std::string(hyp_ok ? "hypotheses-pass" : "hypothesis-fail") + ", conclusion-" +
                       to_string(r.status);
  r.details = summary;
  for (auto* group : {&hyps, &concl, &diag})
    for (auto& c : *group) r.children.push_back(std::move(c));
  return r;
}

}  // namespace tauber
