#include "tauber/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tauber/laplace.hpp"
#include "tauber/parallel.hpp"

namespace tauber {

namespace {

using Table = std::vector<std::vector<double>>;

// table[i][j] = f(mu_{ns[i]})[j]
template <class F>
Table tabulate(const MeasureSequence& seq, const std::vector<long long>& ns, F&& f) {
  Table out(ns.size());
  parallel_for(ns.size(), [&](std::size_t i) { out[i] = f(seq.rule(ns[i])); });
  return out;
}

std::vector<double> as_double(const std::vector<long long>& ns) {
  return {ns.begin(), ns.end()};
}

std::vector<double> reciprocal(const std::vector<long long>& ns) {
  std::vector<double> s;
  for (long long n : ns) s.push_back(1.0 / static_cast<double>(n));
  return s;
}

LimsupEstimate column(const Table& t, std::size_t j, const std::vector<long long>& ns, double window) {
  std::vector<double> v;
  for (const auto& row : t) v.push_back(row[j]);
  return tail_estimate(as_double(ns), std::move(v), reciprocal(ns), window);
}

json index_grid_json(const std::vector<long long>& ns, double window) {
  return json{{"n", ns}, {"window", window}};
}

// One "distance to the limit" check, shared by the Psi, F and vague tests.
VerdictReport distance_check(const std::string& quantity, const std::string& param,
                             const std::vector<double>& params, const std::vector<double>& targets,
                             const Table& table, const std::vector<long long>& ns, double tol,
                             double window) {
  VerdictReport r;
  r.quantity = quantity;
  r.tolerance = tol;
  r.grids = index_grid_json(ns, window);
  r.grids[param] = number_array(params);
  r.statistic = 0.0;
  json per = json::array();
  for (std::size_t j = 0; j < params.size(); ++j) {
    const LimsupEstimate e = column(table, j, ns, window);
    std::size_t worst = e.tail_begin;
    const double d = e.distance_to(targets[j], &worst);
    const double raw = std::abs(e.values[worst] - targets[j]);
    r.statistic = std::max(r.statistic, d);
    if (std::isnan(d)) r.statistic = d;
    r.witnesses.push_back(Witness{{{param, params[j]}, {"n", static_cast<double>(ns[worst])}},
                                  e.values[worst] - targets[j], "raw deviation at n"});
    per.push_back(json{{param, number_json(params[j])},
                       {"target", number_json(targets[j])},
                       {"statistic", number_json(d)},
                       {"raw_tail_deviation", number_json(raw)},
                       {"extrapolated", number_json(e.limit)},
                       {"values", number_array(e.values)}});
  }
  r.details["per_parameter"] = per;
  r.status = classify_below(r.statistic, tol);
  return r;
}

std::string pattern(bool hypotheses, Status conclusion) {
  return std::string(hypotheses ? "hypotheses-pass" : "hypothesis-fail") + ", conclusion-" +
         to_string(conclusion);
}

bool in_exceptional_set(const MeasureSequence& seq, double x) {
  return std::any_of(seq.exceptional_set.begin(), seq.exceptional_set.end(), [&](double e) {
    return std::abs(x - e) <= 1e-12 * std::max(1.0, std::abs(e));
  });
}

}  // namespace

json ConvergenceConfig::to_json() const {
  return json{{"n_max", n_max},
              {"per_decade", per_decade},
              {"window", window},
              {"tol", tol},
              {"lambda_grid", number_array(lambda_grid)},
              {"x_grid", number_array(x_grid)},
              {"hat_centres", number_array(hat_centres)},
              {"cap", number_json(cap)},
              {"growth_tol", growth_tol},
              {"eps", eps},
              {"h_grid", number_array(h_grid.empty() ? default_h_grid(n_max) : h_grid)},
              {"skip_equicontinuity", skip_equicontinuity}};
}

std::vector<Hat> hat_basis(std::vector<double> centres) {
  std::sort(centres.begin(), centres.end());
  centres.erase(std::unique(centres.begin(), centres.end()), centres.end());
  double spacing = 1.0;
  for (std::size_t i = 1; i < centres.size(); ++i)
    spacing = (i == 1) ? centres[1] - centres[0] : std::min(spacing, centres[i] - centres[i - 1]);
  std::vector<Hat> out;
  for (double c : centres) out.push_back({c, 0.5 * spacing});
  return out;
}

double integrate_hat(const SignedMeasure& mu, const Hat& h) {
  const double c = h.centre, w = h.half_width;
  const double left = std::max(0.0, c - w);
  double total = 0.0;
  if (c > left) total += integrate_affine(mu, left, c, -(c - w) / w, 1.0 / w);
  total += integrate_affine(mu, c, c + w, (c + w) / w, -1.0 / w);
  // Both halves include an atom sitting exactly at the centre.
  if (c > left)
    for (const Atom& a : mu.atoms())
      if (a.location == c) total -= a.weight;
  return total;
}

std::vector<double> default_h_grid(long long n_max) {
  std::vector<double> out;
  const double floor = 10.0 / static_cast<double>(n_max);
  for (double h = 0.5; h >= floor; h *= 0.5) out.push_back(h);
  if (out.empty()) out.push_back(0.5);
  return out;
}

VerdictReport vague_test(const MeasureSequence& seq, const std::vector<Hat>& test_fns, long long n_max,
                         double tol, const ConvergenceConfig& cfg) {
  const auto ns = geometric_index_grid(n_max, cfg.per_decade);
  std::vector<double> centres, targets;
  for (const Hat& h : test_fns) {
    centres.push_back(h.centre);
    targets.push_back(integrate_hat(seq.limit, h));
  }
  const Table t = tabulate(seq, ns, [&](const SignedMeasure& mu) {
    std::vector<double> row;
    for (const Hat& h : test_fns) row.push_back(integrate_hat(mu, h));
    return row;
  });
  VerdictReport r = distance_check("vague", "centre", centres, targets, t, ns, tol, cfg.window);
  json widths = json::array();
  for (const Hat& h : test_fns) widths.push_back(h.half_width);
  r.grids["half_width"] = widths;
  return r;
}

VerdictReport psi_convergence_test(const MeasureSequence& seq, const std::vector<double>& lambda_grid,
                                   long long n_max, double tol, const ConvergenceConfig& cfg) {
  const auto ns = geometric_index_grid(n_max, cfg.per_decade);
  std::vector<double> targets;
  for (double l : lambda_grid) targets.push_back(psi(seq.limit, l));
  const Table t = tabulate(seq, ns, [&](const SignedMeasure& mu) {
    std::vector<double> row;
    for (double l : lambda_grid) row.push_back(psi(mu, l));
    return row;
  });
  return distance_check("psi_convergence", "lambda", lambda_grid, targets, t, ns, tol, cfg.window);
}

VerdictReport bounded_laplace_test(const MeasureSequence& seq, const std::vector<double>& lambda_grid,
                                   long long n_max, double cap, const ConvergenceConfig& cfg) {
  const auto ns = geometric_index_grid(n_max, cfg.per_decade);
  const Table t = tabulate(seq, ns, [&](const SignedMeasure& mu) {
    const SignedMeasure abs = total_variation(mu);
    std::vector<double> row;
    for (double l : lambda_grid) row.push_back(psi(abs, l));
    return row;
  });
  VerdictReport r;
  r.quantity = "bounded_laplace";
  r.tolerance = cap;
  r.grids = index_grid_json(ns, cfg.window);
  r.grids["lambda"] = number_array(lambda_grid);
  r.grids["growth_tol"] = cfg.growth_tol;
  r.status = Status::pass;
  json per = json::array();
  for (std::size_t j = 0; j < lambda_grid.size(); ++j) {
    const LimsupEstimate e = column(t, j, ns, cfg.window);
    const double stat = e.limsup();
    const double growth = e.growth_per_decade();
    const Status s = worst(classify_below(stat, cap), classify_below(std::max(growth, 0.0), cfg.growth_tol));
    r.status = worst(r.status, s);
    r.statistic = j == 0 ? stat : std::max(r.statistic, stat);
    const auto at = static_cast<std::size_t>(
        std::max_element(e.values.begin() + static_cast<long>(e.tail_begin), e.values.end()) -
        e.values.begin());
    r.witnesses.push_back(Witness{{{"lambda", lambda_grid[j]}, {"n", static_cast<double>(ns[at])}},
                                  e.values[at], "psi_abs at the tail maximum"});
    per.push_back(json{{"lambda", number_json(lambda_grid[j])},
                       {"limsup", number_json(stat)},
                       {"tail_max", number_json(e.tail_max)},
                       {"growth_per_decade", number_json(growth)},
                       {"status", to_string(s)},
                       {"values", number_array(e.values)}});
  }
  r.details["per_parameter"] = per;
  return r;
}

VerdictReport right_equicontinuity_test(const MeasureSequence& seq, double x, double eps,
                                        const std::vector<double>& h_grid, long long n_max,
                                        const ConvergenceConfig& cfg) {
  if (h_grid.empty()) throw std::invalid_argument("right-equicontinuity needs a nonempty h grid");
  const auto ns = geometric_index_grid(n_max, cfg.per_decade);
  const Table t = tabulate(seq, ns, [&](const SignedMeasure& mu) {
    std::vector<double> row;
    for (double d : h_grid) row.push_back(std::abs(eval_interval(mu, x, x + d).value()));
    return row;
  });
  VerdictReport r;
  r.quantity = "right_equicontinuity";
  r.tolerance = eps;
  r.grids = index_grid_json(ns, cfg.window);
  r.grids["delta"] = number_array(h_grid);
  r.grids["x"] = x;

  std::vector<double> stats;
  std::vector<Status> verdicts;
  for (std::size_t j = 0; j < h_grid.size(); ++j) {
    const LimsupEstimate e = column(t, j, ns, cfg.window);
    stats.push_back(e.limsup());
    verdicts.push_back(classify_below(stats.back(), eps));
    const auto at = static_cast<std::size_t>(
        std::max_element(e.values.begin() + static_cast<long>(e.tail_begin), e.values.end()) -
        e.values.begin());
    r.witnesses.push_back(Witness{{{"delta", h_grid[j]}, {"n", static_cast<double>(ns[at])}},
                                  e.values[at], "|mu_n((x, x+delta])|"});
  }
  r.details["statistic_per_delta"] = number_array(stats);

  // Longest suffix of the (decreasing) delta grid that passes.
  std::size_t first = h_grid.size();
  while (first > 0 && verdicts[first - 1] == Status::pass) --first;
  r.statistic = stats.back();
  if (first < h_grid.size()) {
    r.status = Status::pass;
    r.details["h"] = h_grid[first];
    // Only the witnesses that bear on the verdict are kept.
    r.witnesses.erase(r.witnesses.begin(), r.witnesses.begin() + static_cast<long>(first));
  } else {
    r.status = verdicts.back() == Status::inconclusive ? Status::inconclusive : Status::fail;
    if (r.status == Status::inconclusive) r.diagnostic = "smallest delta within 10% of eps";
  }
  return r;
}

VerdictReport F_convergence_test(const MeasureSequence& seq, const std::vector<double>& points,
                                 long long n_max, double tol, const ConvergenceConfig& cfg) {
  std::vector<double> used, skipped;
  for (double x : points) (in_exceptional_set(seq, x) ? skipped : used).push_back(x);
  const auto ns = geometric_index_grid(n_max, cfg.per_decade);
  std::vector<double> targets;
  for (double x : used) targets.push_back(distribution(seq.limit, x).value());
  const Table t = tabulate(seq, ns, [&](const SignedMeasure& mu) {
    std::vector<double> row;
    for (double x : used) row.push_back(distribution(mu, x).value());
    return row;
  });
  VerdictReport r = distance_check("F_convergence", "x", used, targets, t, ns, tol, cfg.window);
  r.grids["skipped"] = number_array(skipped);
  if (used.empty()) {
    r.status = Status::inconclusive;
    r.diagnostic = "every point lies in the exceptional set";
  }
  return r;
}

bool continuity_point_test(const SignedMeasure& mu, double x) { return !mu.has_atom_at(x); }

namespace {

VerdictReport continuity_point_report(const SignedMeasure& mu, double x) {
  VerdictReport r;
  r.quantity = "continuity_point";
  r.grids["x"] = x;
  double w = 0.0;
  for (const Atom& a : mu.atoms())
    if (a.location == x) w = a.weight;
  r.statistic = w;
  r.status = continuity_point_test(mu, x) ? Status::pass : Status::fail;
  r.witnesses.push_back(Witness{{{"x", x}}, w, "atom weight of the limit at x"});
  return r;
}

bool hypotheses_hold(const std::vector<VerdictReport>& hyps) {
  return std::all_of(hyps.begin(), hyps.end(), [](const VerdictReport& h) {
    return h.status == Status::pass || h.status == Status::skipped;
  });
}

bool nonnegative_sequence(const MeasureSequence& seq, const ConvergenceConfig& cfg) {
  const auto ns = geometric_index_grid(cfg.n_max, cfg.per_decade);
  const Table t = tabulate(seq, ns, [](const SignedMeasure& mu) {
    return std::vector<double>{jordan(mu).second.is_zero() ? 1.0 : 0.0};
  });
  return std::all_of(t.begin(), t.end(), [](const auto& row) { return row[0] == 1.0; });
}

}  // namespace

VerdictReport continuity_forward(const MeasureSequence& seq, double x, const ConvergenceConfig& cfg) {
  std::vector<VerdictReport> hyps;
  hyps.push_back(psi_convergence_test(seq, cfg.lambda_grid, cfg.n_max, cfg.tol, cfg));
  hyps.push_back(bounded_laplace_test(seq, cfg.lambda_grid, cfg.n_max, cfg.cap, cfg));
  hyps.push_back(continuity_point_report(seq.limit, x));
  bool hyp_ok = true;
  std::string diagnostic;
  if (cfg.skip_equicontinuity) {
    VerdictReport skipped;
    skipped.quantity = "right_equicontinuity";
    skipped.status = Status::skipped;
    if (nonnegative_sequence(seq, cfg)) {
      skipped.diagnostic = "not needed for nonnegative sequences";
    } else {
      skipped.diagnostic = "skipped on a signed sequence; the hypotheses are incomplete";
      hyp_ok = false;
      diagnostic = skipped.diagnostic;
    }
    hyps.push_back(std::move(skipped));
  } else {
    const auto hg = cfg.h_grid.empty() ? default_h_grid(cfg.n_max) : cfg.h_grid;
    hyps.push_back(right_equicontinuity_test(seq, x, cfg.eps, hg, cfg.n_max, cfg));
  }
  hyp_ok = hyp_ok && hypotheses_hold(hyps);

  VerdictReport conclusion = F_convergence_test(seq, {x}, cfg.n_max, cfg.tol, cfg);
  VerdictReport r;
  r.quantity = "continuity_forward";
  r.status = conclusion.status;
  r.statistic = conclusion.statistic;
  r.tolerance = cfg.tol;
  r.witnesses = conclusion.witnesses;
  r.grids = cfg.to_json();
  r.grids["x"] = x;
  r.diagnostic = diagnostic;
  r.details["hypotheses_pass"] = hyp_ok;
  r.details["pattern"] = pattern(hyp_ok, conclusion.status);
  r.details["conclusion"] = "F_convergence";
  r.children = std::move(hyps);
  r.children.push_back(std::move(conclusion));
  return r;
}

VerdictReport continuity_backward(const MeasureSequence& seq, const std::vector<double>& lambda_grid,
                                  const ConvergenceConfig& cfg) {
  std::vector<VerdictReport> hyps;
  hyps.push_back(F_convergence_test(seq, cfg.x_grid, cfg.n_max, cfg.tol, cfg));
  hyps.push_back(bounded_laplace_test(seq, lambda_grid, cfg.n_max, cfg.cap, cfg));
  const bool hyp_ok = hypotheses_hold(hyps);
  VerdictReport conclusion = psi_convergence_test(seq, lambda_grid, cfg.n_max, cfg.tol, cfg);

  VerdictReport r;
  r.quantity = "continuity_backward";
  r.status = conclusion.status;
  r.statistic = conclusion.statistic;
  r.tolerance = cfg.tol;
  r.witnesses = conclusion.witnesses;
  r.grids = cfg.to_json();
  r.grids["lambda_grid"] = number_array(lambda_grid);
  r.grids["protocol"] = "grid-a.e.";
  r.details["hypotheses_pass"] = hyp_ok;
  r.details["pattern"] = pattern(hyp_ok, conclusion.status);
  r.details["conclusion"] = "psi_convergence";
  r.children = std::move(hyps);
  r.children.push_back(std::move(conclusion));
  return r;
}

VerdictReport remark_sufficient_condition_test(const MeasureSequence& seq, double delta,
                                               const std::vector<double>& lambda_grid, long long n_max,
                                               const ConvergenceConfig& cfg) {
  if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in [0, 1)");
  const auto ns = geometric_index_grid(n_max, cfg.per_decade);
  // Row layout: psi(mu_n^+, l) for each l, then psi(mu_n^-, l).
  const Table t = tabulate(seq, ns, [&](const SignedMeasure& mu) {
    const auto [pos, neg] = jordan(mu);
    std::vector<double> row;
    for (double l : lambda_grid) row.push_back(psi(pos, l));
    for (double l : lambda_grid) row.push_back(psi(neg, l));
    return row;
  });
  const std::size_t L = lambda_grid.size();
  const auto tail = tail_estimate(as_double(ns), as_double(ns), reciprocal(ns), cfg.window).tail_begin;

  auto ratio = [](double num, double den) {
    if (num == 0.0) return 0.0;
    return den == 0.0 ? std::numeric_limits<double>::infinity() : num / den;
  };
  double worst_neg = 0.0, worst_pos = 0.0;
  Witness w_neg, w_pos;
  for (std::size_t i = tail; i < ns.size(); ++i) {
    for (std::size_t j = 0; j < L; ++j) {
      const double rn = ratio(t[i][L + j], t[i][j]);
      const double rp = ratio(t[i][j], t[i][L + j]);
      if (rn >= worst_neg) {
        worst_neg = rn;
        w_neg = Witness{{{"lambda", lambda_grid[j]}, {"n", static_cast<double>(ns[i])}}, rn,
                        "psi(mu_n^-) / psi(mu_n^+)"};
      }
      if (rp >= worst_pos) {
        worst_pos = rp;
        w_pos = Witness{{{"lambda", lambda_grid[j]}, {"n", static_cast<double>(ns[i])}}, rp,
                        "psi(mu_n^+) / psi(mu_n^-)"};
      }
    }
  }
  const bool swapped = worst_pos < worst_neg;
  VerdictReport r;
  r.quantity = "remark_sufficient_condition";
  r.tolerance = delta;
  r.statistic = swapped ? worst_pos : worst_neg;
  r.witnesses.push_back(swapped ? w_pos : w_neg);
  r.grids = index_grid_json(ns, cfg.window);
  r.grids["lambda"] = number_array(lambda_grid);
  r.details["orientation"] = swapped ? "positive part dominated" : "negative part dominated";
  r.status = classify_below(r.statistic, delta);

  VerdictReport bounded = bounded_laplace_test(seq, lambda_grid, n_max, cfg.cap, cfg);
  if (r.status == Status::pass && bounded.status != Status::pass) {
    r.status = Status::error;
    r.diagnostic = "sufficient condition passed but boundedness did not";
  }
  r.details["implies_bounded"] = bounded.status == Status::pass || r.status != Status::pass;
  r.children.push_back(std::move(bounded));
  return r;
}

}  // namespace tauber
