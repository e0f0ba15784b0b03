#include "tauber/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include "tauber/errors.hpp"
#include "tauber/expr.hpp"
#include "tauber/laplace.hpp"
#include "tauber/measure_json.hpp"
#include "tauber/version.hpp"

namespace tauber {

namespace {

// ---------------------------------------------------------------------------
// Field readers. Every failure names the dotted path of the field.

double number_at(const json& j, const std::string& field) {
  if (!j.is_number()) throw ValidationError(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ValidationError(field, "must be finite");
  return v;
}

double positive_at(const json& j, const std::string& field) {
  const double v = number_at(j, field);
  if (!(v > 0.0)) throw ValidationError(field, "must be positive");
  return v;
}

double nonnegative_at(const json& j, const std::string& field) {
  const double v = number_at(j, field);
  if (!(v >= 0.0)) throw ValidationError(field, "must be nonnegative");
  return v;
}

long long count_at(const json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() < 1) throw ValidationError(field, "expected an integer >= 1");
  return j.get<long long>();
}

bool bool_at(const json& j, const std::string& field) {
  if (!j.is_boolean()) throw ValidationError(field, "expected true or false");
  return j.get<bool>();
}

std::string string_at(const json& j, const std::string& field) {
  if (!j.is_string()) throw ValidationError(field, "expected a string");
  return j.get<std::string>();
}

/// An array of numbers, {"decimal": [k0, k1, per_decade]} for 10^{-k/per_decade}
/// or {"powers": [k0, k1, per_decade]} for 10^{k/per_decade}, k = k0..k1.
std::vector<double> grid_at(const json& j, const std::string& field, bool allow_zero = false) {
  std::vector<double> out;
  if (j.is_object() && j.size() == 1 && (j.contains("decimal") || j.contains("powers"))) {
    const bool up = j.contains("powers");
    const std::string f = field + (up ? ".powers" : ".decimal");
    const json& d = j.begin().value();
    if (!d.is_array() || d.size() != 3 || !d[0].is_number_integer() || !d[1].is_number_integer() ||
        !d[2].is_number_integer() || d[2].get<int>() < 1 || d[1].get<int>() < d[0].get<int>())
      throw ValidationError(f, "expected [k0, k1, per_decade] with k0 <= k1");
    const int k0 = d[0].get<int>(), k1 = d[1].get<int>(), per = d[2].get<int>();
    out = up ? decimal_grid(-k0, -k1, per) : decimal_grid(k0, k1, per);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string f = field + "[" + std::to_string(i) + "]";
      out.push_back(allow_zero ? nonnegative_at(j[i], f) : positive_at(j[i], f));
    }
  } else {
    throw ValidationError(field, "expected an array of numbers or {\"decimal\": [k0, k1, per_decade]}");
  }
  if (out.empty()) throw ValidationError(field, "grid is empty");
  return out;
}

std::string join(const std::string& base, const std::string& key) { return base + "." + key; }

// ---------------------------------------------------------------------------
// Config blocks. `apply_*` consume the keys they know and report the rest.

const std::set<std::string> kConvergenceKeys{"n_max", "per_decade", "window", "tol", "lambda_grid",
                                             "x_grid", "hat_centres", "cap", "growth_tol", "eps",
                                             "h_grid", "skip_equicontinuity"};
const std::set<std::string> kTauberianKeys{"tau_grid", "t_grid", "lambda_grid", "x_grid", "h_grid",
                                           "window_points", "window", "ratio_floor", "window_ceiling",
                                           "rho_tol", "asymptotic_tol", "slow_tol", "X", "n_max",
                                           "family_tol"};

double window_at(const json& j, const std::string& field) {
  const double w = number_at(j, field);
  if (!(w > 0.0 && w <= 1.0)) throw ValidationError(field, "must lie in (0, 1]");
  return w;
}

void apply_convergence(const json& obj, ConvergenceConfig& c, const std::string& base) {
  for (const auto& [k, v] : obj.items()) {
    const std::string f = join(base, k);
    if (k == "n_max") c.n_max = count_at(v, f);
    else if (k == "per_decade") c.per_decade = static_cast<int>(count_at(v, f));
    else if (k == "window") c.window = window_at(v, f);
    else if (k == "tol") c.tol = nonnegative_at(v, f);
    else if (k == "lambda_grid") c.lambda_grid = grid_at(v, f);
    else if (k == "x_grid") c.x_grid = grid_at(v, f);
    else if (k == "hat_centres") c.hat_centres = grid_at(v, f, true);
    else if (k == "cap") c.cap = positive_at(v, f);
    else if (k == "growth_tol") c.growth_tol = nonnegative_at(v, f);
    else if (k == "eps") c.eps = positive_at(v, f);
    else if (k == "h_grid") c.h_grid = grid_at(v, f);
    else if (k == "skip_equicontinuity") c.skip_equicontinuity = bool_at(v, f);
  }
}

void apply_tauberian(const json& obj, TauberianConfig& c, const std::string& base) {
  for (const auto& [k, v] : obj.items()) {
    const std::string f = join(base, k);
    if (k == "tau_grid") c.tau_grid = grid_at(v, f);
    else if (k == "t_grid") c.t_grid = grid_at(v, f);
    else if (k == "lambda_grid") c.lambda_grid = grid_at(v, f);
    else if (k == "x_grid") c.x_grid = grid_at(v, f);
    else if (k == "h_grid") c.h_grid = grid_at(v, f);
    else if (k == "window_points") c.window_points = grid_at(v, f);
    else if (k == "window") c.window = window_at(v, f);
    else if (k == "ratio_floor") c.ratio_floor = nonnegative_at(v, f);
    else if (k == "window_ceiling") c.window_ceiling = nonnegative_at(v, f);
    else if (k == "rho_tol") c.rho_tol = nonnegative_at(v, f);
    else if (k == "asymptotic_tol") c.asymptotic_tol = nonnegative_at(v, f);
    else if (k == "slow_tol") c.slow_tol = nonnegative_at(v, f);
    else if (k == "X") c.X = positive_at(v, f);
    else if (k == "n_max") c.n_max = count_at(v, f);
    else if (k == "family_tol") c.family_tol = nonnegative_at(v, f);
  }
}

void parse_config(const json& cfg, Scenario& s) {
  if (!cfg.is_object()) throw ValidationError("config", "expected an object");
  for (const auto& [k, v] : cfg.items()) {
    if (k == "tauberian") {
      if (!v.is_object()) throw ValidationError("config.tauberian", "expected an object");
      for (const auto& [tk, tv] : v.items())
        if (!kTauberianKeys.count(tk)) throw ValidationError("config.tauberian." + tk, "unknown key");
      apply_tauberian(v, s.tauberian, "config.tauberian");
    } else if (k == "seed") {
      (void)count_at(v, "config.seed");  // accepted for compatibility; nothing here is random
    } else if (!kConvergenceKeys.count(k)) {
      throw ValidationError("config." + k, "unknown key");
    }
  }
  apply_convergence(cfg, s.convergence, "config");
}

// ---------------------------------------------------------------------------
// Measures and sequences.

SignedMeasure parse_measure(const json& j, const std::string& field) {
  if (j.is_object() && j.contains("gamma_limit")) {
    if (j.size() != 1) throw ValidationError(field, "gamma_limit takes no other keys");
    return gamma_limit_measure(nonnegative_at(j.at("gamma_limit"), field + ".gamma_limit")).realised;
  }
  return measure_from_json(j, field);
}

NumberResolver templated(double n) {
  return [n](const json& v, const std::string& field) -> double {
    if (v.is_object() && v.contains("expr")) {
      if (v.size() != 1 || !v.at("expr").is_string()) throw ValidationError(field, "expected {\"expr\": \"...\"}");
      try {
        return Expression::parse(v.at("expr").get<std::string>())(n);
      } catch (const ParseError& e) {
        throw ValidationError(field, e.what());
      }
    }
    return plain_number(v, field);
  };
}

const SignedMeasure& lookup_measure(const Scenario& s, const json& ref, const std::string& field) {
  const std::string name = string_at(ref, field);
  const auto it = s.measures.find(name);
  if (it == s.measures.end()) throw ValidationError(field, "no measure named '" + name + "'");
  return it->second;
}

MeasureSequence parse_sequence(const Scenario& s, const std::string& name, const json& j, const std::string& field) {
  if (!j.is_object()) throw ValidationError(field, "expected an object");
  MeasureSequence seq;
  seq.name = name;
  if (j.contains("rescaled")) {
    for (const auto& [k, v] : j.items())
      if (k != "rescaled" && k != "tau" && k != "rho") throw ValidationError(join(field, k), "unknown key");
    const SignedMeasure mu = lookup_measure(s, j.at("rescaled"), join(field, "rescaled"));
    if (!j.contains("tau")) throw ValidationError(join(field, "tau"), "required");
    const json tau = j.at("tau");
    const std::string tau_field = join(field, "tau");
    std::optional<double> rho;
    if (j.contains("rho")) rho = nonnegative_at(j.at("rho"), join(field, "rho"));
    (void)templated(1.0)(tau, tau_field);  // validate now
    seq = rescaled_family(mu, [tau, tau_field](long long n) {
      return templated(static_cast<double>(n))(tau, tau_field);
    }, rho);
    seq.name = name;
    return seq;
  }
  for (const auto& [k, v] : j.items())
    if (k != "template" && k != "limit" && k != "exceptional_set") throw ValidationError(join(field, k), "unknown key");
  if (!j.contains("template")) throw ValidationError(join(field, "template"), "required");
  if (!j.contains("limit")) throw ValidationError(join(field, "limit"), "required");
  const json tmpl = j.at("template");
  const std::string tf = join(field, "template");
  seq.rule = [tmpl, tf](long long n) { return measure_from_json(tmpl, tf, templated(static_cast<double>(n))); };
  const json& lim = j.at("limit");
  seq.limit = lim.is_string() ? lookup_measure(s, lim, join(field, "limit")) : parse_measure(lim, join(field, "limit"));
  if (j.contains("exceptional_set")) {
    const json& e = j.at("exceptional_set");
    if (!e.is_array()) throw ValidationError(join(field, "exceptional_set"), "expected an array");
    for (std::size_t i = 0; i < e.size(); ++i)
      seq.exceptional_set.push_back(
          nonnegative_at(e[i], join(field, "exceptional_set") + "[" + std::to_string(i) + "]"));
  }
  return seq;
}

// ---------------------------------------------------------------------------
// Checks.

enum class Target { measure, sequence };

struct OpSpec {
  Target target;
  std::set<std::string> keys;  // beyond the shared config keys
  bool tauberian;              // which config keys apply
};

const std::map<std::string, OpSpec>& ops() {
  static const std::map<std::string, OpSpec> table{
      {"psi_table", {Target::measure, {"reference", "abs", "backend"}, false}},
      {"membership", {Target::measure, {}, false}},
      {"tilt_identity", {Target::measure, {"epsilon"}, false}},
      {"continuity_point", {Target::measure, {"x"}, false}},
      {"rv_index_psi", {Target::measure, {"rho"}, true}},
      {"rv_index_F", {Target::measure, {"rho"}, true}},
      {"condition_ratio", {Target::measure, {}, true}},
      {"condition_window", {Target::measure, {}, true}},
      {"asymptotic_ratio", {Target::measure, {"rho"}, true}},
      {"slow_variation", {Target::measure, {"rho"}, true}},
      {"karamata_pipeline", {Target::measure, {"direction"}, true}},
      {"vague", {Target::sequence, {}, false}},
      {"psi_convergence", {Target::sequence, {}, false}},
      {"bounded_laplace", {Target::sequence, {}, false}},
      {"right_equicontinuity", {Target::sequence, {"x"}, false}},
      {"F_convergence", {Target::sequence, {"points"}, false}},
      {"continuity_forward", {Target::sequence, {"x"}, false}},
      {"continuity_backward", {Target::sequence, {}, false}},
      {"remark_sufficient_condition", {Target::sequence, {"delta"}, false}},
  };
  return table;
}

VerdictReport psi_table(const SignedMeasure& mu, const json& p, const ConvergenceConfig& cc, const std::string& base) {
  bool abs = false;
  Backend backend = Backend::closed_form;
  if (p.contains("abs")) abs = bool_at(p.at("abs"), join(base, "abs"));
  if (p.contains("backend")) {
    const std::string b = string_at(p.at("backend"), join(base, "backend"));
    if (b == "quadrature") backend = Backend::quadrature;
    else if (b != "closed_form") throw ValidationError(join(base, "backend"), "expected closed_form or quadrature");
  }
  std::optional<Expression> ref;
  if (p.contains("reference")) {
    const json& r = p.at("reference");
    const std::string f = join(base, "reference");
    if (!r.is_object() || !r.contains("expr")) throw ValidationError(f, "expected {\"expr\": ..., \"var\": ...}");
    const std::string var = r.contains("var") ? string_at(r.at("var"), join(f, "var")) : "lambda";
    try {
      ref = Expression::parse(string_at(r.at("expr"), join(f, "expr")), var);
    } catch (const ParseError& e) {
      throw ValidationError(join(f, "expr"), e.what());
    }
  }
  const TransformEvaluator ev(mu, backend);
  VerdictReport r;
  r.quantity = abs ? "psi_abs" : "psi";
  r.grids["lambda"] = number_array(cc.lambda_grid);
  r.grids["backend"] = backend == Backend::closed_form ? "closed_form" : "quadrature";
  r.tolerance = cc.tol;
  r.status = Status::pass;
  for (double l : cc.lambda_grid) {
    const double v = abs ? psi_abs(ev, l) : psi(ev, l);
    r.witnesses.push_back(Witness{{{"lambda", l}}, v, ""});
    if (ref) {
      const double want = (*ref)(l);
      r.statistic = std::max(r.statistic, std::abs(v - want) / std::abs(want));
    }
  }
  if (ref) {
    r.status = classify_below(r.statistic, cc.tol);
    r.details["reference"] = ref->source();
    r.details["statistic"] = "max relative error";
  }
  return r;
}

VerdictReport rv_check(const RVEstimate& e, const json& p, double rho_tol, const std::string& quantity,
                       const std::string& base) {
  VerdictReport r;
  r.quantity = quantity;
  r.statistic = e.rho_hat;
  r.tolerance = rho_tol;
  r.details = e.to_json();
  r.status = classify_below(e.dispersion, rho_tol);
  if (p.contains("rho")) {
    const double rho = number_at(p.at("rho"), join(base, "rho"));
    r.details["expected_rho"] = rho;
    r.status = worst(r.status, classify_below(std::abs(e.rho_hat - rho), rho_tol));
  }
  for (const auto& [q, v] : e.per_parameter) r.witnesses.push_back(Witness{{{"parameter", q}}, v, ""});
  return r;
}

using Runner = std::function<VerdictReport()>;

/// Validates a check against the scenario and returns its runner.
Runner prepare(const Scenario& s, const CheckSpec& c, const std::string& base) {
  const auto it = ops().find(c.op);
  if (it == ops().end()) throw ValidationError(join(base, "op"), "unknown op '" + c.op + "'");
  const OpSpec& spec = it->second;
  const json& p = c.params;

  const std::string target_key = spec.target == Target::measure ? "measure" : "sequence";
  for (const auto& [k, v] : p.items()) {
    const bool ok = k == target_key || spec.keys.count(k) ||
                    (spec.tauberian ? kTauberianKeys.count(k) : kConvergenceKeys.count(k));
    if (!ok) throw ValidationError(join(base, k), "not a parameter of " + c.op);
  }
  if (!p.contains(target_key)) throw ValidationError(join(base, target_key), "required");
  const std::string ref = string_at(p.at(target_key), join(base, target_key));

  ConvergenceConfig cc = s.convergence;
  TauberianConfig tc = s.tauberian;
  if (spec.tauberian) {
    apply_tauberian(p, tc, base);
  } else {
    apply_convergence(p, cc, base);
  }

  if (spec.target == Target::sequence) {
    const auto sit = s.sequences.find(ref);
    if (sit == s.sequences.end()) throw ValidationError(join(base, "sequence"), "no sequence named '" + ref + "'");
    const MeasureSequence& seq = sit->second;
    const std::string op = c.op;
    double x = 0.0, delta = 0.5;
    std::vector<double> points = cc.x_grid;
    if (p.contains("x")) x = nonnegative_at(p.at("x"), join(base, "x"));
    else if (op == "right_equicontinuity" || op == "continuity_forward") throw ValidationError(join(base, "x"), "required");
    if (p.contains("delta")) {
      delta = nonnegative_at(p.at("delta"), join(base, "delta"));
      if (!(delta < 1.0)) throw ValidationError(join(base, "delta"), "must lie in [0, 1)");
    }
    if (p.contains("points")) points = grid_at(p.at("points"), join(base, "points"), true);
    const auto h = cc.h_grid.empty() ? default_h_grid(cc.n_max) : cc.h_grid;

    if (op == "vague") return [=, &seq] { return vague_test(seq, hat_basis(cc.hat_centres), cc.n_max, cc.tol, cc); };
    if (op == "psi_convergence") return [=, &seq] { return psi_convergence_test(seq, cc.lambda_grid, cc.n_max, cc.tol, cc); };
    if (op == "bounded_laplace") return [=, &seq] { return bounded_laplace_test(seq, cc.lambda_grid, cc.n_max, cc.cap, cc); };
    if (op == "right_equicontinuity") return [=, &seq] { return right_equicontinuity_test(seq, x, cc.eps, h, cc.n_max, cc); };
    if (op == "F_convergence") return [=, &seq] { return F_convergence_test(seq, points, cc.n_max, cc.tol, cc); };
    if (op == "continuity_forward") return [=, &seq] { return continuity_forward(seq, x, cc); };
    if (op == "continuity_backward") return [=, &seq] { return continuity_backward(seq, cc.lambda_grid, cc); };
    return [=, &seq] { return remark_sufficient_condition_test(seq, delta, cc.lambda_grid, cc.n_max, cc); };
  }

  const SignedMeasure& mu = lookup_measure(s, p.at("measure"), join(base, "measure"));
  const std::string op = c.op;
  if (op == "psi_table") {
    (void)psi_table(SignedMeasure{}, p, cc, base);  // validates the parameters
    return [=, &mu] { return psi_table(mu, p, cc, base); };
  }
  if (op == "membership") {
    return [&mu] {
      const MembershipVerdict m = check_membership(mu);
      VerdictReport r;
      r.quantity = "membership";
      r.status = m.status == Membership::member ? Status::pass
                 : m.status == Membership::not_member ? Status::fail
                                                      : Status::inconclusive;
      r.details = json{{"membership", to_string(m.status)}, {"evidence", m.evidence}};
      return r;
    };
  }
  if (op == "tilt_identity") {
    const double eps = p.contains("epsilon") ? positive_at(p.at("epsilon"), join(base, "epsilon")) : 0.5;
    const double tol = p.contains("tol") ? cc.tol : 1e-10;
    return [=, &mu] {
      VerdictReport r;
      r.quantity = "tilt_identity";
      r.tolerance = tol;
      r.grids = json{{"lambda", number_array(cc.lambda_grid)}, {"epsilon", eps}};
      for (double l : cc.lambda_grid) {
        const double res = tilt_identity_residual(mu, eps, l);
        r.statistic = std::max(r.statistic, res);
        r.witnesses.push_back(Witness{{{"lambda", l}}, res, "residual"});
      }
      r.status = classify_below(r.statistic, tol);
      return r;
    };
  }
  if (op == "continuity_point") {
    if (!p.contains("x")) throw ValidationError(join(base, "x"), "required");
    const double x = nonnegative_at(p.at("x"), join(base, "x"));
    return [=, &mu] {
      VerdictReport r;
      r.quantity = "continuity_point";
      r.status = continuity_point_test(mu, x) ? Status::pass : Status::fail;
      r.witnesses.push_back(Witness{{{"x", x}}, r.status == Status::pass ? 0.0 : 1.0, "1 when an atom sits at x"});
      return r;
    };
  }
  auto rho_param = [&](const char* what) {
    if (!p.contains("rho")) throw ValidationError(join(base, "rho"), std::string("required for ") + what);
    return nonnegative_at(p.at("rho"), join(base, "rho"));
  };
  if (op == "rv_index_psi")
    return [=, &mu] { return rv_check(rv_index_psi(mu, tc.lambda_grid, tc.tau_grid), p, tc.rho_tol, op, base); };
  if (op == "rv_index_F")
    return [=, &mu] { return rv_check(rv_index_F(mu, tc.x_grid, tc.t_grid), p, tc.rho_tol, op, base); };
  if (op == "condition_ratio") {
    return [=, &mu] {
      const ConditionEstimate e = tauberian_condition_ratio(mu, tc.tau_grid, tc.ratio_floor, tc.window);
      VerdictReport r;
      r.quantity = op;
      r.statistic = e.statistic;
      r.tolerance = e.threshold;
      r.status = e.status;
      r.details = e.details;
      r.grids = json{{"tau", number_array(tc.tau_grid)}, {"window", tc.window}};
      r.witnesses.push_back(Witness{{{"tau", e.estimate.grid.back()}}, e.estimate.values.back(), "ratio at the smallest tau"});
      return r;
    };
  }
  if (op == "condition_window") {
    return [=, &mu] {
      VerdictReport r;
      r.quantity = op;
      r.tolerance = tc.window_ceiling;
      r.status = Status::pass;
      r.grids = json{{"tau", number_array(tc.tau_grid)}, {"h", number_array(tc.h_grid)}, {"window", tc.window}};
      json per = json::array();
      for (double x : tc.window_points) {
        const ConditionEstimate e =
            tauberian_condition_window(mu, x, tc.h_grid, tc.tau_grid, tc.window_ceiling, tc.window);
        r.statistic = std::max(r.statistic, e.statistic);
        r.status = worst(r.status, e.status);
        r.witnesses.push_back(Witness{{{"x", x}}, e.statistic, ""});
        per.push_back(e.details);
      }
      r.details["per_point"] = per;
      return r;
    };
  }
  if (op == "asymptotic_ratio") {
    const double rho = rho_param("asymptotic_ratio");
    return [=, &mu] {
      const AsymptoticRatio a = asymptotic_ratio(mu, rho, tc.t_grid);
      VerdictReport r;
      r.quantity = op;
      r.statistic = a.windowed_mean;
      r.tolerance = tc.asymptotic_tol;
      r.status = classify_below(std::abs(a.windowed_mean - 1.0), tc.asymptotic_tol);
      r.details = a.to_json();
      for (const auto& [t, v] : a.table) r.witnesses.push_back(Witness{{{"t", t}}, v, ""});
      return r;
    };
  }
  if (op == "slow_variation") {
    const double rho = rho_param("slow_variation");
    return [=, &mu] {
      const SlowVariationDiagnostic d =
          slow_variation_diagnostic(mu, rho, tc.t_grid, tc.lambda_grid, tc.slow_tol, tc.window);
      VerdictReport r;
      r.quantity = op;
      r.tolerance = tc.slow_tol;
      r.status = d.status;
      for (std::size_t j = 0; j < d.lambda_grid.size(); ++j) {
        r.statistic = std::max(r.statistic, d.tail_deviation[j]);
        r.witnesses.push_back(Witness{{{"lambda", d.lambda_grid[j]}}, d.tail_deviation[j], "tail deviation"});
      }
      r.details = d.to_json();
      return r;
    };
  }
  // karamata_pipeline
  Direction dir = Direction::psi_to_F;
  if (p.contains("direction")) {
    const std::string d = string_at(p.at("direction"), join(base, "direction"));
    if (d == "F_to_psi") dir = Direction::F_to_psi;
    else if (d != "psi_to_F") throw ValidationError(join(base, "direction"), "expected psi_to_F or F_to_psi");
  }
  return [=, &mu] { return karamata_pipeline(mu, dir, tc); };
}

VerdictReport error_report(const std::string& quantity, const std::string& what) {
  VerdictReport r;
  r.quantity = quantity;
  r.status = Status::error;
  r.statistic = std::numeric_limits<double>::quiet_NaN();
  r.diagnostic = what;
  return r;
}

}  // namespace

std::vector<std::string> known_ops() {
  std::vector<std::string> out;
  for (const auto& [k, v] : ops()) out.push_back(k);
  return out;
}

Scenario load_scenario_json(const json& doc, const Overrides& o) {
  if (!doc.is_object()) throw ValidationError("scenario", "expected an object");
  for (const auto& [k, v] : doc.items())
    if (k != "name" && k != "config" && k != "measures" && k != "sequences" && k != "checks")
      throw ValidationError(k, "unknown key");
  Scenario s;
  s.source = doc;
  if (!doc.contains("name")) throw ValidationError("name", "required");
  s.name = string_at(doc.at("name"), "name");
  if (s.name.empty() || s.name.find_first_of("/\\") != std::string::npos)
    throw ValidationError("name", "must be a nonempty file-name-safe string");
  if (doc.contains("config")) parse_config(doc.at("config"), s);
  if (o.n_max) {
    if (*o.n_max < 1) throw ValidationError("n_max", "must be >= 1");
    s.convergence.n_max = *o.n_max;
    s.tauberian.n_max = *o.n_max;
  }
  if (o.tol) {
    if (!(*o.tol >= 0.0)) throw ValidationError("tol", "must be nonnegative");
    s.convergence.tol = *o.tol;
  }

  if (doc.contains("measures")) {
    const json& m = doc.at("measures");
    if (!m.is_object()) throw ValidationError("measures", "expected an object");
    for (const auto& [k, v] : m.items()) s.measures.emplace(k, parse_measure(v, "measures." + k));
  }
  if (doc.contains("sequences")) {
    const json& m = doc.at("sequences");
    if (!m.is_object()) throw ValidationError("sequences", "expected an object");
    for (const auto& [k, v] : m.items()) {
      MeasureSequence seq = parse_sequence(s, k, v, "sequences." + k);
      // Instantiate both ends of the index range so template errors surface now.
      for (long long n : {1LL, s.convergence.n_max}) {
        try {
          (void)seq.rule(n);
        } catch (const ValidationError&) {
          throw;
        } catch (const std::exception& e) {
          throw ValidationError("sequences." + k, "n = " + std::to_string(n) + ": " + e.what());
        }
      }
      s.sequences.emplace(k, std::move(seq));
    }
  }
  if (doc.contains("checks")) {
    const json& cs = doc.at("checks");
    if (!cs.is_array()) throw ValidationError("checks", "expected an array");
    std::set<std::string> names;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const std::string base = "checks[" + std::to_string(i) + "]";
      const json& c = cs[i];
      if (!c.is_object()) throw ValidationError(base, "expected an object");
      CheckSpec spec;
      if (!c.contains("op")) throw ValidationError(join(base, "op"), "required");
      spec.op = string_at(c.at("op"), join(base, "op"));
      spec.name = c.contains("name") ? string_at(c.at("name"), join(base, "name")) : spec.op;
      if (!names.insert(spec.name).second) throw ValidationError(join(base, "name"), "duplicate check name");
      if (c.contains("expect")) {
        try {
          spec.expect = status_from_string(string_at(c.at("expect"), join(base, "expect")));
        } catch (const ValidationError&) {
          throw ValidationError(join(base, "expect"), "expected pass, fail, inconclusive, skipped or error");
        }
      }
      for (const auto& [k, v] : c.items())
        if (k != "op" && k != "name" && k != "expect") spec.params[k] = v;
      (void)prepare(s, spec, base);
      s.checks.push_back(std::move(spec));
    }
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path, const Overrides& o) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return load_scenario_json(doc, o);
}

CheckResult run_check(const Scenario& s, const CheckSpec& c) {
  CheckResult out;
  out.name = c.name;
  out.op = c.op;
  out.expect = c.expect;
  const auto start = std::chrono::steady_clock::now();
  try {
    out.report = prepare(s, c, "check '" + c.name + "'")();
  } catch (const std::exception& e) {
    out.report = error_report(c.op, e.what());
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

RunReport run(const Scenario& s, const std::function<void(const CheckResult&)>& progress) {
  RunReport r;
  r.scenario = s.name;
  r.version = kVersion;
  r.environment = json{{"version", kVersion},
                       {"config", json{{"convergence", s.convergence.to_json()},
                                       {"tauberian", s.tauberian.to_json()}}}};
  r.scenario_echo = s.source;
  for (const CheckSpec& c : s.checks) {
    r.checks.push_back(run_check(s, c));
    if (progress) progress(r.checks.back());
  }
  return r;
}

int RunReport::exit_code() const {
  int code = 0;
  for (const CheckResult& c : checks) {
    if (c.met()) continue;
    const Status st = c.report.status;
    code = std::max(code, (st == Status::error || st == Status::inconclusive) ? 2 : 1);
  }
  return code;
}

}  // namespace tauber
