#include "tauber/verdict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tauber/errors.hpp"

namespace tauber {

std::string to_string(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    case Status::inconclusive:
      return "inconclusive";
    case Status::skipped:
      return "skipped";
    case Status::error:
      return "error";
  }
  return "error";
}

Status status_from_string(const std::string& s) {
  for (Status st : {Status::pass, Status::fail, Status::inconclusive, Status::skipped, Status::error})
    if (to_string(st) == s) return st;
  throw ValidationError("status", "unknown status '" + s + "'");
}

namespace {
int rank(Status s) {
  switch (s) {
    case Status::skipped:
      return 0;
    case Status::pass:
      return 1;
    case Status::fail:
      return 2;
    case Status::inconclusive:
      return 3;
    case Status::error:
      return 4;
  }
  return 4;
}
}  // namespace

Status worst(Status a, Status b) { return rank(a) >= rank(b) ? a : b; }

Status classify_below(double statistic, double tol) {
  if (std::isnan(statistic)) return Status::inconclusive;
  if (tol == 0.0) return statistic == 0.0 ? Status::pass : Status::fail;
  if (statistic < 0.9 * tol) return Status::pass;
  if (statistic > 1.1 * tol) return Status::fail;
  return Status::inconclusive;
}

Status classify_above(double statistic, double floor) {
  if (std::isnan(statistic)) return Status::inconclusive;
  if (floor == 0.0) return statistic > 0.0 ? Status::pass : Status::fail;
  if (statistic > 1.1 * floor) return Status::pass;
  if (statistic < 0.9 * floor) return Status::fail;
  return Status::inconclusive;
}

const VerdictReport* VerdictReport::child(const std::string& q) const {
  for (const auto& c : children)
    if (c.quantity == q) return &c;
  return nullptr;
}

json number_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return v;
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ParseError("expected a number, got " + j.dump());
}

json number_array(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number_json(x));
  return a;
}

json to_json(const Witness& w) {
  json params = json::object();
  for (const auto& [k, v] : w.params) params[k] = number_json(v);
  json j{{"params", params}, {"value", number_json(w.value)}};
  if (!w.note.empty()) j["note"] = w.note;
  return j;
}

json to_json(const VerdictReport& r) {
  json witnesses = json::array();
  for (const auto& w : r.witnesses) witnesses.push_back(to_json(w));
  json children = json::array();
  for (const auto& c : r.children) children.push_back(to_json(c));
  return json{{"quantity", r.quantity},
              {"status", to_string(r.status)},
              {"statistic", number_json(r.statistic)},
              {"tolerance", number_json(r.tolerance)},
              {"witnesses", witnesses},
              {"grids", r.grids},
              {"details", r.details},
              {"diagnostic", r.diagnostic},
              {"children", children}};
}

VerdictReport verdict_from_json(const json& j) {
  VerdictReport r;
  r.quantity = j.at("quantity").get<std::string>();
  r.status = status_from_string(j.at("status").get<std::string>());
  r.statistic = number_from_json(j.at("statistic"));
  r.tolerance = number_from_json(j.at("tolerance"));
  for (const auto& w : j.at("witnesses")) {
    Witness wi;
    for (const auto& [k, v] : w.at("params").items()) wi.params[k] = number_from_json(v);
    wi.value = number_from_json(w.at("value"));
    if (w.contains("note")) wi.note = w.at("note").get<std::string>();
    r.witnesses.push_back(std::move(wi));
  }
  r.grids = j.at("grids");
  r.details = j.at("details");
  r.diagnostic = j.at("diagnostic").get<std::string>();
  for (const auto& c : j.at("children")) r.children.push_back(verdict_from_json(c));
  return r;
}

// ---------------------------------------------------------------------------

namespace {

bool monotone(const std::vector<double>& v, std::size_t from) {
  bool up = true, down = true;
  for (std::size_t i = from + 1; i < v.size(); ++i) {
    if (v[i] < v[i - 1]) up = false;
    if (v[i] > v[i - 1]) down = false;
  }
  return up || down;
}

}  // namespace

LimsupEstimate tail_estimate(std::vector<double> grid, std::vector<double> values,
                             std::vector<double> s, double window) {
  if (values.empty() || values.size() != grid.size() || s.size() != grid.size())
    throw std::invalid_argument("tail estimate needs matching, nonempty grids");
  if (!(window > 0.0 && window <= 1.0)) throw std::invalid_argument("window must be in (0, 1]");
  LimsupEstimate e;
  e.window = window;
  const std::size_t n = values.size();
  const auto tail_len = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(window * static_cast<double>(n) - 1e-9)));
  e.tail_begin = n - std::min(n, tail_len);
  e.tail_max = *std::max_element(values.begin() + static_cast<long>(e.tail_begin), values.end());
  e.tail_min = *std::min_element(values.begin() + static_cast<long>(e.tail_begin), values.end());
  e.limit = values.back();
  if (n - e.tail_begin >= 2) {
    const double s1 = s[n - 2], s2 = s[n - 1];
    const double v1 = values[n - 2], v2 = values[n - 1];
    if (s1 != s2) e.limit = (s1 * v2 - s2 * v1) / (s1 - s2);
  }
  e.grid = std::move(grid);
  e.values = std::move(values);
  e.s = std::move(s);
  return e;
}

bool LimsupEstimate::extrapolation_trusted() const {
  if (values.size() - tail_begin < 2) return false;
  if (!std::isfinite(limit) || !monotone(values, tail_begin)) return false;
  const double width = tail_max - tail_min;
  return std::abs(limit - values.back()) <= width;
}

double LimsupEstimate::limsup() const {
  return extrapolation_trusted() ? std::max(tail_max, limit) : tail_max;
}

double LimsupEstimate::liminf() const {
  return extrapolation_trusted() ? std::min(tail_min, limit) : tail_min;
}

double LimsupEstimate::distance_to(double target, std::size_t* worst_index) const {
  double raw = -1.0;
  bool shrinking = true;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t i = tail_begin; i < values.size(); ++i) {
    const double d = std::abs(values[i] - target);
    if (std::isnan(d)) return d;
    if (d > raw) {
      raw = d;
      if (worst_index) *worst_index = i;
    }
    if (d > prev) shrinking = false;
    prev = d;
  }
  if (shrinking && values.size() - tail_begin >= 2) {
    const double d = std::abs(limit - target);
    if (d <= raw) return d;
  }
  return raw;
}

double LimsupEstimate::growth_per_decade() const {
  const std::size_t m = values.size() - tail_begin;
  if (m < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, mean_abs = 0;
  for (std::size_t i = tail_begin; i < values.size(); ++i) {
    const double x = -std::log10(s[i]);
    sx += x;
    sy += values[i];
    sxx += x * x;
    sxy += x * values[i];
    mean_abs += std::abs(values[i]);
  }
  const double md = static_cast<double>(m);
  const double denom = md * sxx - sx * sx;
  if (denom == 0.0) return 0.0;
  const double slope = (md * sxy - sx * sy) / denom;
  mean_abs /= md;
  if (mean_abs == 0.0) return slope == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return slope / mean_abs;
}

json LimsupEstimate::to_json() const {
  return json{{"grid", number_array(grid)},
              {"values", number_array(values)},
              {"window", window},
              {"tail_begin", tail_begin},
              {"tail_max", number_json(tail_max)},
              {"tail_min", number_json(tail_min)},
              {"limit", number_json(limit)},
              {"extrapolation_trusted", extrapolation_trusted()}};
}

std::vector<long long> geometric_index_grid(long long n_max, int per_decade) {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  std::vector<long long> out;
  for (int k = 0;; ++k) {
    const double v = std::pow(10.0, static_cast<double>(k) / per_decade);
    const double r = std::round(v);
    const auto n = static_cast<long long>(std::abs(v - r) < 1e-9 * v ? r : std::ceil(v));
    if (n > n_max) break;
    if (out.empty() || out.back() != n) out.push_back(n);
  }
  if (out.back() != n_max) out.push_back(n_max);
  return out;
}

std::vector<double> decimal_grid(int k0, int k1, int per_decade) {
  std::vector<double> out;
  const int step = k1 >= k0 ? 1 : -1;
  for (int k = k0;; k += step) {
    out.push_back(std::pow(10.0, -static_cast<double>(k) / per_decade));
    if (k == k1) break;
  }
  return out;
}

}  // namespace tauber
