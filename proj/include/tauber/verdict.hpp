#pragma once

#include <json.hpp>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace tauber {

using json = nlohmann::json;

enum class Status { pass, fail, inconclusive, skipped, error };

std::string to_string(Status s);
Status status_from_string(const std::string& s);

/// Worst of two statuses: error > inconclusive > fail > pass; skipped is neutral.
Status worst(Status a, Status b);

/// Three-valued comparison of a statistic that should stay below `tol`.
/// Values within 10% of the tolerance are inconclusive; tol = 0 demands an
/// exact zero.
Status classify_below(double statistic, double tol);
/// Same for a statistic that should exceed `floor`.
Status classify_above(double statistic, double floor);

struct Witness {
  std::map<std::string, double> params;
  double value = 0.0;
  std::string note;

  friend bool operator==(const Witness&, const Witness&) = default;
};

struct VerdictReport {
  std::string quantity;
  Status status = Status::pass;
  double statistic = 0.0;
  double tolerance = 0.0;
  std::vector<Witness> witnesses;
  json grids = json::object();
  json details = json::object();
  std::string diagnostic;
  std::vector<VerdictReport> children;

  const VerdictReport* child(const std::string& quantity) const;
  friend bool operator==(const VerdictReport&, const VerdictReport&) = default;
};

/// Non-finite numbers become the strings "+inf", "-inf", "nan".
json number_json(double v);
double number_from_json(const json& j);
json number_array(const std::vector<double>& v);

json to_json(const Witness& w);
json to_json(const VerdictReport& r);
VerdictReport verdict_from_json(const json& j);

/// Finite surrogate for lim/limsup/liminf over a grid whose parameter s
/// tends to 0 along the grid (s = 1/n for index grids, s = tau for tau
/// grids). The tail window is the last `window` fraction of the grid.
/// `limit` is a Richardson extrapolation to s = 0 from the two last points,
/// assuming value ~ L + c s.
struct LimsupEstimate {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> s;
  double window = 0.25;
  std::size_t tail_begin = 0;
  double tail_max = 0.0;
  double tail_min = 0.0;
  double limit = 0.0;

  /// The extrapolated limit is used only when the tail is monotone and the
  /// extrapolation stays within one tail-width of the last value.
  bool extrapolation_trusted() const;
  /// max(tail, limit)
  double limsup() const;
  /// min(tail, limit)
  double liminf() const;
  /// Distance of the sequence from `target`: |limit - target| when the tail
  /// deviations shrink monotonically toward it, otherwise the largest tail
  /// deviation. Index of the worst raw deviation in `worst_index`.
  double distance_to(double target, std::size_t* worst_index = nullptr) const;
  /// Relative growth of the tail per decade of 1/s (least-squares slope of
  /// value against -log10(s), divided by the mean |value|).
  double growth_per_decade() const;

  json to_json() const;
};

LimsupEstimate tail_estimate(std::vector<double> grid, std::vector<double> values,
                             std::vector<double> s, double window = 0.25);

/// {ceil(10^{k/per_decade})} up to n_max, with n_max appended.
std::vector<long long> geometric_index_grid(long long n_max, int per_decade = 4);

/// 10^{-k/per_decade} for k = k0..k1 (decreasing).
std::vector<double> decimal_grid(int k0, int k1, int per_decade);

}  // namespace tauber
