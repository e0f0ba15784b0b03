#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "tauber/convergence.hpp"
#include "tauber/measure.hpp"
#include "tauber/tauberian.hpp"
#include "tauber/verdict.hpp"

namespace tauber {

struct CheckSpec {
  std::string name;
  std::string op;
  Status expect = Status::pass;
  json params = json::object();  // the check object minus name/op/expect
};

/// A validated scenario. `source` keeps the input document so a report can
/// echo it and the echo loads back to the same scenario.
struct Scenario {
  std::string name;
  ConvergenceConfig convergence;
  TauberianConfig tauberian;
  std::map<std::string, SignedMeasure> measures;
  std::map<std::string, MeasureSequence> sequences;
  std::vector<CheckSpec> checks;
  json source;
};

struct Overrides {
  std::optional<long long> n_max;
  std::optional<double> tol;
};

/// Throws ParseError (malformed JSON, with line and column) or
/// ValidationError naming the offending field.
Scenario load_scenario(const std::filesystem::path& path, const Overrides& o = {});
Scenario load_scenario_json(const json& doc, const Overrides& o = {});

struct CheckResult {
  std::string name;
  std::string op;
  Status expect = Status::pass;
  VerdictReport report;
  double seconds = 0.0;  // kept out of the serialised report

  bool met() const { return report.status == expect; }
};

struct RunReport {
  std::string scenario;
  std::string version;
  json environment;
  std::vector<CheckResult> checks;
  json scenario_echo;

  /// 0 when every check met its expectation, 2 when any check errored or
  /// was inconclusive without that being expected, 1 otherwise.
  int exit_code() const;
};

/// Runs one check; errors are captured into an error report.
CheckResult run_check(const Scenario& s, const CheckSpec& c);

/// Checks run in scenario order. `progress` (may be null) sees each result.
RunReport run(const Scenario& s, const std::function<void(const CheckResult&)>& progress = {});

std::vector<std::string> known_ops();

}  // namespace tauber
