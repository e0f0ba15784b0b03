// tauber: run a scenario file and write a verdict report.
#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "tauber/errors.hpp"
#include "tauber/report.hpp"
#include "tauber/scenario.hpp"
#include "tauber/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of Laplace-transform Tauberian theorems"};
  app.set_version_flag("--version", tauber::kVersion);
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run every check in a scenario file");
  std::string scenario_path;
  std::string out_dir = ".";
  std::string format = "json";
  std::optional<long long> n_max;
  std::optional<double> tol;
  bool quiet = false;
  run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"json", "csv", "both"}))
      ->capture_default_str();
  run->add_option("--n-max", n_max, "Override config.n_max")->check(CLI::PositiveNumber);
  run->add_option("--tol", tol, "Override config.tol")->check(CLI::NonNegativeNumber);
  run->add_flag("--quiet", quiet, "No progress output");

  CLI11_PARSE(app, argc, argv);

  try {
    const tauber::Scenario s = tauber::load_scenario(scenario_path, tauber::Overrides{n_max, tol});
    auto progress = [&](const tauber::CheckResult& c) {
      if (quiet) return;
      std::fprintf(stderr, "%-32s %-13s expect %-12s %s  %.2fs\n", c.name.c_str(),
                   tauber::to_string(c.report.status).c_str(), tauber::to_string(c.expect).c_str(),
                   c.met() ? "ok" : "UNMET", c.seconds);
      if (!c.report.diagnostic.empty() && c.report.status == tauber::Status::error)
        std::fprintf(stderr, "    %s\n", c.report.diagnostic.c_str());
    };
    const tauber::RunReport r = tauber::run(s, progress);
    const auto f = format == "csv" ? tauber::Format::csv : format == "both" ? tauber::Format::both : tauber::Format::json;
    for (const auto& p : tauber::emit(r, f, out_dir))
      if (!quiet) std::cerr << "wrote " << p.string() << '\n';
    return r.exit_code();
  } catch (const tauber::ValidationError& e) {
    std::cerr << "tauber: invalid scenario: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "tauber: " << e.what() << '\n';
    return 2;
  }
}
