#include "tauber/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tauber {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json report_to_json(const RunReport& r) {
  json checks = json::array();
  std::size_t met = 0;
  for (const CheckResult& c : r.checks) {
    met += c.met() ? 1 : 0;
    checks.push_back(json{{"name", c.name},
                          {"op", c.op},
                          {"expect", to_string(c.expect)},
                          {"met", c.met()},
                          {"report", to_json(c.report)}});
  }
  return json{{"scenario", r.scenario},
              {"version", r.version},
              {"environment", r.environment},
              {"checks", checks},
              {"summary", json{{"checks", r.checks.size()}, {"met", met}, {"exit_code", r.exit_code()}}},
              {"scenario_echo", r.scenario_echo}};
}

RunReport report_from_json(const json& j) {
  RunReport r;
  r.scenario = j.at("scenario").get<std::string>();
  r.version = j.at("version").get<std::string>();
  r.environment = j.at("environment");
  r.scenario_echo = j.at("scenario_echo");
  for (const json& c : j.at("checks")) {
    CheckResult cr;
    cr.name = c.at("name").get<std::string>();
    cr.op = c.at("op").get<std::string>();
    cr.expect = status_from_string(c.at("expect").get<std::string>());
    cr.report = verdict_from_json(c.at("report"));
    r.checks.push_back(std::move(cr));
  }
  return r;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void csv_rows(std::ostringstream& os, const std::string& name, const VerdictReport& v) {
  const std::string verdict = to_string(v.status);
  os << csv_field(name) << ",statistic," << format_number(v.statistic) << ',' << verdict << '\n';
  for (const Witness& w : v.witnesses) {
    std::string param;
    for (const auto& [k, x] : w.params) {
      if (!param.empty()) param += ';';
      param += k + "=" + format_number(x);
    }
    os << csv_field(name) << ',' << csv_field(param) << ',' << format_number(w.value) << ',' << verdict << '\n';
  }
  for (const VerdictReport& c : v.children) csv_rows(os, name + "/" + c.quantity, c);
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(p.string() + ": cannot open for writing");
  out << content;
  out.close();
  if (!out) throw std::runtime_error(p.string() + ": write failed");
}

}  // namespace

std::string report_to_csv(const RunReport& r) {
  std::ostringstream os;
  os << "check,parameter,value,verdict\n";
  for (const CheckResult& c : r.checks) csv_rows(os, c.name, c.report);
  return os.str();
}

std::vector<std::filesystem::path> emit(const RunReport& r, Format f, const std::filesystem::path& out) {
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw std::runtime_error(out.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  if (f != Format::csv) {
    const auto p = out / (r.scenario + ".json");
    write_file(p, report_to_json(r).dump(2) + "\n");
    written.push_back(p);
  }
  if (f != Format::json) {
    const auto p = out / (r.scenario + ".csv");
    write_file(p, report_to_csv(r));
    written.push_back(p);
  }
  return written;
}

}  // namespace tauber
