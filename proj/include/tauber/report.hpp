#pragma once

#include <filesystem>
#include <string>

#include "tauber/scenario.hpp"

namespace tauber {

json report_to_json(const RunReport& r);
RunReport report_from_json(const json& j);

/// check,parameter,value,verdict; nested checks are named parent/child.
std::string report_to_csv(const RunReport& r);

enum class Format { json, csv, both };

/// Writes <out>/<scenario>.json and/or .csv; returns the paths written.
/// Throws std::runtime_error naming the path on IO failure.
std::vector<std::filesystem::path> emit(const RunReport& r, Format f, const std::filesystem::path& out);

/// Shortest decimal that round-trips; non-finite values as +inf, -inf, nan.
std::string format_number(double v);

}  // namespace tauber
