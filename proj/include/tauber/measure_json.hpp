#pragma once

#include <functional>
#include <json.hpp>
#include <string>

#include "tauber/measure.hpp"

namespace tauber {

using json = nlohmann::json;

/// Resolves a numeric JSON field; `field` is a dotted path used in errors.
using NumberResolver = std::function<double(const json& value, const std::string& field)>;

/// Accepts only JSON numbers.
double plain_number(const json& value, const std::string& field);

/// {"atoms":[{"x":1.0,"w":-1.0}], "segments":[{"lo":0,"hi":null,"terms":[
///   {"c":0.5,"k":1,"a":0,"osc":null},{"c":1,"k":1,"a":0,"osc":{"cos":1.0}}]}]}
/// with hi = null meaning +inf. Segments may carry an optional "mask".
json to_json(const SignedMeasure& mu);

SignedMeasure measure_from_json(const json& j, const std::string& field = "measure",
                                const NumberResolver& number = plain_number);

}  // namespace tauber
