#include "tauber/measure_json.hpp"

#include <cmath>

#include "tauber/errors.hpp"

namespace tauber {

double plain_number(const json& value, const std::string& field) {
  if (!value.is_number()) throw ValidationError(field, "expected a number");
  return value.get<double>();
}

namespace {

json term_to_json(const Term& t) {
  json j{{"c", t.coeff}, {"k", t.power}, {"a", t.decay}};
  switch (t.osc) {
    case Oscillation::none:
      j["osc"] = nullptr;
      break;
    case Oscillation::cos:
      j["osc"] = json{{"cos", t.freq}};
      break;
    case Oscillation::sin:
      j["osc"] = json{{"sin", t.freq}};
      break;
  }
  return j;
}

const json& require(const json& obj, const char* key, const std::string& field) {
  if (!obj.is_object() || !obj.contains(key))
    throw ValidationError(field + "." + key, "missing");
  return obj.at(key);
}

Term term_from_json(const json& j, const std::string& field, const NumberResolver& number) {
  Term t;
  t.coeff = number(require(j, "c", field), field + ".c");
  t.power = j.contains("k") ? number(j.at("k"), field + ".k") : 0.0;
  t.decay = j.contains("a") ? number(j.at("a"), field + ".a") : 0.0;
  if (!(t.power > -1.0)) throw ValidationError(field + ".k", "power must be > -1");
  if (!(t.decay >= 0.0)) throw ValidationError(field + ".a", "decay must be >= 0");
  if (j.contains("osc") && !j.at("osc").is_null()) {
    const json& o = j.at("osc");
    if (o.contains("cos")) {
      t.osc = Oscillation::cos;
      t.freq = number(o.at("cos"), field + ".osc.cos");
    } else if (o.contains("sin")) {
      t.osc = Oscillation::sin;
      t.freq = number(o.at("sin"), field + ".osc.sin");
    } else {
      throw ValidationError(field + ".osc", "expected {\"cos\": b} or {\"sin\": b}");
    }
  }
  return t;
}

}  // namespace

json to_json(const SignedMeasure& mu) {
  json atoms = json::array();
  for (const Atom& a : mu.atoms()) atoms.push_back({{"x", a.location}, {"w", a.weight}});
  json segs = json::array();
  for (const DensitySegment& s : mu.segments()) {
    json terms = json::array();
    for (const Term& t : s.density.terms()) terms.push_back(term_to_json(t));
    json js{{"lo", s.lo}, {"hi", s.unbounded() ? json(nullptr) : json(s.hi)}, {"terms", terms}};
    if (s.mask) {
      json pieces = json::array();
      for (const auto& p : s.mask->pieces)
        pieces.push_back({{"begin", p.begin}, {"end", p.end}, {"w", p.weight}});
      js["mask"] = {{"period", s.mask->period}, {"anchor", s.mask->anchor}, {"pieces", pieces}};
    }
    segs.push_back(std::move(js));
  }
  return {{"atoms", atoms}, {"segments", segs}};
}

SignedMeasure measure_from_json(const json& j, const std::string& field,
                                const NumberResolver& number) {
  if (!j.is_object()) throw ValidationError(field, "expected an object");
  std::vector<Atom> atoms;
  if (j.contains("atoms")) {
    const json& ja = j.at("atoms");
    if (!ja.is_array()) throw ValidationError(field + ".atoms", "expected an array");
    for (std::size_t i = 0; i < ja.size(); ++i) {
      const std::string f = field + ".atoms[" + std::to_string(i) + "]";
      const double x = number(require(ja[i], "x", f), f + ".x");
      const double w = number(require(ja[i], "w", f), f + ".w");
      if (!(x >= 0.0) || !std::isfinite(x)) throw ValidationError(f + ".x", "must be finite and >= 0");
      if (!std::isfinite(w)) throw ValidationError(f + ".w", "must be finite");
      atoms.push_back({x, w});
    }
  }
  std::vector<DensitySegment> segs;
  if (j.contains("segments")) {
    const json& js = j.at("segments");
    if (!js.is_array()) throw ValidationError(field + ".segments", "expected an array");
    for (std::size_t i = 0; i < js.size(); ++i) {
      const std::string f = field + ".segments[" + std::to_string(i) + "]";
      const json& s = js[i];
      DensitySegment seg;
      seg.lo = number(require(s, "lo", f), f + ".lo");
      const json& hi = require(s, "hi", f);
      seg.hi = hi.is_null() ? kInf : number(hi, f + ".hi");
      if (!(seg.lo >= 0.0) || !std::isfinite(seg.lo)) throw ValidationError(f + ".lo", "must be finite and >= 0");
      if (!(seg.hi > seg.lo)) throw ValidationError(f + ".hi", "must exceed lo");
      const json& jt = require(s, "terms", f);
      if (!jt.is_array()) throw ValidationError(f + ".terms", "expected an array");
      std::vector<Term> terms;
      for (std::size_t k = 0; k < jt.size(); ++k)
        terms.push_back(term_from_json(jt[k], f + ".terms[" + std::to_string(k) + "]", number));
      seg.density = ExpressionDensity(std::move(terms));
      if (s.contains("mask") && !s.at("mask").is_null()) {
        const json& m = s.at("mask");
        PeriodicMask mask;
        mask.period = number(require(m, "period", f + ".mask"), f + ".mask.period");
        mask.anchor = number(require(m, "anchor", f + ".mask"), f + ".mask.anchor");
        if (!(mask.period > 0.0)) throw ValidationError(f + ".mask.period", "must be > 0");
        for (const json& p : require(m, "pieces", f + ".mask")) {
          mask.pieces.push_back({number(p.at("begin"), f + ".mask.begin"),
                                 number(p.at("end"), f + ".mask.end"),
                                 number(p.at("w"), f + ".mask.w")});
        }
        seg.mask = std::move(mask);
      }
      segs.push_back(std::move(seg));
    }
  }
  return SignedMeasure(std::move(atoms), std::move(segs));
}

}  // namespace tauber
