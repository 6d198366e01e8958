#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "polarbounds/bounds.hpp"
#include "polarbounds/generate.hpp"

namespace polarbounds {

// Stable key order so serialized reports are byte-identical across runs.
using json = nlohmann::ordered_json;

inline constexpr const char* kSchemaTag = "polar-bounds/1";

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline json to_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

inline cplx complex_from_json(const json& j) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im")) {
    throw ParseError("expected complex object {re, im}");
  }
  return {j.at("re").get<double>(), j.at("im").get<double>()};
}

// The instance schema stores the factored form: hypotheses stay exactly
// verifiable after a round trip.
inline json to_json(const Instance& inst) {
  json j;
  j["schema"] = kSchemaTag;
  j["bound"] = to_string(inst.bound_id);
  j["k"] = inst.k;
  j["alpha"] = inst.alpha;
  if (inst.polar) {
    j["polar"] = {
        {"regime",
         inst.polar->regime == PolarParameter::Regime::OUTER ? "OUTER"
                                                             : "INNER"},
        {"re", inst.polar->value.real()},
        {"im", inst.polar->value.imag()},
    };
  } else {
    j["polar"] = nullptr;
  }
  json roots = json::array();
  for (const cplx& r : inst.poly.plain_roots) roots.push_back(to_json(r));
  j["poly"] = {
      {"scale", to_json(inst.poly.leading_scale)},
      {"plain_roots", std::move(roots)},
      {"z0", to_json(inst.poly.special_root)},
      {"s", inst.poly.special_multiplicity},
  };
  return j;
}

inline Instance instance_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("instance: expected object");
  if (j.value("schema", std::string{}) != kSchemaTag) {
    throw ParseError("instance: missing or unsupported schema tag");
  }
  Instance inst;
  const auto id = parse_bound_id(j.at("bound").get<std::string>());
  if (!id) throw ParseError("instance: unknown bound id");
  inst.bound_id = *id;
  inst.k = j.at("k").get<double>();
  inst.alpha = j.at("alpha").get<double>();
  if (j.contains("polar") && !j.at("polar").is_null()) {
    const json& pj = j.at("polar");
    const std::string regime = pj.at("regime").get<std::string>();
    const cplx v{pj.at("re").get<double>(), pj.at("im").get<double>()};
    if (regime == "OUTER") {
      inst.polar = PolarParameter::outer(v);
    } else if (regime == "INNER") {
      inst.polar = PolarParameter::inner(v);
    } else {
      throw ParseError("instance: unknown polar regime");
    }
  }
  const json& pj = j.at("poly");
  inst.poly.leading_scale = complex_from_json(pj.at("scale"));
  for (const json& rj : pj.at("plain_roots")) {
    inst.poly.plain_roots.push_back(complex_from_json(rj));
  }
  inst.poly.special_root = complex_from_json(pj.at("z0"));
  inst.poly.special_multiplicity = pj.at("s").get<int>();
  if (inst.poly.special_multiplicity < 0) {
    throw ParseError("instance: s must be >= 0");
  }
  return inst;
}

inline json to_json(const BoundEvaluation& ev) {
  json j;
  j["bound"] = to_string(ev.bound_id);
  j["mode"] = to_string(ev.mode);
  j["direction"] = ev.lower_bound ? "LOWER" : "UPPER";
  j["lhs"] = {{"lo", ev.lhs_lo}, {"hi", ev.lhs_hi}};
  j["rhs_min"] = ev.rhs_min;
  j["margin"] = ev.margin;
  j["ratio"] = ev.ratio;
  j["witness_angle"] = ev.witness_angle;
  j["tol"] = ev.tol;
  j["outcome"] = to_string(ev.outcome);
  j["hypothesis_ok"] = ev.hypothesis_ok;
  j["hypothesis_failures"] = ev.hypothesis_failures;
  return j;
}

inline json to_json(const HypothesisReport& rep) {
  json clauses = json::array();
  for (const auto& c : rep.clauses) {
    clauses.push_back(json{{"clause", c.name}, {"ok", c.ok}});
  }
  return json{{"ok", rep.ok()}, {"clauses", std::move(clauses)}};
}

inline json to_json(const GeneratorSpec& spec) {
  json j;
  j["schema"] = kSchemaTag;
  j["bound"] = to_string(spec.bound_id);
  j["degree"] = spec.degree;
  j["s"] = spec.special_multiplicity;
  j["k"] = spec.k;
  if (spec.z0_policy.kind == Z0Policy::Kind::FIXED) {
    j["z0_policy"] = {{"kind", "FIXED"}, {"value", to_json(spec.z0_policy.fixed)}};
  } else {
    j["z0_policy"] = {{"kind", "ANNULUS"},
                      {"r_lo", spec.z0_policy.r_lo},
                      {"r_hi", spec.z0_policy.r_hi}};
  }
  j["root_mod_lo"] = spec.root_mod_lo;
  j["root_mod_hi"] = spec.root_mod_hi;
  j["polar_mod_lo"] = spec.polar_mod_lo;
  j["polar_mod_hi"] = spec.polar_mod_hi;
  if (spec.alpha_policy.kind == AlphaPolicy::Kind::FIXED) {
    j["alpha_policy"] = {{"kind", "FIXED"}, {"value", spec.alpha_policy.value}};
  } else {
    j["alpha_policy"] = {{"kind", "UNIFORM"}};
  }
  j["seed"] = spec.seed;
  return j;
}

inline GeneratorSpec spec_from_json(const json& j) {
  GeneratorSpec spec;
  const auto id = parse_bound_id(j.at("bound").get<std::string>());
  if (!id) throw ParseError("spec: unknown bound id");
  spec.bound_id = *id;
  spec.degree = j.at("degree").get<int>();
  spec.special_multiplicity = j.at("s").get<int>();
  spec.k = j.at("k").get<double>();
  const json& zj = j.at("z0_policy");
  if (zj.at("kind").get<std::string>() == "FIXED") {
    spec.z0_policy = {Z0Policy::Kind::FIXED, complex_from_json(zj.at("value")),
                      0.0, 0.0};
  } else {
    spec.z0_policy = {Z0Policy::Kind::ANNULUS, {},
                      zj.at("r_lo").get<double>(),
                      zj.at("r_hi").get<double>()};
  }
  spec.root_mod_lo = j.at("root_mod_lo").get<double>();
  spec.root_mod_hi = j.at("root_mod_hi").get<double>();
  spec.polar_mod_lo = j.at("polar_mod_lo").get<double>();
  spec.polar_mod_hi = j.at("polar_mod_hi").get<double>();
  const json& aj = j.at("alpha_policy");
  if (aj.at("kind").get<std::string>() == "FIXED") {
    spec.alpha_policy = {AlphaPolicy::Kind::FIXED,
                         aj.at("value").get<double>()};
  } else {
    spec.alpha_policy = {AlphaPolicy::Kind::UNIFORM, 0.0};
  }
  spec.seed = j.at("seed").get<std::uint64_t>();
  return spec;
}

}  // namespace polarbounds
