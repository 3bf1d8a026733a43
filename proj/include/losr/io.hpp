#pragma once

// JSON artifacts: behaviors and certificates. Keys are emitted in a fixed
// order so artifact files diff cleanly across runs. Rational mode stores
// entries as exact "num/den" strings, extended with an "r2" term for values
// in Q(sqrt 2) (e.g. "1/2+1/8r2"); float mode stores plain numbers.

#include <json.hpp>
#include <stdexcept>
#include <string>

#include "losr/behavior.hpp"
#include "losr/certify.hpp"

namespace losr {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

namespace detail {

inline std::string rational_str(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

inline Rational rational_parse(const std::string& s) {
  try {
    return Rational(s);
  } catch (const std::exception&) {
    throw IoError("malformed rational: '" + s + "'");
  }
}

inline RootTwo root_two_parse(const std::string& s) {
  try {
    return RootTwo::parse(s);
  } catch (const std::exception&) {
    throw IoError("malformed Q(sqrt2) value: '" + s + "'");
  }
}

inline Json parties_to_json(const std::vector<PartySpec>& parties) {
  Json arr = Json::array();
  for (const auto& p : parties)
    arr.push_back({{"name", p.name},
                   {"inputs", p.input_cardinality},
                   {"outputs", p.output_cardinality}});
  return arr;
}

inline std::vector<PartySpec> parties_from_json(const Json& arr) {
  if (!arr.is_array() || arr.empty())
    throw IoError("behavior JSON: 'parties' must be a nonempty array");
  std::vector<PartySpec> parties;
  for (const auto& p : arr) {
    PartySpec spec;
    spec.name = p.at("name").get<std::string>();
    spec.input_cardinality = p.at("inputs").get<int>();
    spec.output_cardinality = p.at("outputs").get<int>();
    if (spec.input_cardinality < 1 || spec.output_cardinality < 1)
      throw IoError("behavior JSON: cardinalities must be positive");
    parties.push_back(std::move(spec));
  }
  return parties;
}

}  // namespace detail

inline Json behavior_to_json(const Behavior<RootTwo>& b) {
  Json j;
  j["type"] = "behavior";
  j["mode"] = "rational";
  j["parties"] = detail::parties_to_json(b.parties());
  Json probs = Json::array();
  for (long long t = 0; t < b.table().size(); ++t)
    probs.push_back(b.table()[t].str());
  j["probabilities"] = std::move(probs);
  return j;
}

inline Json behavior_to_json(const Behavior<double>& b) {
  Json j;
  j["type"] = "behavior";
  j["mode"] = "float";
  j["parties"] = detail::parties_to_json(b.parties());
  Json probs = Json::array();
  for (long long t = 0; t < b.table().size(); ++t) probs.push_back(b.table()[t]);
  j["probabilities"] = std::move(probs);
  return j;
}

inline std::string behavior_mode(const Json& j) {
  if (j.value("type", "") != "behavior")
    throw IoError("not a behavior JSON document");
  const std::string mode = j.value("mode", "");
  if (mode != "rational" && mode != "float")
    throw IoError("behavior JSON: mode must be 'rational' or 'float'");
  return mode;
}

/// Exact parse; requires rational mode.
inline Behavior<RootTwo> behavior_from_json_exact(const Json& j) {
  if (behavior_mode(j) != "rational")
    throw IoError("float-mode behavior cannot be read exactly");
  auto b = Behavior<RootTwo>::zero(detail::parties_from_json(j.at("parties")));
  const auto& probs = j.at("probabilities");
  if (!probs.is_array() ||
      static_cast<long long>(probs.size()) != b.table().size())
    throw IoError("behavior JSON: probability count does not match the parties");
  for (long long t = 0; t < b.table().size(); ++t)
    b.table()[t] = detail::root_two_parse(probs[t].get<std::string>());
  return b;
}

/// Float parse; accepts both modes.
inline Behavior<double> behavior_from_json_float(const Json& j) {
  const bool rational = behavior_mode(j) == "rational";
  auto b = Behavior<double>::zero(detail::parties_from_json(j.at("parties")));
  const auto& probs = j.at("probabilities");
  if (!probs.is_array() ||
      static_cast<long long>(probs.size()) != b.table().size())
    throw IoError("behavior JSON: probability count does not match the parties");
  for (long long t = 0; t < b.table().size(); ++t)
    b.table()[t] = rational
                       ? detail::root_two_parse(probs[t].get<std::string>()).to_double()
                       : probs[t].get<double>();
  return b;
}

inline Json certificate_to_json(const Certificate& cert) {
  Json j;
  j["type"] = "certificate";
  j["scenario_n"] = cert.scenario_n;
  j["order"] = cert.order;
  j["num_inflations"] = cert.num_inflations;
  j["num_rows"] = cert.num_rows;
  j["num_vars"] = cert.num_vars;
  Json duals = Json::array();
  for (const auto& [r, y] : cert.duals)
    duals.push_back({r, detail::rational_str(y)});
  j["duals"] = std::move(duals);
  Json coeffs = Json::array();
  for (const auto& [t, c] : cert.witness_coeffs)
    coeffs.push_back({t, detail::rational_str(c)});
  j["witness"] = {{"coefficients", std::move(coeffs)},
                  {"constant", detail::rational_str(cert.witness_constant)}};
  j["verification_value"] = cert.verification_value.str();
  return j;
}

inline Certificate certificate_from_json(const Json& j) {
  if (j.value("type", "") != "certificate")
    throw IoError("not a certificate JSON document");
  Certificate cert;
  cert.scenario_n = j.at("scenario_n").get<int>();
  cert.order = j.at("order").get<int>();
  cert.num_inflations = j.at("num_inflations").get<int>();
  cert.num_rows = j.at("num_rows").get<long long>();
  cert.num_vars = j.at("num_vars").get<long long>();
  for (const auto& e : j.at("duals")) {
    if (!e.is_array() || e.size() != 2) throw IoError("malformed dual entry");
    cert.duals.emplace_back(e[0].get<long long>(),
                            detail::rational_parse(e[1].get<std::string>()));
  }
  const auto& witness = j.at("witness");
  for (const auto& e : witness.at("coefficients")) {
    if (!e.is_array() || e.size() != 2) throw IoError("malformed witness entry");
    cert.witness_coeffs.emplace_back(e[0].get<long long>(),
                                     detail::rational_parse(e[1].get<std::string>()));
  }
  cert.witness_constant =
      detail::rational_parse(witness.at("constant").get<std::string>());
  cert.verification_value =
      detail::root_two_parse(j.at("verification_value").get<std::string>());
  return cert;
}

}  // namespace losr
