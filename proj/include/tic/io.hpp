#pragma once

#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "tic/audit.hpp"
#include "tic/core.hpp"

namespace tic::io {

using Json = nlohmann::ordered_json;

/// Instance-file diagnostics. Each failure mode has its own code.
class ParseError : public std::runtime_error {
 public:
  enum class Code {
    InvalidJson,
    MissingField,
    NotAString,
    MalformedNumber,
    ZeroDenominator,
    NumberOutOfRange,
    NonPositiveLength,
    NonPositiveCoveringLength,
    EmptyAgentList,
  };

  ParseError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

namespace detail {

inline Coord number_field(const Json& obj, const char* key, std::string_view where) {
  using Code = ParseError::Code;
  const auto& v = obj.at(key);
  if (!v.is_string()) {
    throw ParseError(Code::NotAString, std::string(where) + "." + key + ": expected a number-string");
  }
  try {
    return Rational::parse(v.get<std::string>());
  } catch (const RationalParseError& e) {
    switch (e.reason()) {
      case RationalParseError::Reason::ZeroDenominator:
        throw ParseError(Code::ZeroDenominator, std::string(where) + "." + key + ": " + e.what());
      case RationalParseError::Reason::Overflow:
        throw ParseError(Code::NumberOutOfRange, std::string(where) + "." + key + ": " + e.what());
      default:
        throw ParseError(Code::MalformedNumber, std::string(where) + "." + key + ": " + e.what());
    }
  }
}

}  // namespace detail

/**
 * Reads an instance file:
 *
 *   {"covering_length": "1", "agents": [{"s": "0"}, {"s": "3/2", "length": "1"}]}
 *
 * Numbers are strings holding integers, decimals or "p/q" rationals, parsed
 * exactly. `length` defaults to "1". Agent ids follow file order.
 */
inline Instance parse_instance(std::string_view text) {
  using Code = ParseError::Code;
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(Code::InvalidJson, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError(Code::InvalidJson, "instance file must be a JSON object");
  if (!doc.contains("covering_length")) throw ParseError(Code::MissingField, "missing covering_length");
  if (!doc.contains("agents") || !doc["agents"].is_array()) {
    throw ParseError(Code::MissingField, "missing agents array");
  }
  Coord c = detail::number_field(doc, "covering_length", "instance");
  if (c <= 0) throw ParseError(Code::NonPositiveCoveringLength, "covering_length must be positive");
  const auto& list = doc["agents"];
  if (list.empty()) throw ParseError(Code::EmptyAgentList, "agent list is empty");

  std::vector<Interval> intervals;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& a = list[i];
    std::string where = "agents[" + std::to_string(i) + "]";
    if (!a.is_object() || !a.contains("s")) throw ParseError(Code::MissingField, where + ": missing s");
    Coord s = detail::number_field(a, "s", where);
    Coord length = a.contains("length") ? detail::number_field(a, "length", where) : Coord{1};
    if (length <= 0) throw ParseError(Code::NonPositiveLength, where + ": length must be positive");
    intervals.push_back({s, length});
  }
  return Instance::from_intervals(intervals, c);
}

inline Json instance_json(const Instance& inst) {
  Json agents = Json::array();
  for (const auto& a : inst.in_input_order()) {
    Json entry;
    entry["s"] = a.s.to_string();
    entry["length"] = a.length.to_string();
    agents.push_back(std::move(entry));
  }
  Json doc;
  doc["covering_length"] = inst.covering_length().to_string();
  doc["agents"] = std::move(agents);
  return doc;
}

/// Canonical text; agents in id order so parse(serialize(x)) == x.
inline std::string serialize_instance(const Instance& inst) { return instance_json(inst).dump(2) + "\n"; }

/// FNV-1a 64 of the compact canonical serialization, as 16 hex digits.
inline std::string instance_digest(const Instance& inst) {
  std::string text = instance_json(inst).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// {"rational": "5/3", "decimal": "1.666666666667"}
inline Json number_json(const Coord& v) {
  Json j;
  j["rational"] = v.to_string();
  j["decimal"] = v.to_decimal();
  return j;
}

inline Json ratio_json(const Ratio& r) {
  if (r.unbounded()) {
    Json j;
    j["rational"] = "UNBOUNDED";
    j["decimal"] = "inf";
    return j;
  }
  return number_json(r.value());
}

inline Json interval_json(const Interval& iv) {
  Json j;
  j["s"] = iv.s.to_string();
  j["length"] = iv.length.to_string();
  return j;
}

inline Json lottery_json(const Lottery& lot) {
  Json out = Json::array();
  for (const auto& e : lot.entries()) {
    Json j;
    j["s"] = e.placement.s.to_string();
    j["probability"] = e.probability.to_string();
    out.push_back(std::move(j));
  }
  return out;
}

inline Json witness_json(const DeviationWitness& w) {
  Json j;
  j["agent"] = w.agent;
  j["truth"] = interval_json(w.truth);
  j["misreport"] = interval_json(w.misreport);
  j["true_cost"] = number_json(w.true_cost);
  j["deviated_cost"] = number_json(w.deviated_cost);
  j["kind"] = w.kind == DeviationWitness::Kind::Expected ? "expected" : "realization";
  if (w.kind == DeviationWitness::Kind::Realization) j["realization"] = w.realization;
  return j;
}

inline Json ratio_witness_json(const RatioWitness& w) {
  Json j;
  j["instance"] = instance_json(w.instance);
  j["instance_digest"] = instance_digest(w.instance);
  j["placement"] = w.placement.s.to_string();
  j["sc"] = number_json(w.mechanism_cost);
  j["opt"] = number_json(w.optimal_cost);
  j["ratio"] = ratio_json(w.ratio);
  j["bound"] = number_json(w.bound);
  return j;
}

/// Flattens one report object into a CSV line with the given columns.
/// Nested number objects contribute their rational string.
inline std::string csv_cell(const Json& v) {
  std::string s;
  if (v.is_null()) {
    s = "";
  } else if (v.is_string()) {
    s = v.get<std::string>();
  } else if (v.is_object() && v.contains("rational")) {
    s = v["rational"].get<std::string>();
  } else {
    s = v.dump();
  }
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string quoted = "\"";
    for (char ch : s) {
      if (ch == '"') quoted += '"';
      quoted += ch;
    }
    return quoted + "\"";
  }
  return s;
}

inline std::string csv_line(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
  return out + "\n";
}

}  // namespace tic::io
