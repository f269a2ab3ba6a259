#pragma once

// Field-level helpers shared by the DFG, characterization and plan readers.
// Every failure is reported as Error(Parse) with a JSON path such as
// "tasks[2].f_max_mhz".

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

#include "pumpwise/error.hpp"
#include "pumpwise/rational.hpp"

namespace pumpwise::json_util {

using nlohmann::json;
using nlohmann::ordered_json;

inline json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
}

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::Parse, path + ": " + what);
}

inline void expect_object(const json& v, const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object");
}

inline void reject_unknown(const json& obj, std::initializer_list<std::string_view> keys,
                           const std::string& path) {
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (auto k : keys) known = known || k == key;
    if (!known) fail(path, "unknown field '" + key + "'");
  }
}

inline std::string child(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

inline std::int64_t get_int(const json& v, const std::string& path) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    double d = v.get<double>();
    if (d == static_cast<double>(static_cast<std::int64_t>(d))) {
      return static_cast<std::int64_t>(d);
    }
  }
  fail(path, "expected an integer");
}

inline Rational get_rational(const json& v, const std::string& path) {
  try {
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_number_float()) return parse_rational(v.dump());
    if (v.is_string()) return parse_rational(v.get<std::string>());
  } catch (const Error& e) {
    fail(path, e.what());
  }
  fail(path, "expected a number or a \"p/q\" string");
}

inline std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

inline const json& require(const json& obj, std::string_view key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, "missing field '" + std::string(key) + "'");
  return *it;
}

inline ordered_json to_json(const Rational& r) {
  if (r.denominator() == 1) return r.numerator();
  std::string text = to_string(r);
  if (text.find('/') != std::string::npos) return text;
  return std::stod(text);
}

}  // namespace pumpwise::json_util
