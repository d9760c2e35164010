// SPDX-License-Identifier: Apache-2.0
//
// Strict accessors over nlohmann::json that turn shape errors into InputError
// messages carrying the offending location.
#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "evoc/error.hpp"

namespace evoc::io::detail {

inline nlohmann::json parse_json(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(what + ": invalid JSON: " + e.what());
  }
}

inline std::string format_number(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

inline void require_object(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
}

inline void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> known,
                                const std::string& where) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) throw InputError(where + ": unknown key \"" + item.key() + "\"");
  }
}

inline const nlohmann::json& member(const nlohmann::json& j, const char* key,
                                    const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) throw InputError(where + ": missing \"" + key + "\"");
  return *it;
}

inline double as_number(const nlohmann::json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InputError(where + ": expected a finite number");
  return v;
}

inline double get_number(const nlohmann::json& j, const char* key, const std::string& where) {
  return as_number(member(j, key, where), where + "." + key);
}

inline std::string get_string(const nlohmann::json& j, const char* key, const std::string& where) {
  const nlohmann::json& v = member(j, key, where);
  if (!v.is_string()) throw InputError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

template <std::size_t N>
std::array<double, N> number_array(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != N) {
    throw InputError(where + ": expected an array of " + std::to_string(N) + " numbers");
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = as_number(j[i], where);
  return out;
}

}  // namespace evoc::io::detail
