#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "adnb/instance.hpp"
#include "adnb/rational.hpp"

namespace adnb::detail {

using json = nlohmann::json;

inline json to_json(const Rational& r) { return to_string(r); }

inline json to_json(const std::vector<Rational>& v) {
  json out = json::array();
  for (const auto& r : v) out.push_back(to_string(r));
  return out;
}

inline json to_json(const std::vector<std::vector<Rational>>& m) {
  json out = json::array();
  for (const auto& row : m) out.push_back(to_json(row));
  return out;
}

inline json to_json(const UtilityMatrix& u) {
  json out = json::array();
  for (const auto& row : u) {
    json r = json::array();
    for (const auto& x : row) {
      if (x.fits_slong_p()) {
        r.push_back(x.get_si());
      } else {
        r.push_back(x.get_str());
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline Rational rational_from(const json& j, const char* what) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return Rational(Integer(std::to_string(j.get<std::uint64_t>())));
    return Rational(Integer(std::to_string(j.get<std::int64_t>())));
  }
  throw InputError(std::string(what) + ": expected a rational string such as \"3/4\"");
}

inline Integer integer_from(const json& j, const char* what) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return Integer(std::to_string(j.get<std::uint64_t>()));
    return Integer(std::to_string(j.get<std::int64_t>()));
  }
  if (j.is_string()) {
    Rational r = parse_rational(j.get<std::string>());
    if (!is_integer(r)) throw InputError(std::string(what) + ": expected an integer");
    return r.get_num();
  }
  throw InputError(std::string(what) + ": expected an integer");
}

inline std::vector<Rational> rational_vector(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + ": expected an array");
  std::vector<Rational> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(rational_from(e, what));
  return out;
}

inline std::vector<std::vector<Rational>> rational_matrix(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + ": expected an array of arrays");
  std::vector<std::vector<Rational>> out;
  for (const auto& row : j) out.push_back(rational_vector(row, what));
  return out;
}

inline UtilityMatrix integer_matrix(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + ": expected an array of arrays");
  UtilityMatrix out;
  for (const auto& row : j) {
    if (!row.is_array()) throw InputError(std::string(what) + ": expected an array of arrays");
    std::vector<Integer> r;
    for (const auto& e : row) r.push_back(integer_from(e, what));
    out.push_back(std::move(r));
  }
  return out;
}

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace adnb::detail
