#pragma once
// JSON encodings shared by the report writer and the recheck pass. Large
// integers travel as decimal strings.

#include <string>
#include <vector>

#include "json.hpp"

#include "codeg/codegree.hpp"
#include "codeg/error.hpp"
#include "codeg/exact_arith.hpp"
#include "codeg/expr.hpp"

namespace codeg {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

namespace jsonio {

inline Json fi(const FactoredInt& x) { return x.decimal(); }

inline Json fi_list(const std::vector<FactoredInt>& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(x.decimal());
  return a;
}

inline Json bindings(const Bindings& b) {
  Json o = Json::object();
  for (const auto& [k, v] : b) o[k] = v;
  return o;
}

inline Json poly(const IntPoly& p) { return p.coeffs(); }

inline Json cert(const PositivityCertificate& c, char var = 'q') {
  Json o;
  o["poly"] = poly(c.poly);
  o["poly_text"] = c.poly.to_string(var);
  o["from"] = c.from;
  o["cauchy_bound"] = c.cauchy_bound;
  o["kind"] = c.kind == CertKind::Positive ? "positive" : "nonvanishing";
  Json pts = Json::array();
  for (const auto& [q, v] : c.checked_points) pts.push_back(Json::array({q, to_string(v)}));
  o["checked_points"] = std::move(pts);
  return o;
}

// ---- reading; every accessor throws a parse error on malformed input

[[noreturn]] inline void bad(const std::string& what) { fail(ErrorKind::Parse, "certificate: " + what); }

inline const Json& at(const Json& o, const char* key) {
  if (!o.is_object() || !o.contains(key)) bad(std::string("missing field '") + key + "'");
  return o.at(key);
}

inline std::string str(const Json& o, const char* key) {
  const Json& v = at(o, key);
  if (!v.is_string()) bad(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

inline std::int64_t i64(const Json& o, const char* key) {
  const Json& v = at(o, key);
  if (!v.is_number_integer()) bad(std::string("field '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

inline bool boolean(const Json& o, const char* key) {
  const Json& v = at(o, key);
  if (!v.is_boolean()) bad(std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

inline const Json& arr(const Json& o, const char* key) {
  const Json& v = at(o, key);
  if (!v.is_array()) bad(std::string("field '") + key + "' must be an array");
  return v;
}

inline FactoredInt read_fi(const Json& v) {
  if (!v.is_string()) bad("expected a decimal string");
  try {
    return factorize_u128(parse_u128(v.get<std::string>()));
  } catch (const Error& e) {
    bad(std::string("bad integer: ") + e.what());
  }
}

inline FactoredInt fi_at(const Json& o, const char* key) { return read_fi(at(o, key)); }

inline std::vector<FactoredInt> fi_list_at(const Json& o, const char* key) {
  std::vector<FactoredInt> out;
  for (const auto& v : arr(o, key)) out.push_back(read_fi(v));
  return out;
}

inline Bindings read_bindings(const Json& v) {
  if (!v.is_object()) bad("parameters must be an object");
  Bindings b;
  for (const auto& [k, x] : v.items()) {
    if (!x.is_number_integer()) bad("parameter values must be integers");
    b[k] = x.get<std::int64_t>();
  }
  return b;
}

inline IntPoly read_poly(const Json& v) {
  if (!v.is_array()) bad("polynomial must be a coefficient array");
  std::vector<std::int64_t> c;
  for (const auto& x : v) {
    if (!x.is_number_integer()) bad("polynomial coefficients must be integers");
    c.push_back(x.get<std::int64_t>());
  }
  return IntPoly(std::move(c));
}

inline PositivityCertificate read_cert(const Json& o) {
  PositivityCertificate c;
  c.poly = read_poly(at(o, "poly"));
  c.from = i64(o, "from");
  c.cauchy_bound = i64(o, "cauchy_bound");
  std::string k = str(o, "kind");
  if (k == "positive") c.kind = CertKind::Positive;
  else if (k == "nonvanishing") c.kind = CertKind::Nonvanishing;
  else bad("unknown certificate kind " + k);
  for (const auto& p : arr(o, "checked_points")) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_string()) bad("bad checked point");
    i128 v;
    try {
      v = parse_i128(p[1].get<std::string>());
    } catch (const Error& e) {
      bad(std::string("bad checked value: ") + e.what());
    }
    c.checked_points.emplace_back(p[0].get<std::int64_t>(), v);
  }
  return c;
}

/// Full check of a serialized certificate: the stated points must be the
/// ones the certificate covers, with the values the polynomial takes.
inline bool recheck_cert_json(const Json& o, std::string* why = nullptr) {
  PositivityCertificate c = read_cert(o);
  auto no = [&](const std::string& w) {
    if (why) *why = w;
    return false;
  };
  if (!recheck_certificate(c)) return no("certificate for " + c.poly.to_string('q') + " does not recheck");
  if (c.poly.degree() <= 0) return true;
  std::int64_t expected = c.cauchy_bound >= c.from ? c.cauchy_bound - c.from + 1 : 0;
  if (static_cast<std::int64_t>(c.checked_points.size()) != expected) return no("checked point count mismatch");
  for (std::size_t i = 0; i < c.checked_points.size(); ++i) {
    auto [q, v] = c.checked_points[i];
    if (q != c.from + static_cast<std::int64_t>(i) || c.poly.eval(q) != v) return no("checked point value mismatch");
  }
  return true;
}

}  // namespace jsonio
}  // namespace codeg
