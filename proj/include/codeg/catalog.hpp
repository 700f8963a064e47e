#pragma once
// Parametric simple-group families and fixed-group records, loaded from the
// data directory (records/*.rec, families/*.fam, groups/*.gens).

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "codeg/codegree.hpp"
#include "codeg/error.hpp"
#include "codeg/exact_arith.hpp"
#include "codeg/expr.hpp"
#include "codeg/perm_group.hpp"
#include "codeg/text_format.hpp"

namespace codeg {

// ---------------------------------------------------------------- records

inline DegreeData parse_record(const std::string& text, const std::string& origin = "<text>") {
  auto kv = parse_key_values(text, origin);
  DegreeData d;
  d.name = kv.required("name");
  d.label = kv.optional("label").value_or(d.name);
  d.order = parse_factored(kv.required("order"));
  d.provenance = kv.optional("provenance").value_or("");
  auto flag = [&](const char* key) {
    auto v = kv.optional(key);
    if (!v) return false;
    if (*v == "true") return true;
    if (*v == "false") return false;
    fail(ErrorKind::Parse, origin + ": " + key + " must be true or false");
  };
  d.partial = flag("partial");
  d.simple = flag("simple");
  if (auto v = kv.optional("classes")) d.class_count = parse_u64(*v);
  if (auto v = kv.optional("cd_count")) d.cd_count = parse_u64(*v);
  if (auto v = kv.optional("schur_multiplier")) d.schur_multiplier = parse_u64(*v);
  if (auto v = kv.optional("tags"))
    for (auto& t : split(*v, ' '))
      if (!t.empty()) d.tags.push_back(t);
  std::vector<std::pair<std::uint64_t, std::optional<std::uint64_t>>> entries;
  for (const auto& tok : split(kv.required("degrees"), ',')) {
    if (tok.empty()) fail(ErrorKind::Parse, origin + ": empty degree entry");
    std::string body = tok;
    std::optional<std::uint64_t> kernel;
    if (auto at = body.find('@'); at != std::string::npos) {
      kernel = parse_u64(trim(body.substr(at + 1)));
      body = trim(body.substr(0, at));
    }
    std::uint64_t mult = 1;
    if (auto x = body.find('x'); x != std::string::npos) {
      mult = parse_u64(trim(body.substr(x + 1)));
      body = trim(body.substr(0, x));
    }
    std::uint64_t deg = parse_u64(body);
    if (deg == 0 || mult == 0) fail(ErrorKind::Parse, origin + ": zero degree or multiplicity");
    for (std::uint64_t i = 0; i < mult; ++i) entries.emplace_back(deg, kernel);
  }
  std::stable_sort(entries.begin(), entries.end(), [](auto& a, auto& b) { return a.first < b.first; });
  for (auto& [deg, k] : entries) {
    d.degrees.push_back(deg);
    d.kernel_orders.push_back(k);
  }
  validate_degree_data(d);
  return d;
}

inline DegreeData load_record(const std::string& path) { return parse_record(read_file(path), path); }

// ---------------------------------------------------------------- families

struct ParamSpec {
  enum class Kind { PrimePower, Integer };
  std::string name;
  Kind kind = Kind::Integer;
  std::optional<std::uint64_t> characteristic;  // p=2, p=3
  bool odd_characteristic = false;
  bool odd_exponent = false;
  std::int64_t min = 1;

  bool admits(std::int64_t v) const {
    if (v < min) return false;
    if (kind == Kind::Integer) return true;
    if (v < 2) return false;
    auto pp = is_prime_power(v);
    if (!pp) return false;
    if (characteristic && pp->first != *characteristic) return false;
    if (odd_characteristic && pp->first == 2) return false;
    if (odd_exponent && pp->second % 2 == 0) return false;
    return true;
  }
  std::string describe() const {
    std::string s = name + " " + (kind == Kind::PrimePower ? "prime_power" : "integer");
    if (characteristic) s += " p=" + std::to_string(*characteristic);
    if (odd_characteristic) s += " odd";
    if (odd_exponent) s += " odd_exponent";
    s += " min=" + std::to_string(min);
    return s;
  }
};

inline ParamSpec parse_param(const std::string& name, const std::string& spec, const std::string& origin) {
  ParamSpec p;
  p.name = name;
  auto toks = split(spec, ' ');
  if (toks.empty()) fail(ErrorKind::Parse, origin + ": empty param spec");
  if (toks[0] == "prime_power") {
    p.kind = ParamSpec::Kind::PrimePower;
    p.min = 2;
  } else if (toks[0] == "integer") {
    p.kind = ParamSpec::Kind::Integer;
  } else {
    fail(ErrorKind::Parse, origin + ": unknown param kind '" + toks[0] + "'");
  }
  for (std::size_t i = 1; i < toks.size(); ++i) {
    const auto& t = toks[i];
    if (t.empty()) continue;
    if (t.rfind("p=", 0) == 0) p.characteristic = parse_u64(t.substr(2));
    else if (t == "odd") p.odd_characteristic = true;
    else if (t == "odd_exponent") p.odd_exponent = true;
    else if (t.rfind("min=", 0) == 0) p.min = parse_i64(t.substr(4));
    else fail(ErrorKind::Parse, origin + ": unknown param option '" + t + "'");
  }
  return p;
}

/// "n==2", "n>=3" and friends.
struct Condition {
  std::string sym;
  std::string op;
  std::int64_t value = 0;

  bool holds(const Bindings& env) const {
    auto it = env.find(sym);
    if (it == env.end()) fail(ErrorKind::Parameter, "condition on unbound symbol " + sym);
    std::int64_t v = it->second;
    if (op == "==") return v == value;
    if (op == "!=") return v != value;
    if (op == ">=") return v >= value;
    if (op == "<=") return v <= value;
    if (op == ">") return v > value;
    if (op == "<") return v < value;
    fail(ErrorKind::Parse, "bad condition operator " + op);
  }
  std::string text() const { return sym + op + std::to_string(value); }
};

inline Condition parse_condition(const std::string& s, const std::string& origin) {
  static const char* ops[] = {"==", "!=", ">=", "<=", ">", "<"};
  for (const char* op : ops) {
    auto pos = s.find(op);
    if (pos == std::string::npos) continue;
    return {trim(s.substr(0, pos)), op, parse_i64(trim(s.substr(pos + std::string(op).size())))};
  }
  fail(ErrorKind::Parse, origin + ": bad condition '" + s + "'");
}

/// A codegree formula, optionally with the degree it comes from.
struct FamilyFormula {
  std::string label;
  RationalExpr cod;
  std::optional<RationalExpr> degree;
  std::optional<Condition> when;

  bool applies(const Bindings& env) const { return !when || when->holds(env); }
};

inline FamilyFormula parse_formula(const std::string& label, const std::string& body, const std::string& origin) {
  FamilyFormula f;
  f.label = label;
  auto at = body.find('@');
  try {
    f.cod = RationalExpr::parse(trim(body.substr(0, at)));
    if (at != std::string::npos) f.degree = RationalExpr::parse(trim(body.substr(at + 1)));
  } catch (const Error& e) {
    fail(ErrorKind::Parse, origin + ": " + e.what());
  }
  return f;
}

struct MatchPoint {
  Bindings params;
  std::string target;
};

struct GroupFamily {
  std::string name;
  std::string label;
  std::string kind = "formula";  // formula | literature
  std::vector<ParamSpec> params;
  std::vector<std::pair<std::string, RationalExpr>> derived;
  RationalExpr order;
  std::optional<RationalExpr> q_exponent;
  std::vector<FamilyFormula> witnesses;
  std::map<std::string, std::vector<FamilyFormula>> cod_sets;
  std::vector<Bindings> exclusions;
  std::vector<MatchPoint> matches;
  std::set<std::string> flags;
  std::vector<std::pair<RationalExpr, RationalExpr>> identities;
  std::optional<std::uint64_t> cod_count_at_least;
  std::string citation;
  std::string provenance;
  std::string source_text;

  const ParamSpec& prime_power_param() const {
    for (const auto& p : params)
      if (p.kind == ParamSpec::Kind::PrimePower) return p;
    fail(ErrorKind::Data, name + ": no prime-power parameter");
  }
  const ParamSpec* integer_param() const {
    for (const auto& p : params)
      if (p.kind == ParamSpec::Kind::Integer) return &p;
    return nullptr;
  }
  bool has_flag(std::string_view f) const { return flags.count(std::string(f)) > 0; }

  /// Adds derived symbols; throws a parameter error if inadmissible.
  Bindings bind(const Bindings& given) const {
    Bindings env;
    for (const auto& p : params) {
      auto it = given.find(p.name);
      if (it == given.end()) fail(ErrorKind::Parameter, name + ": missing parameter " + p.name);
      if (!p.admits(it->second))
        fail(ErrorKind::Parameter, name + ": " + p.name + "=" + std::to_string(it->second) + " not admissible (" + p.describe() + ")");
      env[p.name] = it->second;
    }
    for (const auto& [k, v] : given)
      if (!env.count(k)) fail(ErrorKind::Parameter, name + ": unknown parameter " + k);
    for (const auto& [sym, e] : derived) env[sym] = e.eval_int(env);
    return env;
  }

  bool excluded(const Bindings& env) const {
    for (const auto& ex : exclusions) {
      bool all = true;
      for (const auto& [k, v] : ex) {
        auto it = env.find(k);
        if (it == env.end() || it->second != v) {
          all = false;
          break;
        }
      }
      if (all) return true;
    }
    return false;
  }

  std::optional<std::string> match_target(const Bindings& env) const {
    for (const auto& m : matches) {
      bool all = true;
      for (const auto& [k, v] : m.params)
        if (!env.count(k) || env.at(k) != v) all = false;
      if (all) return m.target;
    }
    return std::nullopt;
  }

  /// Codegree candidates at a point: a full cod set variant if given, else
  /// the witness list.
  const std::vector<FamilyFormula>& candidates(const std::string& variant) const {
    if (!variant.empty()) {
      auto it = cod_sets.find(variant);
      if (it == cod_sets.end()) fail(ErrorKind::Data, name + ": no cod_set variant '" + variant + "'");
      return it->second;
    }
    return witnesses;
  }

  std::vector<std::string> variants() const {
    std::vector<std::string> v;
    for (const auto& [k, _] : cod_sets) v.push_back(k);
    return v;
  }
};

struct FamilyValue {
  std::string label;
  FactoredInt cod;
  std::optional<FactoredInt> degree;
};

struct FamilyEvaluation {
  Bindings params;
  FactoredInt order;
  std::vector<FamilyValue> values;
};

/// Order and every applicable codegree formula at a point. Formulas that
/// carry a degree must satisfy cod * degree = order exactly.
inline FamilyEvaluation eval_family(const GroupFamily& f, const Bindings& given, const std::string& variant = "") {
  if (f.kind != "formula") fail(ErrorKind::Parameter, f.name + " has no formulas");
  Bindings env = f.bind(given);
  if (f.excluded(env)) fail(ErrorKind::Parameter, f.name + " at " + RationalExpr::describe(env) + " is excluded (not simple)");
  FamilyEvaluation ev;
  ev.params = env;
  try {
    ev.order = f.order.eval(env);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::FormulaIntegrality) fail(ErrorKind::Data, f.name + ": order " + e.what());
    throw;
  }
  auto run = [&](const std::vector<FamilyFormula>& list) {
    for (const auto& w : list) {
      if (!w.applies(env)) continue;
      FamilyValue v;
      v.label = w.label;
      try {
        v.cod = w.cod.eval(env);
        if (w.degree) v.degree = w.degree->eval(env);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::FormulaIntegrality) fail(ErrorKind::Data, f.name + ": " + e.what());
        throw;
      }
      if (v.degree && fi_mul(v.cod, *v.degree) != ev.order)
        fail(ErrorKind::Data, f.name + ": cod * degree != order for '" + w.label + "' at " + RationalExpr::describe(env));
      ev.values.push_back(std::move(v));
    }
  };
  if (!variant.empty()) run(f.candidates(variant));
  else if (!f.cod_sets.empty()) run(f.cod_sets.begin()->second);
  run(f.witnesses);
  return ev;
}

/// True iff both formulas are the same rational function of var, compared
/// by cross-multiplying their factored forms.
inline bool same_rational_function(const RationalExpr& a, const RationalExpr& b, const Bindings& env, const std::string& var) {
  FactorForm fa = a.factor_form(env, var), fb = b.factor_form(env, var);
  if (!fa.den_gcd_bounds.empty() || !fb.den_gcd_bounds.empty()) return false;
  auto prod = [](const std::vector<IntPoly>& v) {
    IntPoly r = IntPoly::constant(1);
    for (const auto& p : v) r = r * p;
    return r;
  };
  // q^ma * Na / Da == q^mb * Nb / Db
  std::int64_t shift = fa.monomial - fb.monomial;
  IntPoly lhs = prod(fa.num) * prod(fb.den), rhs = prod(fb.num) * prod(fa.den);
  if (shift > 0) lhs = lhs * IntPoly::monomial(1, static_cast<std::size_t>(shift));
  if (shift < 0) rhs = rhs * IntPoly::monomial(1, static_cast<std::size_t>(-shift));
  return lhs == rhs;
}

inline void parse_family_line(GroupFamily& f, const std::string& key, const std::string& value, const std::string& origin) {
  auto words = split(key, ' ');
  words.erase(std::remove(words.begin(), words.end(), std::string()), words.end());
  const std::string& head = words[0];
  auto expr = [&](const std::string& s) {
    try {
      return RationalExpr::parse(s);
    } catch (const Error& e) {
      fail(ErrorKind::Parse, origin + ": " + e.what());
    }
  };
  auto assignments = [&](const std::string& s) {
    Bindings b;
    for (const auto& part : split(s, ',')) {
      auto eq = part.find('=');
      if (eq == std::string::npos) fail(ErrorKind::Parse, origin + ": expected sym=value in '" + s + "'");
      b[trim(part.substr(0, eq))] = parse_i64(trim(part.substr(eq + 1)));
    }
    return b;
  };
  if (head == "name") f.name = value;
  else if (head == "label") f.label = value;
  else if (head == "kind") f.kind = value;
  else if (head == "citation") f.citation = value;
  else if (head == "provenance") f.provenance = value;
  else if (head == "param" && words.size() == 2) f.params.push_back(parse_param(words[1], value, origin));
  else if (head == "derive" && words.size() == 2) f.derived.emplace_back(words[1], expr(value));
  else if (head == "order") f.order = expr(value);
  else if (head == "q_exponent") f.q_exponent = expr(value);
  else if (head == "witness" && words.size() >= 2) {
    FamilyFormula w = parse_formula(words[1], value, origin);
    if (words.size() == 4 && words[2] == "when") w.when = parse_condition(words[3], origin);
    else if (words.size() != 2) fail(ErrorKind::Parse, origin + ": bad witness key '" + key + "'");
    f.witnesses.push_back(std::move(w));
  } else if (head == "cod_set" && words.size() == 2) {
    std::vector<FamilyFormula> set;
    std::size_t i = 0;
    for (const auto& part : split(value, ';')) set.push_back(parse_formula(words[1] + "#" + std::to_string(i++), part, origin));
    f.cod_sets[words[1]] = std::move(set);
  } else if (head == "exclude") f.exclusions.push_back(assignments(value));
  else if (head == "match") {
    auto colon = value.find(':');
    if (colon == std::string::npos) fail(ErrorKind::Parse, origin + ": match needs ': target'");
    f.matches.push_back({assignments(trim(value.substr(0, colon))), trim(value.substr(colon + 1))});
  } else if (head == "flags") {
    for (auto& t : split(value, ' '))
      if (!t.empty()) f.flags.insert(t);
  } else if (head == "identity") {
    auto eq = value.find("==");
    if (eq == std::string::npos) fail(ErrorKind::Parse, origin + ": identity needs '=='");
    f.identities.emplace_back(expr(trim(value.substr(0, eq))), expr(trim(value.substr(eq + 2))));
  } else if (head == "cod_count_at_least") f.cod_count_at_least = parse_u64(value);
  else fail(ErrorKind::Parse, origin + ": unknown family key '" + key + "'");
}

inline GroupFamily parse_family(const std::string& text, const std::string& origin = "<text>") {
  auto kv = parse_key_values(text, origin);
  GroupFamily f;
  f.source_text = text;
  for (std::size_t i = 0; i < kv.entries.size(); ++i)
    parse_family_line(f, kv.entries[i].first, kv.entries[i].second, origin + ":" + std::to_string(kv.lines[i]));
  if (f.name.empty()) fail(ErrorKind::Data, origin + ": family without name");
  if (f.kind == "literature") {
    if (!f.cod_count_at_least) fail(ErrorKind::Data, origin + ": literature family needs cod_count_at_least");
    return f;
  }
  if (f.kind != "formula") fail(ErrorKind::Data, origin + ": unknown kind " + f.kind);
  if (f.order.empty()) fail(ErrorKind::Data, origin + ": family without order");
  const std::string& var = f.prime_power_param().name;
  // Polynomial identities in the prime-power variable, at the smallest
  // admissible value of any integer parameter.
  for (const auto& [lhs, rhs] : f.identities) {
    Bindings env;
    if (auto ip = f.integer_param()) env[ip->name] = ip->min;
    if (!same_rational_function(lhs, rhs, env, var))
      fail(ErrorKind::Data, origin + ": identity " + lhs.source() + " == " + rhs.source() + " does not hold");
  }
  return f;
}

inline GroupFamily load_family(const std::string& path) { return parse_family(read_file(path), path); }

// ---------------------------------------------------------------- catalog

struct Catalog {
  std::string root;
  std::map<std::string, DegreeData> records;
  std::map<std::string, GroupFamily> families;
  std::map<std::string, PermGroup> groups;
  std::vector<std::string> missing;  // expected but absent files, for reporting

  const DegreeData& record(const std::string& name) const {
    auto it = records.find(name);
    if (it == records.end()) fail(ErrorKind::Data, "no record named " + name);
    return it->second;
  }
  const GroupFamily& family(const std::string& name) const {
    auto it = families.find(name);
    if (it == families.end()) fail(ErrorKind::Data, "no family named " + name);
    return it->second;
  }
  const PermGroup& group(const std::string& name) const {
    auto it = groups.find(name);
    if (it == groups.end()) fail(ErrorKind::Data, "no generator file for " + name);
    return it->second;
  }
  bool has_record(const std::string& n) const { return records.count(n) > 0; }
  bool has_family(const std::string& n) const { return families.count(n) > 0; }
  bool has_group(const std::string& n) const { return groups.count(n) > 0; }
};

namespace catalog_detail {
inline std::vector<std::filesystem::path> files_with_ext(const std::filesystem::path& dir, const std::string& ext) {
  std::vector<std::filesystem::path> out;
  if (!std::filesystem::is_directory(dir)) return out;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ext) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}
}  // namespace catalog_detail

inline std::map<std::string, DegreeData> load_records(const std::string& dir) {
  std::map<std::string, DegreeData> out;
  for (const auto& p : catalog_detail::files_with_ext(dir, ".rec")) {
    DegreeData d = load_record(p.string());
    if (!out.emplace(d.name, d).second) fail(ErrorKind::Data, "duplicate record " + d.name);
  }
  return out;
}

inline Catalog load_catalog(const std::string& root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) fail(ErrorKind::Data, "data directory " + root + " not found");
  Catalog c;
  c.root = root;
  c.records = load_records((fs::path(root) / "records").string());
  for (const auto& p : catalog_detail::files_with_ext(fs::path(root) / "families", ".fam")) {
    GroupFamily f = load_family(p.string());
    if (!c.families.emplace(f.name, f).second) fail(ErrorKind::Data, "duplicate family " + f.name);
  }
  for (const auto& p : catalog_detail::files_with_ext(fs::path(root) / "groups", ".gens")) {
    PermGroup g = load_generator_file(p.string());
    if (!c.groups.emplace(g.name, g).second) fail(ErrorKind::Data, "duplicate generator file " + g.name);
  }
  return c;
}

/// Data directory: explicit flag, then CODEG_DATA, then ./data.
inline std::string resolve_data_dir(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv("CODEG_DATA"); env && *env) return env;
  return "data";
}

}  // namespace codeg
