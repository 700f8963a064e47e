#pragma once
// Offline recheck of a verification report. Uses only what the report
// embeds: target degree lists, family source text, record degree data and
// the serialized certificates. Nothing is read from the data directory.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "codeg/catalog.hpp"
#include "codeg/json_io.hpp"
#include "codeg/partitions.hpp"
#include "codeg/proof.hpp"
#include "codeg/reduction.hpp"

namespace codeg {

struct RecheckResult {
  bool consistent = true;  // every stated fact re-derived
  bool closed = false;     // report verdict, as rechecked
  std::size_t cases = 0;
  std::size_t points = 0;
  std::size_t certificates = 0;
  std::vector<std::string> problems;
};

namespace recheck_detail {

using namespace jsonio;

struct Checker {
  RecheckResult& r;
  std::string ctx;
  bool ok = true;
  bool need(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      r.consistent = false;
      r.problems.push_back(ctx + ": " + what);
    }
    return cond;
  }
};

inline DegreeData read_record(const Json& o) {
  DegreeData d;
  d.name = str(o, "name");
  d.label = str(o, "label");
  d.order = fi_at(o, "order");
  d.simple = boolean(o, "simple");
  d.partial = boolean(o, "partial");
  for (const auto& x : arr(o, "degrees")) {
    if (!x.is_number_unsigned()) bad("degrees must be positive integers");
    d.degrees.push_back(x.get<std::uint64_t>());
  }
  if (o.contains("kernel_orders")) {
    for (const auto& x : arr(o, "kernel_orders")) {
      if (x.is_null()) d.kernel_orders.emplace_back();
      else if (x.is_number_unsigned()) d.kernel_orders.emplace_back(x.get<std::uint64_t>());
      else bad("kernel orders must be integers or null");
    }
  } else {
    d.kernel_orders.assign(d.degrees.size(), std::nullopt);
  }
  validate_degree_data(d);
  return d;
}

inline std::vector<FactoredInt> descending(const CodegreeSet& s) { return s.descending(); }

inline bool stated_closed(const Json& c) { return str(c, "verdict") == "closed"; }

// ---------------------------------------------------------------- grid

inline void recheck_grid(const Json& c, const TargetInfo& t, Checker& ck, RecheckResult& r) {
  GroupFamily f = parse_family(str(at(c, "family"), "source"), "<certificate>");
  const std::string variant = str(c, "variant");
  ck.need(str(c, "bound") == to_string(t.bound), "bound is not max(cod)^2");
  ck.need(str(c, "target_max") == t.max.decimal(), "target max differs");
  const Json& red = at(c, "reduction");
  const ParamSpec& ps = f.prime_power_param();
  std::vector<Bindings> fixed_list;
  const ParamSpec* np = f.integer_param();
  if (np) {
    const Json& nb = at(red, "n_bound");
    if (!ck.need(nb.is_object() && f.q_exponent.has_value(), "two-parameter family without an n bound")) return;
    std::int64_t K = i64(nb, "bits"), stop = i64(nb, "stop");
    ck.need(K > 0 && K < 127 && (u128{1} << K) > t.bound && (u128{1} << (K - 1)) <= t.bound, "bit count does not match the bound");
    auto [enum_poly, eden] = f.q_exponent->to_poly({}, np->name);
    ck.need(eden == i64(nb, "exponent_denominator"), "exponent denominator differs");
    IntPoly want = enum_poly - IntPoly::constant(checked_mul(K, eden)) + IntPoly::constant(1);
    const Json& cj = at(nb, "certificate");
    PositivityCertificate cert = read_cert(cj);
    ++r.certificates;
    std::string why;
    ck.need(cert.poly == want, "n-bound polynomial differs");
    ck.need(cert.from == stop, "n-bound certificate starts elsewhere");
    ck.need(cert.kind == CertKind::Positive, "n-bound certificate must be a positivity certificate");
    ck.need(recheck_cert_json(cj, &why), "n-bound: " + why);
    ck.need(stop >= np->min, "n stop below the parameter minimum");
    for (std::int64_t n = np->min; n <= stop + 5; ++n) {
      auto form = f.order.factor_form({{np->name, n}}, ps.name);
      i128 e = enum_poly.eval(n);
      ck.need(e % eden == 0 && form.monomial == static_cast<std::int64_t>(e / eden),
              "q exponent disagrees with the order at " + np->name + "=" + std::to_string(n));
    }
    for (std::int64_t n = np->min; n < stop; ++n) fixed_list.push_back({{np->name, n}});
  } else {
    ck.need(at(red, "n_bound").is_null(), "unexpected n bound");
    fixed_list.push_back({});
  }
  const Json& scans = arr(red, "scans");
  if (!ck.need(scans.size() == fixed_list.size(), "scan count differs from the n range")) return;
  std::vector<Bindings> expected;
  for (std::size_t i = 0; i < scans.size(); ++i) {
    const Json& s = scans[i];
    Bindings fixed = read_bindings(at(s, "fixed"));
    ck.need(fixed == fixed_list[i], "scan " + std::to_string(i) + " holds the wrong parameters");
    ck.need(str(s, "var") == ps.name, "scan variable differs");
    FactorForm form = f.order.factor_form(fixed, ps.name);
    ck.need(form.monomial == i64(s, "monomial"), "monomial differs");
    auto polys = [&](const char* key) {
      std::vector<IntPoly> v;
      for (const auto& p : arr(s, key)) v.push_back(read_poly(p));
      return v;
    };
    ck.need(polys("numerator_factors") == form.num, "numerator factors differ");
    ck.need(polys("denominator_factors") == form.den, "denominator factors differ");
    ck.need(at(s, "gcd_bounds").get<std::vector<std::int64_t>>() == form.den_gcd_bounds, "gcd bounds differ");
    std::int64_t stop = i64(s, "stop");
    ck.need(ps.admits(stop), "stop value not admissible");
    auto lb = lower_bound_at(form, stop);
    if (ck.need(lb.has_value(), "lower bound undefined at the stop value")) {
      ck.need(to_string(lb->num) == str(s, "lower_bound_numerator") && to_string(lb->den) == str(s, "lower_bound_denominator"),
              "lower bound at stop differs");
      ck.need(exceeds(*lb, t.bound), "lower bound at stop does not exceed the bound");
    }
    const Json& mono = arr(s, "monotonicity");
    std::size_t k = 0;
    for (const auto& p : form.num) {
      if (p.degree() <= 0) continue;
      if (!ck.need(k < mono.size(), "missing monotonicity certificate")) break;
      PositivityCertificate mc = read_cert(mono[k]);
      ++r.certificates;
      std::string why;
      ck.need(mc.poly == p.forward_difference(), "monotonicity polynomial is not the forward difference");
      ck.need(mc.from == stop, "monotonicity certificate starts elsewhere");
      ck.need(mc.kind == CertKind::Positive, "monotonicity certificate must be a positivity certificate");
      ck.need(recheck_cert_json(mono[k], &why), "monotonicity: " + why);
      ++k;
    }
    ck.need(k == mono.size(), "extra monotonicity certificates");
    for (std::int64_t q = std::max<std::int64_t>(ps.min, 2); q < stop; ++q) {
      if (!ps.admits(q)) continue;
      Bindings b = fixed;
      b[ps.name] = q;
      expected.push_back(b);
    }
  }
  // every admissible point below the stops is accounted for
  std::vector<Bindings> grid, excl;
  for (const auto& p : arr(c, "grid")) grid.push_back(read_bindings(p));
  for (const auto& p : arr(c, "excluded")) excl.push_back(read_bindings(p));
  std::map<Bindings, std::string> pruned;
  for (const auto& p : arr(c, "pruned")) pruned[read_bindings(at(p, "params"))] = str(p, "order");
  std::set<Bindings> stated(grid.begin(), grid.end());
  stated.insert(excl.begin(), excl.end());
  for (const auto& [b, _] : pruned) stated.insert(b);
  ck.need(stated == std::set<Bindings>(expected.begin(), expected.end()) &&
              grid.size() + excl.size() + pruned.size() == expected.size(),
          "stated points do not cover the admissible range exactly");
  ck.need(std::is_sorted(grid.begin(), grid.end()), "grid not in lexicographic order");
  for (const auto& b : excl) ck.need(f.excluded(f.bind(b)), "point " + RationalExpr::describe(b) + " is not excluded");
  for (const auto& [b, ord] : pruned) {
    FactoredInt o = f.order.eval(f.bind(b));
    auto v = o.try_value128();
    ck.need(o.decimal() == ord && (!v || *v > t.bound), "pruned point " + RationalExpr::describe(b) + " is within the bound");
  }
  const Json& points = arr(c, "points");
  bool all = ck.need(points.size() == grid.size(), "point list differs from the grid");
  ck.need(boolean(c, "vacuous") == grid.empty(), "vacuous flag wrong");
  for (std::size_t i = 0; i < points.size() && i < grid.size(); ++i) {
    const Json& p = points[i];
    ++r.points;
    Bindings b = read_bindings(at(p, "params"));
    ck.need(b == grid[i], "point order differs from the grid");
    FamilyEvaluation ev = eval_family(f, b, variant);
    auto v = ev.order.try_value128();
    ck.need(v && *v <= t.bound, "grid point " + RationalExpr::describe(b) + " exceeds the bound");
    ck.need(str(p, "order") == ev.order.decimal(), "order differs at " + RationalExpr::describe(b));
    std::string outcome = str(p, "outcome");
    if (outcome == "witness") {
      FactoredInt w = fi_at(p, "witness");
      bool found = false;
      for (const auto& x : ev.values)
        if (x.label == str(p, "formula") && x.cod == w) found = true;
      ck.need(found, "witness " + w.decimal() + " is not the stated formula's value at " + RationalExpr::describe(b));
      ck.need(!t.cod.contains(w), "witness " + w.decimal() + " lies in cod(target)");
    } else if (outcome == "match") {
      bool inside = true;
      for (const auto& x : ev.values) inside = inside && t.cod.contains(x.cod);
      ck.need(inside, "match point has a codegree outside the target");
      ck.need(f.match_target(ev.params) == t.name, "point is not a designated match for " + t.name);
      ck.need(ev.order == t.record.order, "match point order differs from |target|");
    } else {
      all = false;
    }
  }
  ck.need(stated_closed(c) == (all && ck.ok), "verdict differs from the recheck");
}

// ---------------------------------------------------------------- fixed data

inline void recheck_fixed(const Json& c, const TargetInfo& t, Checker& ck) {
  DegreeData d = read_record(at(c, "record"));
  CodegreeSet cod = cod_simple(d);
  ck.need(fi_list_at(c, "cod") == cod.descending(), "codegree list differs");
  bool closed = true;
  if (c.contains("cited_cd")) {
    auto cited = at(c, "cited_cd").get<std::vector<std::uint64_t>>();
    bool m = std::set<std::uint64_t>(cited.begin(), cited.end()) == d.cd();
    ck.need(m == boolean(c, "cited_cd_matches"), "cited degree comparison differs");
    closed = closed && m;
  }
  if (c.contains("cited_cod")) {
    std::set<FactoredInt> cs;
    for (const auto& s : at(c, "cited_cod").get<std::vector<std::string>>()) cs.insert(parse_factored(s));
    bool m = cs == cod.elements;
    ck.need(m == boolean(c, "cited_cod_matches"), "cited codegree comparison differs");
    closed = closed && m;
  }
  if (c.contains("cd_count")) closed = closed && at(c, "cd_count").get<std::size_t>() == d.cd().size();
  if (c.contains("witness")) {
    FactoredInt w = fi_at(c, "witness");
    ck.need(cod.contains(w), "witness not a codegree of " + d.name);
    ck.need(!t.cod.contains(w), "witness lies in cod(target)");
    ck.need(fi_at(c, "witness_degree") == fi_div_exact(d.order, w), "witness degree differs");
    auto sub = subset_check(cod, t.cod);
    ck.need(!sub.contained && fi_at(c, "smallest_witness") == *sub.witness, "smallest witness differs");
  } else {
    closed = false;
  }
  ck.need(stated_closed(c) == (closed && ck.ok), "verdict differs from the recheck");
}

// ---------------------------------------------------------------- counts

inline void recheck_shape_distinctness(const Json& l, Checker& ck, RecheckResult& r) {
  const Json& fj = arr(l, "formulas");
  std::vector<std::pair<IntPoly, std::int64_t>> fs;
  std::vector<std::pair<std::vector<std::uint32_t>, std::string>> shapes;
  for (const auto& f : fj) {
    auto e = RationalExpr::parse(str(f, "formula"));
    fs.push_back(e.to_poly({}, "n"));
    shapes.emplace_back(at(f, "tail").get<std::vector<std::uint32_t>>(), str(f, "formula"));
  }
  std::int64_t from = i64(l, "from");
  ck.need(fs.size() == 13, "expected 13 formulas");
  ck.need(from <= 14, "distinctness must start at n=14 or earlier");
  const Json& above = arr(l, "above_one");
  ck.need(above.size() == fs.size(), "above-one certificate count differs");
  for (std::size_t i = 0; i < above.size() && i < fs.size(); ++i) {
    PositivityCertificate c = read_cert(above[i]);
    ++r.certificates;
    std::string why;
    ck.need(c.poly == fs[i].first - IntPoly::constant(fs[i].second) && c.from == from && c.kind == CertKind::Positive,
            "above-one certificate does not match formula " + std::to_string(i));
    ck.need(recheck_cert_json(above[i], &why), why);
  }
  const Json& pairs = arr(l, "pairs");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& p : pairs) {
    std::size_t i = at(p, "i").get<std::size_t>(), j = at(p, "j").get<std::size_t>();
    if (!ck.need(i < j && j < fs.size(), "bad pair index")) continue;
    seen.insert({i, j});
    IntPoly diff = fs[i].first.scaled(fs[j].second) - fs[j].first.scaled(fs[i].second);
    if (diff.leading() < 0) diff = -diff;
    const Json& cj = at(p, "certificate");
    PositivityCertificate c = read_cert(cj);
    ++r.certificates;
    std::string why;
    ck.need(c.poly == diff && c.from == from, "pair certificate does not match formulas " + std::to_string(i) + "," + std::to_string(j));
    ck.need(recheck_cert_json(cj, &why), why);
  }
  ck.need(seen.size() == fs.size() * (fs.size() - 1) / 2, "not every pair is certified");
  // agreement with the hook formula, so the polynomials are degrees of A_n
  for (std::size_t i = 0; i < shapes.size() && i < fs.size(); ++i) {
    const auto& tail = shapes[i].first;
    for (std::uint32_t n = 14; n <= 60; ++n) {
      std::uint32_t rest = 0;
      for (auto x : tail) rest += x;
      Partition p{n - rest};
      p.insert(p.end(), tail.begin(), tail.end());
      i128 v = fs[i].first.eval(n);
      bool ok = v % fs[i].second == 0 && static_cast<std::uint64_t>(v / fs[i].second) == hook_degree(p);
      if (!ck.need(ok, "formula " + shapes[i].second + " disagrees with the hook formula at n=" + std::to_string(n))) break;
      if (n == 14) ck.need(conjugate(p) != p, "self-conjugate shape at n=14");
    }
  }
}

inline void recheck_small_family_count(const Json& c, Checker& ck, RecheckResult& r) {
  const auto& listed = small_family_listed();
  std::set<std::string> names;
  std::size_t sporadic = 0;
  bool ok = true;
  for (const auto& row : arr(c, "counts")) {
    std::string n = str(row, "name");
    names.insert(n);
    std::uint64_t k = at(row, "cd_count").get<std::uint64_t>();
    bool is_listed = std::find(listed.begin(), listed.end(), n) != listed.end();
    ck.need(boolean(row, "listed") == is_listed, n + ": listed flag wrong");
    ck.need(boolean(row, "in_range") == (k >= 4 && k <= 12), n + ": range flag wrong");
    if (row.contains("cod_count")) ok = ok && at(row, "cod_count").get<std::uint64_t>() == k;
    ok = ok && (is_listed ? (k >= 4 && k <= 12) : k >= 13);
    if (!(n.size() >= 2 && n[0] == 'A' && std::isdigit(static_cast<unsigned char>(n[1])))) ++sporadic;
  }
  for (int n = 5; n <= 13; ++n) ok = ok && names.count("A" + std::to_string(n));
  for (const auto& n : listed) ok = ok && names.count(n);
  ck.need(sporadic == 26 && at(c, "sporadic_records").get<std::size_t>() == 26, "sporadic coverage is not 26 groups");
  recheck_shape_distinctness(at(c, "shape_distinctness"), ck, r);
  ck.need(stated_closed(c) == (ok && ck.ok), "verdict differs from the recheck");
}

// ---------------------------------------------------------------- extensions

inline void recheck_extension(const Json& c, const TargetInfo& t, Checker& ck) {
  std::string id = str(c, "id");
  std::string part = id.substr(id.rfind('.') + 1);
  const FactoredInt& order = t.record.order;
  bool ok = true;
  if (part == "nonabelian-N") {
    bool none = true;
    for (const auto& x : t.cod.elements) none = none && !fi_divides(x, order);
    ck.need(boolean(c, "no_codegree_divisible_by_order") == none, "divisibility flag differs");
    ck.need(boolean(c, "order_exceeds_max_cod") == (t.max < order), "max comparison differs");
    ok = none && t.max < order;
  } else if (part == "central") {
    std::uint64_t mult = at(c, "schur_multiplier").get<std::uint64_t>();
    if (t.name == "U3_3") {
      ok = mult == 1;
    } else {
      ok = mult == 2;
      DegreeData e = read_record(at(c, "extension"));
      ok = ok && e.order == fi_mul(order, factorize(2));
      CodegreeSet ce = cod_from_record(e);
      ck.need(fi_list_at(c, "extension_cod") == ce.descending(), "extension codegrees differ");
      std::vector<FactoredInt> outside;
      for (const auto& x : ce.elements)
        if (!t.cod.contains(x)) outside.push_back(x);
      ck.need(fi_list_at(c, "outside_target") == outside, "outside list differs");
      ok = ok && !outside.empty();
      FactoredInt w = fi_at(at(c, "witness"), "codegree");
      bool has4 = false;
      for (std::size_t i = 0; i < e.degrees.size(); ++i)
        if (e.degrees[i] == 4 && e.kernel_orders[i] == 1ULL) has4 = true;
      ok = ok && has4 && w == fi_div_exact(e.order, factorize(4)) && ce.contains(w) && !t.cod.contains(w);
      std::set<std::uint64_t> faithful{1};
      for (std::size_t i = 0; i < e.degrees.size(); ++i)
        if (e.kernel_orders[i] == 1ULL) faithful.insert(e.degrees[i]);
      ok = ok && faithful == std::set<std::uint64_t>{1, 4, 20, 36, 60, 64, 80};
    }
  } else if (part == "primes") {
    auto ps = order.primes();
    ck.need(at(c, "primes").get<std::vector<std::uint64_t>>() == ps, "prime list differs");
    ok = ps == (t.name == "U3_3" ? std::vector<std::uint64_t>{2, 3, 7} : std::vector<std::uint64_t>{2, 3, 5});
  } else if (part == "aut-checks") {
    ck.need(fi_at(c, "GL(5,2)") == gl_order(5, 2) && fi_at(c, "GL(3,3)") == gl_order(3, 3), "GL orders differ");
    for (const auto& d : arr(c, "divisibility")) {
      FactoredInt m = fi_at(d, "value");
      ck.need(at(d, "remainder").get<std::uint64_t>() == remainder(m, order), "remainder differs");
      ok = ok && !fi_divides(m, order);
    }
    if (t.name == "U4_2") {
      const Json& cdn = arr(c, "cd_noncontainment");
      ok = ok && cdn.size() == 2;
      for (const auto& g : cdn) {
        DegreeData d = read_record(at(g, "record"));
        FactoredInt go = fi_at(g, "order_formula");
        ck.need(go == (d.name == "GL6_2" ? gl_order(6, 2) : gl_order(4, 3)), "GL order formula differs");
        ok = ok && go == d.order;
        const Json& w = at(g, "witness_degree");
        ok = ok && w.is_number_unsigned() && t.record.cd().count(w.get<std::uint64_t>()) && !d.cd().count(w.get<std::uint64_t>());
      }
    }
  } else {
    ok = false;
  }
  ck.need(stated_closed(c) == (ok && ck.ok), "verdict differs from the recheck");
}

}  // namespace recheck_detail

/// Throws a parse error for malformed input or an unknown format version.
inline RecheckResult recheck_report(const Json& rep) {
  using namespace recheck_detail;
  RecheckResult r;
  if (!rep.is_object() || !rep.contains("format_version") || !rep["format_version"].is_number_integer())
    bad("missing format_version");
  if (rep["format_version"].get<int>() != kFormatVersion)
    bad("unsupported format version " + std::to_string(rep["format_version"].get<int>()));
  std::map<std::string, TargetInfo> targets;
  for (const auto& [name, tj] : at(rep, "targets").items()) {
    Checker ck{r, "target " + name};
    TargetInfo t = make_target(read_record(tj));
    ck.need(t.name == name, "target name differs");
    ck.need(fi_list_at(tj, "cod") == t.cod.descending(), "target codegrees differ");
    ck.need(str(tj, "bound") == to_string(t.bound), "target bound differs");
    targets.emplace(name, std::move(t));
  }
  bool oracle_ok = true;
  for (const auto& o : arr(rep, "oracle_equivalence")) {
    Checker ck{r, "oracle " + str(o, "group")};
    bool ok = str(o, "status") == "match";
    if (ok) {
      auto cod = fi_list_at(o, "cod");
      FactoredInt n = fi_at(o, "order");
      ck.need(!cod.empty() && fi_mul(cod.front(), cod.front()).value128() >= n.value128(), "sqrt bound fails");
      ck.need(boolean(o, "degrees_match") && boolean(o, "cod_match") && boolean(o, "table_verified"), "status inconsistent");
      auto it = targets.find(str(o, "group"));
      if (it != targets.end()) ck.need(cod == it->second.cod.descending(), "oracle codegrees differ from the target record");
    }
    oracle_ok = oracle_ok && ok;
  }
  if (arr(rep, "oracle_equivalence").size() != k3_groups().size()) {
    r.consistent = false;
    r.problems.push_back("oracle section does not cover the eight groups");
  }
  bool all_closed = true;
  std::set<std::string> ids;
  for (const auto& c : arr(rep, "cases")) {
    ++r.cases;
    std::string id = str(c, "id");
    Checker ck{r, id};
    ck.need(ids.insert(id).second, "duplicate case id");
    bool closed = stated_closed(c);
    all_closed = all_closed && closed;
    if (!closed) continue;  // open cases carry no claim to recheck
    auto it = targets.find(str(c, "target"));
    if (!ck.need(it != targets.end(), "unknown target")) continue;
    const TargetInfo& t = it->second;
    std::string m = str(c, "method");
    try {
      if (m == "grid") recheck_grid(c, t, ck, r);
      else if (m == "fixed-data") recheck_fixed(c, t, ck);
      else if (m == "literature") {
        ck.need(at(c, "cod_count_at_least").get<std::uint64_t>() > t.cod.size(), "recorded count does not exceed |cod(target)|");
        ck.need(!arr(c, "trusted_inputs").empty(), "literature fact not marked as trusted input");
      } else if (id == "U42.b1") recheck_small_family_count(c, ck, r);
      else if (m == "count") {
        ck.need(t.cod.size() == t.record.cd().size(), "|cod| != |cd| for the target");
        ck.need(at(c, "target_cod_size").get<std::size_t>() == t.cod.size(), "stated size differs");
      } else if (id.ends_with(".abelian")) {
        bool none = true;
        for (const auto& x : t.cod.elements) none = none && x.factors().size() != 1;
        ck.need(none, "target contains a prime power");
      } else if (id.starts_with("ext.")) recheck_extension(c, t, ck);
      else ck.need(false, "unknown method " + m);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Parse) throw;
      ck.need(false, e.what());
    } catch (const nlohmann::json::exception& e) {
      bad(e.what());
    }
  }
  r.closed = r.consistent && all_closed && oracle_ok && arr(rep, "problems").empty();
  if ((str(rep, "verdict") == "closed") != r.closed && r.consistent) {
    r.consistent = false;
    r.problems.push_back("report verdict differs from the recheck");
  }
  return r;
}

}  // namespace codeg
