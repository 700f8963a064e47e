#pragma once
// Codegree sets cod(G) = { |G:ker chi| / chi(1) } from oracle tables or from
// degree data, containment with witnesses, and the quotient / normal
// subgroup property harness.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "codeg/cyclotomic.hpp"
#include "codeg/dixon.hpp"
#include "codeg/error.hpp"
#include "codeg/exact_arith.hpp"
#include "codeg/perm_group.hpp"

namespace codeg {

struct CodegreeSet {
  std::set<FactoredInt> elements;
  std::string source;  // oracle | data | formula

  bool contains(const FactoredInt& x) const { return elements.count(x) > 0; }
  std::size_t size() const noexcept { return elements.size(); }
  FactoredInt max() const {
    if (elements.empty()) fail(ErrorKind::Domain, "empty codegree set");
    return *elements.rbegin();
  }
  std::vector<FactoredInt> descending() const { return {elements.rbegin(), elements.rend()}; }
  std::vector<std::uint64_t> values() const {
    std::vector<std::uint64_t> v;
    for (const auto& e : elements) v.push_back(e.value());
    return v;
  }
  friend bool operator==(const CodegreeSet& a, const CodegreeSet& b) { return a.elements == b.elements; }
};

inline CodegreeSet make_cod_set(std::vector<FactoredInt> xs, std::string source) {
  CodegreeSet s;
  s.source = std::move(source);
  for (auto& x : xs) s.elements.insert(std::move(x));
  if (!s.contains(FactoredInt{})) fail(ErrorKind::Data, "codegree set without 1");
  return s;
}

/// Degree multiset of a fixed group plus record facts.
struct DegreeData {
  std::string name;
  std::string label;
  FactoredInt order;
  std::vector<std::uint64_t> degrees;  // sorted multiset
  /// Per degree, the order of its kernel when known (parallel to degrees).
  std::vector<std::optional<std::uint64_t>> kernel_orders;
  std::string provenance;
  bool partial = false;
  bool simple = false;
  std::optional<std::uint64_t> class_count;
  std::optional<std::uint64_t> cd_count;
  std::optional<std::uint64_t> schur_multiplier;
  std::vector<std::string> tags;

  bool has_tag(std::string_view t) const { return std::find(tags.begin(), tags.end(), t) != tags.end(); }
  std::set<std::uint64_t> cd() const { return {degrees.begin(), degrees.end()}; }
  /// Recorded distinct-degree count, falling back to the data.
  std::uint64_t distinct_degree_count() const { return cd_count.value_or(cd().size()); }
};

/// Load-time invariants; throws a data error naming the record.
inline void validate_degree_data(const DegreeData& d) {
  const std::string who = "record " + d.name + ": ";
  if (d.degrees.empty() || d.degrees.front() != 1) fail(ErrorKind::Data, who + "degrees must contain 1");
  if (!std::is_sorted(d.degrees.begin(), d.degrees.end())) fail(ErrorKind::Data, who + "degrees not sorted");
  if (d.kernel_orders.size() != d.degrees.size()) fail(ErrorKind::Data, who + "kernel annotation length mismatch");
  if (!d.partial) {
    auto n = d.order.try_value128();
    if (!n) fail(ErrorKind::Data, who + "order exceeds 128 bits; record must be partial");
    u128 sq = 0;
    for (auto x : d.degrees) {
      u128 t = static_cast<u128>(x) * x;
      if (__builtin_add_overflow(sq, t, &sq)) fail(ErrorKind::Data, who + "sum of squares overflows");
    }
    if (sq != *n)
      fail(ErrorKind::Data, who + "sum of squared degrees " + to_string(sq) + " != |G| = " + to_string(*n));
    if (d.class_count && *d.class_count != d.degrees.size())
      fail(ErrorKind::Data, who + "class count " + std::to_string(*d.class_count) + " != number of degrees " +
                                std::to_string(d.degrees.size()));
    if (d.cd_count && *d.cd_count != d.cd().size()) fail(ErrorKind::Data, who + "cd_count disagrees with degrees");
  }
  if (d.simple) {
    for (auto x : d.degrees)
      if (!fi_divides(d.order, factorize(static_cast<std::int64_t>(x))))
        fail(ErrorKind::Data, who + "degree " + std::to_string(x) + " does not divide |G|");
    if (std::count(d.degrees.begin(), d.degrees.end(), 1ULL) != 1 && d.degrees.size() > 1)
      fail(ErrorKind::Data, who + "simple group with more than one linear character");
  }
}

/// cod from an oracle table: |G : ker chi| / chi(1) for each row.
inline CodegreeSet cod_from_table(const CharTable& t) {
  std::vector<FactoredInt> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    FactoredInt idx = fi_div_exact(t.order, kernel_order(t, i));
    FactoredInt d = factorize(static_cast<std::int64_t>(t.rows[i].degree));
    if (!fi_divides(idx, d))
      fail(ErrorKind::TableCorruption, t.label + ": degree " + d.decimal() + " does not divide |G:ker| " + idx.decimal());
    out.push_back(fi_div_exact(idx, d));
  }
  return make_cod_set(std::move(out), "oracle");
}

/// cod of a simple group: {1} and |G|/d for d > 1.
inline CodegreeSet cod_simple(const DegreeData& d) {
  if (d.partial) fail(ErrorKind::Data, d.name + ": cod_simple needs complete degree data");
  if (!d.simple) fail(ErrorKind::Data, d.name + ": cod_simple needs a simple group");
  std::vector<FactoredInt> out{FactoredInt{}};
  for (auto x : d.degrees) {
    if (x == 1) continue;
    FactoredInt f = factorize(static_cast<std::int64_t>(x));
    if (!fi_divides(d.order, f)) fail(ErrorKind::Data, d.name + ": degree " + std::to_string(x) + " does not divide |G|");
    out.push_back(fi_div_exact(d.order, f));
  }
  return make_cod_set(std::move(out), "data");
}

/// cod from a record with kernel annotations (or a simple record).
inline CodegreeSet cod_from_record(const DegreeData& d) {
  if (d.simple) return cod_simple(d);
  if (d.partial) fail(ErrorKind::Data, d.name + ": partial record");
  std::vector<FactoredInt> out;
  for (std::size_t i = 0; i < d.degrees.size(); ++i) {
    if (!d.kernel_orders[i]) fail(ErrorKind::Data, d.name + ": kernel orders are required for a non-simple record");
    FactoredInt idx = fi_div_exact(d.order, factorize(static_cast<std::int64_t>(*d.kernel_orders[i])));
    FactoredInt f = factorize(static_cast<std::int64_t>(d.degrees[i]));
    if (!fi_divides(idx, f)) fail(ErrorKind::Data, d.name + ": degree does not divide |G:ker|");
    out.push_back(fi_div_exact(idx, f));
  }
  return make_cod_set(std::move(out), "data");
}

struct SubsetResult {
  bool contained = true;
  std::optional<FactoredInt> witness;  // smallest element of a \ b
};

inline SubsetResult subset_check(const CodegreeSet& a, const CodegreeSet& b) {
  for (const auto& x : a.elements)
    if (!b.contains(x)) return {false, x};
  return {};
}

/// Generic set containment for degree sets.
inline std::optional<std::uint64_t> first_missing(const std::set<std::uint64_t>& a, const std::set<std::uint64_t>& b) {
  for (auto x : a)
    if (!b.count(x)) return x;
  return std::nullopt;
}

struct CodegreeInclusionReport {
  bool pass = true;
  std::size_t normal_subgroups = 0;
  std::size_t quotient_checks = 0;
  std::size_t constituent_checks = 0;
  std::string failure;  // (group, N, character) on violation
};

/// Quotient containment cod(G/N) in cod(G) for every normal N, and
/// cod(phi) | cod(chi) for every constituent phi of chi restricted to every
/// normal M.
inline CodegreeInclusionReport codegree_inclusion_suite(const PermGroup& g, const DixonOptions& opt = {}) {
  ClassStructure cs(g);
  if (cs.group().size() > 10'000) fail(ErrorKind::Domain, "codegree_inclusion_suite requires |G| <= 10^4");
  if (cs.class_count() > 20) fail(ErrorKind::ClassCountCap, "codegree_inclusion_suite requires at most 20 classes");
  CodegreeInclusionReport rep;
  CharTable tg = dixon_table(cs, opt);
  CodegreeSet codg = cod_from_table(tg);
  auto normals = normal_subgroups_small(cs);
  rep.normal_subgroups = normals.size();
  auto label = [](const std::vector<std::size_t>& cls) {
    std::string s = "{";
    for (std::size_t i = 0; i < cls.size(); ++i) s += (i ? "," : "") + std::to_string(cls[i]);
    return s + "}";
  };
  const auto E = static_cast<std::uint32_t>(cs.classes().exponent);
  for (const auto& n : normals) {
    // (i)
    PermGroup q = quotient_group(cs, n);
    CharTable tq = dixon_table(q, opt);
    auto sub = subset_check(cod_from_table(tq), codg);
    ++rep.quotient_checks;
    if (!sub.contained) {
      rep.pass = false;
      rep.failure = g.name + ", N=" + label(n) + ": cod(G/N) element " + sub.witness->decimal() + " not in cod(G)";
      return rep;
    }
    // (ii)
    PermGroup m = normal_subgroup_group(cs, n, g.name + "_M");
    ClassStructure cm(m);
    CharTable tm = dixon_table(cm, opt);
    const auto& mcd = cm.classes();
    std::vector<std::size_t> g_class(mcd.count());
    for (std::size_t c = 0; c < mcd.count(); ++c)
      g_class[c] = cs.classes().class_of[cs.group().id_of(cm.group().element(mcd.reps[c]))];
    const std::int64_t morder = static_cast<std::int64_t>(cm.group().size());
    for (std::size_t i = 0; i < tg.rows.size(); ++i) {
      FactoredInt cod_chi = fi_div_exact(fi_div_exact(tg.order, kernel_order(tg, i)),
                                         factorize(static_cast<std::int64_t>(tg.rows[i].degree)));
      for (std::size_t j = 0; j < tm.rows.size(); ++j) {
        CycloAccumulator acc(E);
        for (std::size_t c = 0; c < mcd.count(); ++c)
          acc.add_product(tg.rows[i].values[g_class[c]], tm.rows[j].values[c], static_cast<std::int64_t>(mcd.sizes[c]), true);
        auto ip = acc.as_integer();
        if (!ip || *ip % morder != 0) {
          rep.pass = false;
          rep.failure = g.name + ", M=" + label(n) + ", chi=" + std::to_string(i) + ": restriction inner product not integral";
          return rep;
        }
        if (*ip == 0) continue;
        FactoredInt cod_phi = fi_div_exact(fi_div_exact(tm.order, kernel_order(tm, j)),
                                           factorize(static_cast<std::int64_t>(tm.rows[j].degree)));
        ++rep.constituent_checks;
        if (!fi_divides(cod_chi, cod_phi)) {
          rep.pass = false;
          rep.failure = g.name + ", M=" + label(n) + ", chi=" + std::to_string(i) + ": cod(phi)=" + cod_phi.decimal() +
                        " does not divide cod(chi)=" + cod_chi.decimal();
          return rep;
        }
      }
    }
  }
  return rep;
}

}  // namespace codeg
