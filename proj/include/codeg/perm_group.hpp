#pragma once
// Concrete permutation groups by full element enumeration: conjugacy
// classes, power maps, class multiplication coefficients, quotients and
// normal subgroups of small groups.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "codeg/error.hpp"
#include "codeg/exact_arith.hpp"
#include "codeg/text_format.hpp"

namespace codeg {

using Point = std::uint16_t;

/// A bijection on {0..degree-1}; product x*y applies x first.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<Point> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (Point p : images_) {
      if (p >= images_.size() || seen[p]) fail(ErrorKind::Domain, "images do not form a bijection");
      seen[p] = true;
    }
  }

  static Permutation identity(std::size_t degree) {
    std::vector<Point> v(degree);
    std::iota(v.begin(), v.end(), Point{0});
    return Permutation(std::move(v));
  }

  /// Parses 0-based cycle notation "(0 1 2)(3 4)"; commas are accepted.
  static Permutation from_cycles(std::string_view text, std::size_t degree) {
    std::vector<Point> img(degree);
    std::iota(img.begin(), img.end(), Point{0});
    std::size_t i = 0;
    auto skip = [&] {
      while (i < text.size() && (text[i] == ' ' || text[i] == ',' || text[i] == '\t')) ++i;
    };
    while (true) {
      skip();
      if (i >= text.size()) break;
      if (text[i] != '(') fail(ErrorKind::Parse, "cycle notation: expected '(' in '" + std::string(text) + "'");
      ++i;
      std::vector<std::uint64_t> cyc;
      while (true) {
        skip();
        if (i >= text.size()) fail(ErrorKind::Parse, "cycle notation: unterminated cycle");
        if (text[i] == ')') {
          ++i;
          break;
        }
        std::size_t start = i;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
        if (start == i) fail(ErrorKind::Parse, "cycle notation: expected a point");
        cyc.push_back(parse_u64(text.substr(start, i - start)));
      }
      for (std::size_t k = 0; k < cyc.size(); ++k) {
        if (cyc[k] >= degree) fail(ErrorKind::Parse, "cycle notation: point out of range");
        img[cyc[k]] = static_cast<Point>(cyc[(k + 1) % cyc.size()]);
      }
    }
    return Permutation(std::move(img));
  }

  std::size_t degree() const noexcept { return images_.size(); }
  const std::vector<Point>& images() const noexcept { return images_; }
  Point operator[](std::size_t i) const { return images_[i]; }
  bool is_identity() const {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != i) return false;
    return true;
  }

  friend Permutation operator*(const Permutation& a, const Permutation& b) {
    std::vector<Point> r(a.degree());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b.images_[a.images_[i]];
    return Permutation(std::move(r));
  }

  Permutation inverse() const {
    std::vector<Point> r(degree());
    for (std::size_t i = 0; i < r.size(); ++i) r[images_[i]] = static_cast<Point>(i);
    return Permutation(std::move(r));
  }

  std::string to_cycles() const {
    std::string s;
    std::vector<bool> seen(degree(), false);
    for (std::size_t i = 0; i < degree(); ++i) {
      if (seen[i] || images_[i] == i) continue;
      s += "(";
      std::size_t j = i;
      bool first = true;
      while (!seen[j]) {
        seen[j] = true;
        if (!first) s += " ";
        s += std::to_string(j);
        first = false;
        j = images_[j];
      }
      s += ")";
    }
    return s.empty() ? "()" : s;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<Point> images_;
};

struct PermGroup {
  std::string name;
  std::size_t degree = 1;
  std::vector<Permutation> generators;
  std::uint64_t expected_order = 0;  // 0 when unknown
  std::string provenance;
};

/// Reads a generator data file (name, degree, generator*, expected_order,
/// provenance).
inline PermGroup parse_generator_file(const std::string& text, const std::string& origin = "<text>") {
  auto kv = parse_key_values(text, origin);
  PermGroup g;
  g.name = kv.required("name");
  g.degree = static_cast<std::size_t>(parse_u64(kv.required("degree")));
  if (g.degree == 0 || g.degree > 65535) fail(ErrorKind::Data, origin + ": bad degree");
  if (auto e = kv.optional("expected_order")) g.expected_order = parse_u64(*e);
  g.provenance = kv.optional("provenance").value_or("");
  for (const auto& gen : kv.all("generator")) g.generators.push_back(Permutation::from_cycles(gen, g.degree));
  for (const auto& gen : g.generators)
    if (gen.is_identity() && g.generators.size() > 1)
      fail(ErrorKind::Data, origin + ": identity generator in a nontrivial group");
  return g;
}

inline PermGroup load_generator_file(const std::string& path) {
  return parse_generator_file(read_file(path), path);
}

/// All elements of a permutation group, with canonical (BFS) ids.
class EnumeratedGroup {
 public:
  static constexpr std::size_t kDefaultCap = 1'000'000;

  EnumeratedGroup(const PermGroup& g, std::size_t cap = kDefaultCap) : name_(g.name), degree_(g.degree) {
    for (const auto& s : g.generators) {
      if (s.degree() != degree_) fail(ErrorKind::Domain, "generator degree mismatch");
      gens_.push_back(s);
    }
    add(Permutation::identity(degree_));
    for (std::size_t head = 0; head < count_; ++head) {
      Permutation x = element(static_cast<std::uint32_t>(head));
      for (const auto& s : gens_) {
        Permutation y = x * s;
        if (find(y) < 0) {
          if (count_ >= cap)
            fail(ErrorKind::EnumerationOverflow, g.name + ": group exceeds " + std::to_string(cap) + " elements");
          add(y);
        }
      }
    }
    inverse_.resize(count_);
    for (std::uint32_t i = 0; i < count_; ++i) inverse_[i] = id_of(element(i).inverse());
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t degree() const noexcept { return degree_; }
  std::size_t size() const noexcept { return count_; }
  FactoredInt order() const { return factorize(static_cast<std::int64_t>(count_)); }
  const std::vector<Permutation>& generators() const noexcept { return gens_; }

  Permutation element(std::uint32_t id) const {
    auto first = data_.begin() + static_cast<std::ptrdiff_t>(id * degree_);
    return Permutation(std::vector<Point>(first, first + static_cast<std::ptrdiff_t>(degree_)));
  }

  std::int64_t find(const Permutation& p) const {
    auto it = index_.find(key(p.images()));
    return it == index_.end() ? std::int64_t{-1} : std::int64_t{it->second};
  }

  std::uint32_t id_of(const Permutation& p) const {
    auto i = find(p);
    if (i < 0) fail(ErrorKind::Domain, "permutation is not in " + name_);
    return static_cast<std::uint32_t>(i);
  }

  std::uint32_t product(std::uint32_t a, std::uint32_t b) const {
    std::string k(degree_ * sizeof(Point), '\0');
    const Point* pa = &data_[a * degree_];
    const Point* pb = &data_[b * degree_];
    auto* out = reinterpret_cast<Point*>(k.data());
    for (std::size_t i = 0; i < degree_; ++i) out[i] = pb[pa[i]];
    auto it = index_.find(k);
    if (it == index_.end()) fail(ErrorKind::Domain, "product escaped the group");
    return it->second;
  }

  std::uint32_t inverse(std::uint32_t a) const { return inverse_[a]; }

  std::uint32_t element_order(std::uint32_t a) const {
    std::uint32_t x = a, o = 1;
    while (x != 0) {
      x = product(x, a);
      ++o;
    }
    return o;
  }

 private:
  static std::string key(const std::vector<Point>& img) {
    return std::string(reinterpret_cast<const char*>(img.data()), img.size() * sizeof(Point));
  }
  void add(const Permutation& p) {
    index_.emplace(key(p.images()), static_cast<std::uint32_t>(count_));
    data_.insert(data_.end(), p.images().begin(), p.images().end());
    ++count_;
  }

  std::string name_;
  std::size_t degree_;
  std::vector<Permutation> gens_;
  std::vector<Point> data_;
  std::size_t count_ = 0;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::uint32_t> inverse_;
};

/// Conjugacy class data. Class 0 is the identity class.
struct ClassData {
  std::vector<std::uint32_t> reps;
  std::vector<std::uint64_t> sizes;
  std::vector<std::uint32_t> class_of;       // per element id
  std::vector<std::uint32_t> inverse_class;  // K_i -> K_i^{-1}
  std::vector<std::uint32_t> orders;         // element order per class
  /// power_class[j][l] = class of rep_j^l, 0 <= l < orders[j].
  std::vector<std::vector<std::uint32_t>> power_class;
  std::map<std::uint64_t, std::vector<std::uint32_t>> prime_power_maps;
  std::uint64_t exponent = 1;

  std::size_t count() const noexcept { return reps.size(); }
};

inline ClassData conjugacy_classes(const EnumeratedGroup& g) {
  ClassData cd;
  const std::size_t n = g.size();
  constexpr std::uint32_t kNone = UINT32_MAX;
  cd.class_of.assign(n, kNone);
  std::vector<std::uint32_t> gen_ids, gen_inv;
  for (const auto& s : g.generators()) {
    gen_ids.push_back(g.id_of(s));
    gen_inv.push_back(g.inverse(gen_ids.back()));
  }
  for (std::uint32_t x = 0; x < n; ++x) {
    if (cd.class_of[x] != kNone) continue;
    auto c = static_cast<std::uint32_t>(cd.reps.size());
    cd.reps.push_back(x);
    std::vector<std::uint32_t> orbit{x};
    cd.class_of[x] = c;
    for (std::size_t h = 0; h < orbit.size(); ++h) {
      for (std::size_t s = 0; s < gen_ids.size(); ++s) {
        std::uint32_t y = g.product(g.product(gen_inv[s], orbit[h]), gen_ids[s]);
        if (cd.class_of[y] == kNone) {
          cd.class_of[y] = c;
          orbit.push_back(y);
        }
      }
    }
    cd.sizes.push_back(orbit.size());
  }
  const std::size_t r = cd.reps.size();
  cd.inverse_class.resize(r);
  cd.orders.resize(r);
  cd.power_class.resize(r);
  for (std::size_t j = 0; j < r; ++j) {
    std::uint32_t rep = cd.reps[j];
    cd.inverse_class[j] = cd.class_of[g.inverse(rep)];
    std::uint32_t x = 0;  // identity
    std::vector<std::uint32_t> pc;
    do {
      pc.push_back(cd.class_of[x]);
      x = g.product(x, rep);
    } while (x != 0);
    cd.orders[j] = static_cast<std::uint32_t>(pc.size());
    cd.power_class[j] = std::move(pc);
    cd.exponent = std::lcm(cd.exponent, static_cast<std::uint64_t>(cd.orders[j]));
  }
  for (std::uint64_t p : factorize(static_cast<std::int64_t>(cd.exponent)).primes()) {
    std::vector<std::uint32_t> pm(r);
    for (std::size_t j = 0; j < r; ++j) pm[j] = cd.power_class[j][p % cd.orders[j]];
    cd.prime_power_maps[p] = std::move(pm);
  }
  return cd;
}

/// Enumerated group plus class data plus lazily computed structure constants.
class ClassStructure {
 public:
  explicit ClassStructure(const PermGroup& g, std::size_t cap = EnumeratedGroup::kDefaultCap)
      : group_(g, cap), classes_(conjugacy_classes(group_)), source_(g) {}

  const EnumeratedGroup& group() const noexcept { return group_; }
  const ClassData& classes() const noexcept { return classes_; }
  const PermGroup& source() const noexcept { return source_; }
  std::size_t class_count() const noexcept { return classes_.count(); }

  /// a_{ijk}: pairs (x in K_i, y in K_j) with xy = rep of K_k.
  std::uint64_t coeff(std::size_t i, std::size_t j, std::size_t k) const {
    ensure_constants();
    const std::size_t r = class_count();
    return constants_[(i * r + j) * r + k];
  }

  /// Same count evaluated at an arbitrary element z of K_k.
  std::uint64_t coeff_at(std::size_t i, std::size_t j, std::uint32_t z) const {
    std::uint64_t c = 0;
    for (std::uint32_t x = 0; x < group_.size(); ++x) {
      if (classes_.class_of[x] != i) continue;
      std::uint32_t y = group_.product(group_.inverse(x), z);
      if (classes_.class_of[y] == j) ++c;
    }
    return c;
  }

 private:
  void ensure_constants() const {
    if (!constants_.empty()) return;
    const std::size_t r = class_count();
    std::vector<std::uint64_t> t(r * r * r, 0);
    for (std::size_t k = 0; k < r; ++k) {
      std::uint32_t z = classes_.reps[k];
      for (std::uint32_t x = 0; x < group_.size(); ++x) {
        std::uint32_t y = group_.product(group_.inverse(x), z);
        ++t[(classes_.class_of[x] * r + classes_.class_of[y]) * r + k];
      }
    }
    constants_ = std::move(t);
  }

  EnumeratedGroup group_;
  ClassData classes_;
  PermGroup source_;
  mutable std::vector<std::uint64_t> constants_;
};

inline std::uint64_t class_mult_coeff(const ClassStructure& cs, std::size_t i, std::size_t j, std::size_t k) {
  const std::size_t r = cs.class_count();
  if (i >= r || j >= r || k >= r) fail(ErrorKind::Domain, "class index out of range");
  return cs.coeff(i, j, k);
}

inline std::vector<std::uint32_t> elements_of_classes(const ClassStructure& cs, const std::vector<std::size_t>& cls) {
  std::vector<bool> in(cs.class_count(), false);
  for (auto c : cls) {
    if (c >= cs.class_count()) fail(ErrorKind::Domain, "class index out of range");
    in[c] = true;
  }
  std::vector<std::uint32_t> out;
  for (std::uint32_t x = 0; x < cs.group().size(); ++x)
    if (in[cs.classes().class_of[x]]) out.push_back(x);
  return out;
}

/// True iff the union of the given classes is closed under multiplication.
inline bool is_closed_union(const ClassStructure& cs, const std::vector<std::size_t>& cls) {
  std::vector<bool> in(cs.class_count(), false);
  for (auto c : cls) in[c] = true;
  if (!in[0]) return false;
  for (auto i : cls)
    for (auto j : cls)
      for (std::size_t k = 0; k < cs.class_count(); ++k)
        if (!in[k] && cs.coeff(i, j, k) > 0) return false;
  return true;
}

/// Subgroup generated greedily from a closed set of element ids.
inline PermGroup subgroup_from_elements(const EnumeratedGroup& g, const std::vector<std::uint32_t>& elems,
                                        const std::string& name) {
  PermGroup out{name, g.degree(), {}, elems.size(), "subgroup of " + g.name()};
  std::vector<bool> in_h(g.size(), false);
  std::vector<std::uint32_t> h{0}, gens;
  in_h[0] = true;
  for (std::uint32_t x : elems) {
    if (in_h[x]) continue;
    gens.push_back(x);
    out.generators.push_back(g.element(x));
    for (std::size_t head = 0; head < h.size(); ++head) {
      for (std::uint32_t s : gens) {
        std::uint32_t y = g.product(h[head], s);
        if (!in_h[y]) {
          in_h[y] = true;
          h.push_back(y);
        }
      }
    }
  }
  if (h.size() != elems.size()) fail(ErrorKind::NotASubgroup, "element set is not a subgroup of " + g.name());
  return out;
}

/// The subgroup N given by a union of classes, as a permutation group on the
/// same points.
inline PermGroup normal_subgroup_group(const ClassStructure& cs, const std::vector<std::size_t>& cls,
                                       const std::string& name) {
  if (!is_closed_union(cs, cls)) fail(ErrorKind::NotASubgroup, "class union is not a subgroup");
  return subgroup_from_elements(cs.group(), elements_of_classes(cs, cls), name);
}

/// G/N acting on the cosets of N.
inline PermGroup quotient_group(const ClassStructure& cs, const std::vector<std::size_t>& normal_classes) {
  if (!is_closed_union(cs, normal_classes)) fail(ErrorKind::NotASubgroup, "class union is not a subgroup");
  const auto& g = cs.group();
  auto nelems = elements_of_classes(cs, normal_classes);
  constexpr std::uint32_t kNone = UINT32_MAX;
  std::vector<std::uint32_t> coset_of(g.size(), kNone), rep;
  for (std::uint32_t x = 0; x < g.size(); ++x) {
    if (coset_of[x] != kNone) continue;
    auto c = static_cast<std::uint32_t>(rep.size());
    rep.push_back(x);
    for (std::uint32_t m : nelems) coset_of[g.product(x, m)] = c;
  }
  const std::size_t deg = rep.size();
  if (deg > 65535) fail(ErrorKind::Domain, "quotient too large for point type");
  PermGroup q{g.name() + "/N", deg, {}, deg, "quotient of " + g.name()};
  for (const auto& s : g.generators()) {
    std::uint32_t sid = g.id_of(s);
    std::vector<Point> img(deg);
    for (std::size_t c = 0; c < deg; ++c) img[c] = static_cast<Point>(coset_of[g.product(sid, rep[c])]);
    Permutation p(std::move(img));
    if (!p.is_identity()) q.generators.push_back(std::move(p));
  }
  return q;
}

/// Every normal subgroup, as a sorted set of class indices; exhaustive
/// over class subsets.
inline std::vector<std::vector<std::size_t>> normal_subgroups_small(const ClassStructure& cs) {
  if (cs.group().size() > 10'000) fail(ErrorKind::Domain, "normal_subgroups_small requires |G| <= 10^4");
  const std::size_t r = cs.class_count();
  if (r > 20) fail(ErrorKind::ClassCountCap, "normal_subgroups_small requires at most 20 classes");
  const auto& sizes = cs.classes().sizes;
  std::vector<std::vector<std::size_t>> out;
  for (std::uint64_t mask = 0; mask < (1ULL << (r - 1)); ++mask) {
    std::vector<std::size_t> cls{0};
    std::uint64_t total = 1;
    for (std::size_t b = 0; b + 1 < r; ++b) {
      if (mask >> b & 1ULL) {
        cls.push_back(b + 1);
        total += sizes[b + 1];
      }
    }
    if (cs.group().size() % total != 0) continue;
    if (is_closed_union(cs, cls)) out.push_back(std::move(cls));
  }
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    auto sa = std::accumulate(a.begin(), a.end(), std::uint64_t{0}, [&](auto s, auto c) { return s + sizes[c]; });
    auto sb = std::accumulate(b.begin(), b.end(), std::uint64_t{0}, [&](auto s, auto c) { return s + sizes[c]; });
    return sa != sb ? sa < sb : a < b;
  });
  return out;
}

}  // namespace codeg
