#pragma once
// Partitions, the hook length formula, alternating-group degrees, and the
// thirteen small-shape degree polynomials with their distinctness
// certificates.

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "codeg/error.hpp"
#include "codeg/exact_arith.hpp"
#include "codeg/expr.hpp"

namespace codeg {

using Partition = std::vector<std::uint32_t>;

inline std::uint32_t partition_size(const Partition& p) { return std::accumulate(p.begin(), p.end(), 0U); }

inline void check_partition(const Partition& p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0) fail(ErrorKind::Domain, "partition with a zero part");
    if (i && p[i] > p[i - 1]) fail(ErrorKind::Domain, "partition parts must be non-increasing");
  }
}

inline Partition conjugate(const Partition& p) {
  check_partition(p);
  Partition c(p.empty() ? 0 : p[0], 0);
  for (auto row : p)
    for (std::uint32_t j = 0; j < row; ++j) ++c[j];
  return c;
}

/// n! / prod(hooks), evaluated in factored form.
inline std::uint64_t hook_degree(const Partition& p) {
  check_partition(p);
  const std::uint32_t n = partition_size(p);
  if (n > 80) fail(ErrorKind::Overflow, "hook_degree supports n <= 80");
  FactoredInt num;
  for (std::uint32_t k = 2; k <= n; ++k) num = fi_mul(num, factorize(k));
  Partition c = conjugate(p);
  FactoredInt den;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::uint32_t j = 0; j < p[i]; ++j) {
      std::uint32_t hook = (p[i] - j - 1) + (c[j] - static_cast<std::uint32_t>(i) - 1) + 1;
      den = fi_mul(den, factorize(hook));
    }
  return fi_div_exact(num, den).value();
}

inline std::vector<Partition> partitions_of(std::uint32_t n) {
  std::vector<Partition> out;
  Partition cur;
  auto rec = [&](auto&& self, std::uint32_t rem, std::uint32_t maxpart) -> void {
    if (rem == 0) {
      out.push_back(cur);
      return;
    }
    for (std::uint32_t k = std::min(rem, maxpart); k >= 1; --k) {
      cur.push_back(k);
      self(self, rem - k, k);
      cur.pop_back();
    }
  };
  rec(rec, n, n);
  return out;
}

/// Degree multiset of A_n: self-conjugate shapes split into two halves,
/// other shapes pair up with their conjugates.
inline std::vector<std::uint64_t> alternating_degrees(std::uint32_t n) {
  if (n < 2) fail(ErrorKind::Domain, "alternating_degrees needs n >= 2");
  std::vector<std::uint64_t> out;
  for (const auto& p : partitions_of(n)) {
    Partition c = conjugate(p);
    std::uint64_t d = hook_degree(p);
    if (c == p) {
      out.push_back(d / 2);
      out.push_back(d / 2);
    } else if (p > c) {
      out.push_back(d);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// A degree given as numerator polynomial in n over a positive integer.
struct PartitionFormula {
  std::string shape;  // e.g. "(n-4,3,1)"
  std::vector<std::uint32_t> tail;  // parts after the first row, e.g. {3,1}
  std::string source;  // the expression text
  IntPoly numerator;
  std::int64_t denominator = 1;

  Partition at(std::uint32_t n) const {
    std::uint32_t rest = std::accumulate(tail.begin(), tail.end(), 0U);
    if (n < rest + (tail.empty() ? 0 : tail[0])) fail(ErrorKind::Domain, "shape not a partition at this n");
    Partition p{n - rest};
    p.insert(p.end(), tail.begin(), tail.end());
    return p;
  }
  /// Exact value, or nullopt when not integral at n.
  std::optional<std::int64_t> value(std::int64_t n) const {
    i128 v = numerator.eval(n);
    if (v % denominator != 0) return std::nullopt;
    return static_cast<std::int64_t>(v / denominator);
  }
};

inline PartitionFormula make_partition_formula(std::string shape, std::vector<std::uint32_t> tail, const std::string& src) {
  auto e = RationalExpr::parse(src);
  auto [num, den] = e.to_poly({}, "n");
  if (den <= 0) fail(ErrorKind::Data, "partition formula with nonpositive denominator");
  return {std::move(shape), std::move(tail), src, num, den};
}

/// Variant "validated" agrees with the hook formula; "as-printed" keeps the
/// (n-5,4,1) entry exactly as transcribed, with denominator 24.
inline std::vector<PartitionFormula> small_shape_formulas(const std::string& variant = "validated") {
  if (variant != "validated" && variant != "as-printed") fail(ErrorKind::Domain, "unknown formula variant " + variant);
  std::vector<PartitionFormula> f;
  f.push_back(make_partition_formula("(n-1,1)", {1}, "n-1"));
  f.push_back(make_partition_formula("(n-2,2)", {2}, "n*(n-3)/2"));
  f.push_back(make_partition_formula("(n-2,1,1)", {1, 1}, "(n-1)*(n-2)/2"));
  f.push_back(make_partition_formula("(n-3,3)", {3}, "n*(n-1)*(n-5)/6"));
  f.push_back(make_partition_formula("(n-3,2,1)", {2, 1}, "n*(n-2)*(n-4)/3"));
  f.push_back(make_partition_formula("(n-3,1,1,1)", {1, 1, 1}, "(n-1)*(n-2)*(n-3)/6"));
  f.push_back(make_partition_formula("(n-4,4)", {4}, "n*(n-1)*(n-2)*(n-7)/24"));
  f.push_back(make_partition_formula("(n-4,3,1)", {3, 1}, "n*(n-1)*(n-3)*(n-6)/8"));
  f.push_back(make_partition_formula("(n-4,2,2)", {2, 2}, "n*(n-1)*(n-4)*(n-5)/12"));
  f.push_back(make_partition_formula("(n-4,1,1,1,1)", {1, 1, 1, 1}, "(n-1)*(n-2)*(n-3)*(n-4)/24"));
  f.push_back(make_partition_formula("(n-5,5)", {5}, "n*(n-1)*(n-2)*(n-3)*(n-9)/120"));
  f.push_back(make_partition_formula("(n-5,4,1)", {4, 1},
                                     variant == "validated" ? "n*(n-1)*(n-2)*(n-4)*(n-8)/30"
                                                            : "n*(n-1)*(n-2)*(n-4)*(n-8)/24"));
  f.push_back(make_partition_formula("(n-5,3,2)", {3, 2}, "n*(n-1)*(n-2)*(n-5)*(n-7)/24"));
  return f;
}

struct PairCertificate {
  std::size_t i = 0, j = 0;
  IntPoly difference;  // N_i D_j - N_j D_i, sign-normalized
  PositivityCertificate cert;
};

struct DistinctnessCertificate {
  std::string variant;
  std::int64_t from = 14;
  std::vector<PositivityCertificate> above_one;  // N_i - D_i > 0
  std::vector<PairCertificate> pairs;
  bool closed = false;
};

/// Every formula exceeds 1 and all pairs differ at every integer n >= from.
inline DistinctnessCertificate shape_distinctness_certificate(const std::string& variant = "validated", std::int64_t from = 14) {
  auto fs = small_shape_formulas(variant);
  DistinctnessCertificate out;
  out.variant = variant;
  out.from = from;
  for (const auto& f : fs)
    out.above_one.push_back(positivity_beyond(f.numerator - IntPoly::constant(f.denominator), from));
  for (std::size_t i = 0; i < fs.size(); ++i) {
    for (std::size_t j = i + 1; j < fs.size(); ++j) {
      IntPoly diff = fs[i].numerator.scaled(fs[j].denominator) - fs[j].numerator.scaled(fs[i].denominator);
      if (diff.is_zero()) fail(ErrorKind::PositivityFails, "formulas " + fs[i].shape + " and " + fs[j].shape + " coincide");
      if (diff.leading() < 0) diff = -diff;
      PairCertificate pc{i, j, diff, {}};
      try {
        pc.cert = positivity_beyond(diff, from);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::PositivityFails) throw;
        pc.cert = nonvanishing_beyond(diff, from);
      }
      out.pairs.push_back(std::move(pc));
    }
  }
  out.closed = true;
  return out;
}

}  // namespace codeg
