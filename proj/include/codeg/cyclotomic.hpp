#pragma once
// Exact arithmetic in Z[zeta_e]: character values kept as root-of-unity
// multiplicity vectors, sums accumulated in Z[x]/(x^e - 1) and reduced
// modulo the cyclotomic polynomial for equality tests.

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "codeg/error.hpp"
#include "codeg/exact_arith.hpp"

namespace codeg {

/// chi(g) = sum_k m[k] * zeta_e^k with e the order of g.
struct CyclotomicValue {
  std::uint32_t e = 1;
  std::vector<std::uint64_t> m{0};

  std::uint64_t degree_sum() const {
    std::uint64_t s = 0;
    for (auto v : m) s += v;
    return s;
  }
  bool is_real() const {
    for (std::uint32_t k = 1; k < e; ++k)
      if (m[k] != m[e - k]) return false;
    return true;
  }
  /// All mass at zeta^0, i.e. chi(g) = chi(1).
  bool is_rational_integer_at_one() const {
    for (std::uint32_t k = 1; k < e; ++k)
      if (m[k] != 0) return false;
    return true;
  }
  friend bool operator==(const CyclotomicValue&, const CyclotomicValue&) = default;
  friend auto operator<=>(const CyclotomicValue& a, const CyclotomicValue& b) {
    if (auto c = a.e <=> b.e; c != 0) return c;
    return a.m <=> b.m;
  }
};

/// Integer coefficients of Phi_e, ascending.
inline const std::vector<std::int64_t>& cyclotomic_polynomial(std::uint32_t e) {
  static std::map<std::uint32_t, std::vector<std::int64_t>> cache;
  static std::mutex mu;
  if (e == 0) fail(ErrorKind::Domain, "cyclotomic polynomial of order 0");
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(e); it != cache.end()) return it->second;
  }
  // x^e - 1 divided by Phi_d for every proper divisor d.
  std::vector<std::int64_t> num(e + 1, 0);
  num[0] = -1;
  num[e] = 1;
  for (std::uint32_t d = 1; d < e; ++d) {
    if (e % d) continue;
    const auto& phi = cyclotomic_polynomial(d);
    // exact division by a monic polynomial
    std::size_t dn = num.size() - 1, dp = phi.size() - 1;
    std::vector<std::int64_t> q(dn - dp + 1, 0);
    for (std::size_t i = dn + 1; i-- > dp;) {
      std::int64_t c = num[i];
      q[i - dp] = c;
      if (c == 0) continue;
      for (std::size_t j = 0; j <= dp; ++j) num[i - dp + j] = checked_sub(num[i - dp + j], checked_mul(c, phi[j]));
    }
    for (std::size_t i = 0; i < dp; ++i)
      if (num[i] != 0) fail(ErrorKind::Domain, "cyclotomic division not exact");
    num = std::move(q);
  }
  std::lock_guard lock(mu);
  return cache.emplace(e, std::move(num)).first->second;
}

/// Element of Z[x]/(x^E - 1) used to accumulate sums of products of
/// character values whose orders divide E.
class CycloAccumulator {
 public:
  explicit CycloAccumulator(std::uint32_t E) : E_(E), c_(E, 0) {}

  std::uint32_t order() const noexcept { return E_; }

  /// += weight * a * (conj b if conj_b else b).
  void add_product(const CyclotomicValue& a, const CyclotomicValue& b, std::int64_t weight, bool conj_b) {
    if (E_ % a.e || E_ % b.e) fail(ErrorKind::Domain, "value order does not divide accumulator order");
    const std::uint32_t sa = E_ / a.e, sb = E_ / b.e;
    for (std::uint32_t i = 0; i < a.e; ++i) {
      if (!a.m[i]) continue;
      for (std::uint32_t j = 0; j < b.e; ++j) {
        if (!b.m[j]) continue;
        std::uint64_t ej = static_cast<std::uint64_t>(j) * sb % E_;
        if (conj_b) ej = (E_ - ej) % E_;
        std::uint64_t k = (static_cast<std::uint64_t>(i) * sa + ej) % E_;
        i128 t = static_cast<i128>(a.m[i]) * static_cast<i128>(b.m[j]) * weight;
        c_[k] = checked_add<std::int64_t>(c_[k], narrow(t));
      }
    }
  }

  void add_value(const CyclotomicValue& a, std::int64_t weight) {
    if (E_ % a.e) fail(ErrorKind::Domain, "value order does not divide accumulator order");
    const std::uint32_t sa = E_ / a.e;
    for (std::uint32_t i = 0; i < a.e; ++i)
      if (a.m[i]) c_[i * sa % E_] = checked_add<std::int64_t>(c_[i * sa % E_], checked_mul<std::int64_t>(static_cast<std::int64_t>(a.m[i]), weight));
  }

  /// Reduction modulo Phi_E; coefficients of the canonical representative.
  std::vector<std::int64_t> reduced() const {
    const auto& phi = cyclotomic_polynomial(E_);
    const std::size_t dp = phi.size() - 1;
    std::vector<std::int64_t> r = c_;
    for (std::size_t i = r.size(); i-- > dp;) {
      std::int64_t c = r[i];
      if (c == 0) continue;
      for (std::size_t j = 0; j <= dp; ++j) r[i - dp + j] = checked_sub(r[i - dp + j], checked_mul(c, phi[j]));
    }
    r.resize(dp);
    return r;
  }

  /// The value as a rational integer, if it is one.
  std::optional<std::int64_t> as_integer() const {
    auto r = reduced();
    for (std::size_t i = 1; i < r.size(); ++i)
      if (r[i] != 0) return std::nullopt;
    return r.empty() ? 0 : r[0];
  }

 private:
  static std::int64_t narrow(i128 t) {
    if (t > INT64_MAX || t < INT64_MIN) fail(ErrorKind::Overflow, "cyclotomic accumulator overflow");
    return static_cast<std::int64_t>(t);
  }
  std::uint32_t E_;
  std::vector<std::int64_t> c_;
};

}  // namespace codeg
