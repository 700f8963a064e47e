#pragma once
// Exact integer arithmetic: overflow-checked machine integers, prime
// factorization, factored integers, integer polynomials and the
// Cauchy-bound positivity certificates used to turn "for all q >= q0"
// claims into finite checks.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "codeg/error.hpp"

namespace codeg {

using i128 = __int128;
using u128 = unsigned __int128;

// ---------------------------------------------------------------------------
// Checked arithmetic

template <class T>
T checked_add(T a, T b) {
  T r;
  if (__builtin_add_overflow(a, b, &r)) fail(ErrorKind::Overflow, "addition overflow");
  return r;
}

template <class T>
T checked_sub(T a, T b) {
  T r;
  if (__builtin_sub_overflow(a, b, &r)) fail(ErrorKind::Overflow, "subtraction overflow");
  return r;
}

template <class T>
T checked_mul(T a, T b) {
  T r;
  if (__builtin_mul_overflow(a, b, &r)) fail(ErrorKind::Overflow, "multiplication overflow");
  return r;
}

template <class T>
T checked_pow(T base, std::uint64_t exp) {
  T result = 1;
  for (std::uint64_t i = 0; i < exp; ++i) result = checked_mul<T>(result, base);
  return result;
}

inline std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

inline std::string to_string(i128 v) {
  if (v < 0) return "-" + to_string(static_cast<u128>(-(v + 1)) + 1);
  return to_string(static_cast<u128>(v));
}

/// Parses a non-negative decimal integer that must fit in 64 bits.
inline std::uint64_t parse_u64(std::string_view s) {
  if (s.empty()) fail(ErrorKind::Parse, "empty integer");
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') fail(ErrorKind::Parse, "bad integer '" + std::string(s) + "'");
    v = checked_add<std::uint64_t>(checked_mul<std::uint64_t>(v, 10), static_cast<std::uint64_t>(c - '0'));
  }
  return v;
}

inline std::int64_t parse_i64(std::string_view s) {
  bool neg = !s.empty() && s.front() == '-';
  std::uint64_t mag = parse_u64(neg ? s.substr(1) : s);
  if (mag > static_cast<std::uint64_t>(INT64_MAX)) fail(ErrorKind::Overflow, "integer exceeds 64 bits");
  return neg ? -static_cast<std::int64_t>(mag) : static_cast<std::int64_t>(mag);
}

inline u128 parse_u128(std::string_view s) {
  if (s.empty()) fail(ErrorKind::Parse, "empty integer");
  u128 v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') fail(ErrorKind::Parse, "bad integer '" + std::string(s) + "'");
    v = checked_add<u128>(checked_mul<u128>(v, 10), static_cast<u128>(c - '0'));
  }
  return v;
}

inline i128 parse_i128(std::string_view s) {
  bool neg = !s.empty() && s.front() == '-';
  u128 mag = parse_u128(neg ? s.substr(1) : s);
  constexpr u128 lim = ~u128{0} >> 1;
  if (mag > lim + (neg ? 1 : 0)) fail(ErrorKind::Overflow, "integer exceeds 128 bits");
  if (neg) return mag == lim + 1 ? static_cast<i128>(-static_cast<i128>(lim) - 1) : -static_cast<i128>(mag);
  return static_cast<i128>(mag);
}

/// Exact integer square root; nullopt when n is not a perfect square.
inline std::optional<std::uint64_t> exact_isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(__builtin_sqrtl(static_cast<long double>(n)));
  while (static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  if (static_cast<u128>(r) * r != n) return std::nullopt;
  return r;
}

inline std::uint64_t floor_isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(__builtin_sqrtl(static_cast<long double>(n)));
  while (static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

// ---------------------------------------------------------------------------
// Primality and factorization

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

inline bool miller_rabin_witness(std::uint64_t n, std::uint64_t a, std::uint64_t d, int s) {
  std::uint64_t x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (int i = 1; i < s; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

inline std::uint64_t pollard_brent(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  for (std::uint64_t c = 1;; ++c) {
    std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
    std::uint64_t r = 1;
    const std::uint64_t m = 128;
    auto f = [&](std::uint64_t v) { return (mulmod(v, v, n) + c) % n; };
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

}  // namespace detail

/// Deterministic Miller-Rabin for all 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (detail::miller_rabin_witness(n, a, d, s)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// FactoredInt

/// A positive integer held as its prime factorization. The empty map is 1.
class FactoredInt {
 public:
  using Map = std::map<std::uint64_t, std::uint32_t>;

  FactoredInt() = default;

  static FactoredInt from_factors(Map factors) {
    for (auto it = factors.begin(); it != factors.end();) {
      if (it->second == 0) {
        it = factors.erase(it);
        continue;
      }
      if (!is_prime(it->first)) fail(ErrorKind::Domain, "non-prime key " + std::to_string(it->first));
      ++it;
    }
    FactoredInt f;
    f.factors_ = std::move(factors);
    return f;
  }

  static FactoredInt prime_power(std::uint64_t p, std::uint32_t k) { return from_factors({{p, k}}); }

  const Map& factors() const noexcept { return factors_; }
  bool is_one() const noexcept { return factors_.empty(); }

  std::uint32_t exponent(std::uint64_t p) const {
    auto it = factors_.find(p);
    return it == factors_.end() ? 0 : it->second;
  }

  std::vector<std::uint64_t> primes() const {
    std::vector<std::uint64_t> out;
    for (const auto& [p, e] : factors_) out.push_back(p);
    return out;
  }

  /// Value as a 128-bit integer; nullopt if it does not fit.
  std::optional<u128> try_value128() const {
    u128 v = 1;
    for (const auto& [p, e] : factors_) {
      for (std::uint32_t i = 0; i < e; ++i) {
        if (__builtin_mul_overflow(v, static_cast<u128>(p), &v)) return std::nullopt;
      }
    }
    return v;
  }

  u128 value128() const {
    auto v = try_value128();
    if (!v) fail(ErrorKind::Overflow, "factored value exceeds 128 bits: " + dotted());
    return *v;
  }

  std::uint64_t value() const {
    u128 v = value128();
    if (v > UINT64_MAX) fail(ErrorKind::Overflow, "factored value exceeds 64 bits: " + dotted());
    return static_cast<std::uint64_t>(v);
  }

  /// Dot notation, e.g. "2^4.3^2.7"; "1" for the empty product.
  std::string dotted() const {
    if (factors_.empty()) return "1";
    std::string s;
    for (const auto& [p, e] : factors_) {
      if (!s.empty()) s += '.';
      s += std::to_string(p);
      if (e > 1) s += "^" + std::to_string(e);
    }
    return s;
  }

  std::string decimal() const {
    auto v = try_value128();
    return v ? to_string(*v) : dotted();
  }

  friend bool operator==(const FactoredInt& a, const FactoredInt& b) { return a.factors_ == b.factors_; }

  /// Numeric order. Values beyond 128 bits compare by log as a last resort.
  friend std::strong_ordering operator<=>(const FactoredInt& a, const FactoredInt& b) {
    if (a == b) return std::strong_ordering::equal;
    auto va = a.try_value128();
    auto vb = b.try_value128();
    if (va && vb) return *va <=> *vb;
    if (va) return std::strong_ordering::less;
    if (vb) return std::strong_ordering::greater;
    return a.log2() < b.log2() ? std::strong_ordering::less : std::strong_ordering::greater;
  }

  long double log2() const {
    long double s = 0;
    for (const auto& [p, e] : factors_) s += e * __builtin_log2l(static_cast<long double>(p));
    return s;
  }

 private:
  Map factors_;
};

/// Prime factorization by wheel trial division, finishing large cofactors
/// with Miller-Rabin and Pollard-Brent.
inline FactoredInt factorize(std::int64_t n) {
  if (n <= 0) fail(ErrorKind::Domain, "factorize requires n >= 1, got " + std::to_string(n));
  auto m = static_cast<std::uint64_t>(n);
  FactoredInt::Map f;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL}) {
    while (m % p == 0) {
      ++f[p];
      m /= p;
    }
  }
  static constexpr std::uint64_t kWheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
  std::uint64_t d = 7;
  for (int i = 0; d <= 1'000'000 && d * d <= m; d += kWheel[i], i = (i + 1) % 8) {
    while (m % d == 0) {
      ++f[d];
      m /= d;
    }
  }
  std::vector<std::uint64_t> stack;
  if (m > 1) stack.push_back(m);
  while (!stack.empty()) {
    std::uint64_t x = stack.back();
    stack.pop_back();
    if (is_prime(x)) {
      ++f[x];
      continue;
    }
    std::uint64_t g = detail::pollard_brent(x);
    stack.push_back(g);
    stack.push_back(x / g);
  }
  return FactoredInt::from_factors(std::move(f));
}

inline FactoredInt factorize_u128(u128 n) {
  if (n == 0) fail(ErrorKind::Domain, "factorize requires n >= 1");
  if (n <= static_cast<u128>(INT64_MAX)) return factorize(static_cast<std::int64_t>(n));
  FactoredInt::Map f;
  for (std::uint64_t d = 2; d < 10'000'000 && n > static_cast<u128>(INT64_MAX); ++d) {
    while (n % d == 0) {
      ++f[d];
      n /= d;
    }
  }
  if (n > static_cast<u128>(INT64_MAX)) fail(ErrorKind::Overflow, "cannot factor 128-bit cofactor");
  for (const auto& [p, e] : factorize(static_cast<std::int64_t>(n)).factors()) f[p] += e;
  return FactoredInt::from_factors(std::move(f));
}

inline FactoredInt fi_mul(const FactoredInt& a, const FactoredInt& b) {
  auto m = a.factors();
  for (const auto& [p, e] : b.factors()) m[p] = checked_add<std::uint32_t>(m[p], e);
  return FactoredInt::from_factors(std::move(m));
}

inline FactoredInt fi_pow(const FactoredInt& a, std::uint32_t k) {
  auto m = a.factors();
  for (auto& [p, e] : m) e = checked_mul<std::uint32_t>(e, k);
  return FactoredInt::from_factors(std::move(m));
}

/// True iff b divides a.
inline bool fi_divides(const FactoredInt& a, const FactoredInt& b) {
  for (const auto& [p, e] : b.factors()) {
    if (a.exponent(p) < e) return false;
  }
  return true;
}

inline FactoredInt fi_div_exact(const FactoredInt& a, const FactoredInt& b) {
  if (!fi_divides(a, b)) fail(ErrorKind::ExactDivision, b.dotted() + " does not divide " + a.dotted());
  auto m = a.factors();
  for (const auto& [p, e] : b.factors()) m[p] -= e;
  return FactoredInt::from_factors(std::move(m));
}

inline FactoredInt fi_gcd(const FactoredInt& a, const FactoredInt& b) {
  FactoredInt::Map m;
  for (const auto& [p, e] : a.factors()) {
    auto eb = b.exponent(p);
    if (eb > 0) m[p] = std::min(e, eb);
  }
  return FactoredInt::from_factors(std::move(m));
}

/// Parses dot notation ("2^4.3^2.7") or a plain decimal integer.
inline FactoredInt parse_factored(std::string_view s) {
  auto trim = [](std::string_view v) {
    while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
    while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.remove_suffix(1);
    return v;
  };
  s = trim(s);
  if (s.empty()) fail(ErrorKind::Parse, "empty factored integer");
  if (s.find('.') == std::string_view::npos && s.find('^') == std::string_view::npos) {
    return factorize_u128(parse_u128(s));
  }
  FactoredInt::Map m;
  while (!s.empty()) {
    auto dot = s.find('.');
    auto part = trim(s.substr(0, dot));
    s = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
    auto caret = part.find('^');
    std::uint64_t p = parse_u64(part.substr(0, caret));
    std::uint64_t e = caret == std::string_view::npos ? 1 : parse_u64(part.substr(caret + 1));
    if (!is_prime(p)) fail(ErrorKind::Parse, "non-prime base " + std::to_string(p) + " in factored integer");
    if (e == 0 || e > UINT32_MAX) fail(ErrorKind::Parse, "bad exponent in factored integer");
    m[p] += static_cast<std::uint32_t>(e);
  }
  return FactoredInt::from_factors(std::move(m));
}

/// (p, k) with p^k = n when n is a prime power; nullopt otherwise.
inline std::optional<std::pair<std::uint64_t, std::uint32_t>> is_prime_power(std::int64_t n) {
  if (n < 2) fail(ErrorKind::Domain, "is_prime_power requires n >= 2");
  auto f = factorize(n);
  if (f.factors().size() != 1) return std::nullopt;
  return *f.factors().begin();
}

// ---------------------------------------------------------------------------
// IntPoly

/// Integer polynomial, coefficients in ascending degree, no trailing zeros.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<std::int64_t> coeffs) : c_(std::move(coeffs)) { normalize(); }

  static IntPoly constant(std::int64_t v) { return IntPoly({v}); }
  static IntPoly monomial(std::int64_t coef, std::size_t deg) {
    std::vector<std::int64_t> c(deg + 1, 0);
    c[deg] = coef;
    return IntPoly(std::move(c));
  }
  static IntPoly x() { return monomial(1, 1); }

  const std::vector<std::int64_t>& coeffs() const noexcept { return c_; }
  bool is_zero() const noexcept { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  std::int64_t leading() const { return c_.empty() ? 0 : c_.back(); }
  std::int64_t coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }

  i128 eval(i128 x) const {
    i128 v = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = checked_add<i128>(checked_mul<i128>(v, x), *it);
    return v;
  }

  friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    std::vector<std::int64_t> c(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = checked_add(a.coeff(i), b.coeff(i));
    return IntPoly(std::move(c));
  }
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b) {
    std::vector<std::int64_t> c(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = checked_sub(a.coeff(i), b.coeff(i));
    return IntPoly(std::move(c));
  }
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<std::int64_t> c(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        c[i + j] = checked_add(c[i + j], checked_mul(a.c_[i], b.c_[j]));
    return IntPoly(std::move(c));
  }
  IntPoly operator-() const { return IntPoly::constant(0) - *this; }
  IntPoly scaled(std::int64_t k) const { return *this * constant(k); }

  IntPoly pow(std::uint64_t k) const {
    IntPoly r = constant(1);
    for (std::uint64_t i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  /// p(x + 1) by Taylor shift.
  IntPoly shifted_by_one() const {
    IntPoly r;
    IntPoly base = IntPoly({1, 1});
    for (int i = degree(); i >= 0; --i) r = r * base + constant(c_[static_cast<std::size_t>(i)]);
    return r;
  }

  /// Forward difference p(x+1) - p(x).
  IntPoly forward_difference() const { return shifted_by_one() - *this; }

  friend bool operator==(const IntPoly&, const IntPoly&) = default;

  std::string to_string(char var = 'x') const {
    if (c_.empty()) return "0";
    std::string s;
    for (int i = degree(); i >= 0; --i) {
      std::int64_t a = c_[static_cast<std::size_t>(i)];
      if (a == 0) continue;
      bool neg = a < 0;
      std::uint64_t mag = neg ? static_cast<std::uint64_t>(-(a + 1)) + 1 : static_cast<std::uint64_t>(a);
      if (s.empty()) {
        if (neg) s += "-";
      } else {
        s += neg ? " - " : " + ";
      }
      if (mag != 1 || i == 0) s += std::to_string(mag);
      if (i > 0) {
        if (mag != 1) s += "*";
        s += var;
        if (i > 1) s += "^" + std::to_string(i);
      }
    }
    return s;
  }

 private:
  void normalize() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<std::int64_t> c_;
};

// ---------------------------------------------------------------------------
// Positivity certificates

enum class CertKind { Positive, Nonvanishing };

/// Proof that p(q) > 0 (or != 0) for every integer q >= from: all integer
/// roots lie below the Cauchy bound, and every integer in [from, bound] was
/// evaluated.
struct PositivityCertificate {
  IntPoly poly;
  std::int64_t from = 0;
  std::int64_t cauchy_bound = 0;
  CertKind kind = CertKind::Positive;
  std::vector<std::pair<std::int64_t, i128>> checked_points;
};

/// 1 + ceil(max_{i<n} |a_i| / |a_n|).
inline std::int64_t cauchy_bound(const IntPoly& p) {
  if (p.is_zero()) fail(ErrorKind::Domain, "Cauchy bound of the zero polynomial");
  const auto& c = p.coeffs();
  u128 lead = static_cast<u128>(c.back() < 0 ? -static_cast<i128>(c.back()) : c.back());
  u128 best = 0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    u128 a = static_cast<u128>(c[i] < 0 ? -static_cast<i128>(c[i]) : c[i]);
    u128 q = (a + lead - 1) / lead;
    best = std::max(best, q);
  }
  if (best >= static_cast<u128>(INT64_MAX)) fail(ErrorKind::Overflow, "Cauchy bound exceeds 64 bits");
  return static_cast<std::int64_t>(best) + 1;
}

namespace detail {

inline constexpr std::int64_t kMaxCertificatePoints = 20'000'000;

inline PositivityCertificate build_certificate(const IntPoly& p, std::int64_t q0, CertKind kind) {
  if (p.is_zero() || p.leading() <= 0)
    fail(ErrorKind::Domain, "certificate requires a positive leading coefficient: " + p.to_string('q'));
  PositivityCertificate cert{p, q0, cauchy_bound(p), kind, {}};
  if (p.degree() == 0) return cert;
  if (cert.cauchy_bound >= q0 && cert.cauchy_bound - q0 >= kMaxCertificatePoints)
    fail(ErrorKind::Overflow, "certificate range too large for " + p.to_string('q'));
  for (std::int64_t q = q0; q <= cert.cauchy_bound; ++q) {
    i128 v = p.eval(q);
    bool ok = kind == CertKind::Positive ? v > 0 : v != 0;
    if (!ok) {
      fail(ErrorKind::PositivityFails, p.to_string('q') + " at q = " + std::to_string(q) + " has value " + to_string(v));
    }
    cert.checked_points.emplace_back(q, v);
  }
  return cert;
}

}  // namespace detail

/// Certificate that p(q) > 0 for every integer q >= q0.
inline PositivityCertificate positivity_beyond(const IntPoly& p, std::int64_t q0) {
  return detail::build_certificate(p, q0, CertKind::Positive);
}

/// Certificate that p(q) != 0 for every integer q >= q0.
inline PositivityCertificate nonvanishing_beyond(const IntPoly& p, std::int64_t q0) {
  return detail::build_certificate(p, q0, CertKind::Nonvanishing);
}

/// Re-derives the certificate from its polynomial and start point and
/// compares. Independent of how the certificate was produced.
inline bool recheck_certificate(const PositivityCertificate& cert) {
  if (cert.poly.is_zero() || cert.poly.leading() <= 0) return false;
  if (cert.cauchy_bound != cauchy_bound(cert.poly)) return false;
  if (cert.poly.degree() == 0) return true;
  for (std::int64_t q = cert.from; q <= cert.cauchy_bound; ++q) {
    i128 v = cert.poly.eval(q);
    if (cert.kind == CertKind::Positive ? v <= 0 : v == 0) return false;
  }
  return true;
}

/// Smallest prime p with p = 1 (mod m) and p > lower.
inline std::uint64_t prime_in_progression(std::uint64_t m, std::uint64_t lower, std::uint64_t limit) {
  std::uint64_t p = (lower / m + 1) * m + 1;
  for (; p < limit; p += m) {
    if (is_prime(p)) return p;
  }
  fail(ErrorKind::Parameter, "no prime = 1 mod " + std::to_string(m) + " below limit");
}

}  // namespace codeg
