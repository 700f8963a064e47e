#pragma once
// Square-root bound reduction: a nonabelian simple group (more generally a
// group with a faithful irreducible character) has a codegree above
// sqrt|G|, so cod(G) inside cod(T) forces |G| <= max(cod T)^2. The
// admissible parameters below that bound form a finite grid; a lower bound
// for the order, increasing beyond a stop point, certifies that nothing lies
// past it.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "codeg/catalog.hpp"
#include "codeg/error.hpp"
#include "codeg/exact_arith.hpp"
#include "codeg/expr.hpp"

namespace codeg {

inline constexpr u128 kSaturated = ~u128{0};

inline u128 sat_mul(u128 a, u128 b) {
  u128 r;
  if (__builtin_mul_overflow(a, b, &r)) return kSaturated;
  return r;
}

/// Lower bound pieces at q: numerator q^m * prod f_j(q), denominator the
/// product of constant denominators and gcd bounds. Nullopt if some
/// numerator factor is below 1 at q.
struct LowerBound {
  u128 num = 1;
  u128 den = 1;
};

inline std::optional<LowerBound> lower_bound_at(const FactorForm& f, std::int64_t q) {
  LowerBound lb;
  if (f.monomial < 0) fail(ErrorKind::Reduction, "negative power of the parameter in an order formula");
  for (std::int64_t i = 0; i < f.monomial; ++i) lb.num = sat_mul(lb.num, static_cast<u128>(q));
  for (const auto& p : f.num) {
    i128 v;
    try {
      v = p.eval(q);
    } catch (const Error&) {
      v = static_cast<i128>(INT64_MAX);  // overflow only for huge values
      if (p.leading() < 0) return std::nullopt;
    }
    if (v < 1) return std::nullopt;
    lb.num = sat_mul(lb.num, static_cast<u128>(v));
  }
  for (const auto& p : f.den) {
    if (p.degree() > 0) fail(ErrorKind::Reduction, "non-constant denominator in an order formula");
    if (p.leading() <= 0) fail(ErrorKind::Reduction, "nonpositive constant denominator");
    lb.den = sat_mul(lb.den, static_cast<u128>(p.leading()));
  }
  for (auto b : f.den_gcd_bounds) {
    if (b <= 0) fail(ErrorKind::Reduction, "gcd bound must be positive");
    lb.den = sat_mul(lb.den, static_cast<u128>(b));
  }
  return lb;
}

/// num/den > bound, decided exactly.
inline bool exceeds(const LowerBound& lb, u128 bound) {
  u128 rhs = sat_mul(bound, lb.den);
  if (rhs == kSaturated) fail(ErrorKind::Reduction, "bound times denominator overflows");
  return lb.num > rhs;
}

struct QScan {
  Bindings fixed;  // other parameters held fixed
  std::string var;
  std::int64_t stop = 0;  // first admissible value with lower bound > M^2
  FactorForm form;
  LowerBound at_stop;
  std::vector<PositivityCertificate> monotone;  // forward differences of the factors
};

struct NBound {
  std::string var;
  std::string q_exponent;
  std::int64_t bits = 0;  // smallest K with 2^K > M^2
  std::int64_t stop = 0;  // q-exponent >= K for all n >= stop
  IntPoly poly;           // num(n) - K*den + 1, positive beyond stop
  std::int64_t exponent_den = 1;
  PositivityCertificate cert;
};

struct ScannedPoint {
  Bindings params;  // primary parameters only
  enum class Kind { Grid, Excluded, Pruned } kind = Kind::Grid;
  FactoredInt order;  // unset for excluded points
};

struct SqrtGrid {
  u128 bound = 0;
  std::optional<NBound> n_bound;
  std::vector<QScan> scans;
  std::vector<ScannedPoint> points;  // lexicographic in (n, q)

  std::vector<Bindings> grid() const {
    std::vector<Bindings> g;
    for (const auto& p : points)
      if (p.kind == ScannedPoint::Kind::Grid) g.push_back(p.params);
    return g;
  }
};

inline constexpr std::int64_t kMaxScan = 100'000'000;

inline QScan scan_q(const GroupFamily& f, const Bindings& fixed, u128 bound, std::vector<ScannedPoint>& out) {
  const ParamSpec& ps = f.prime_power_param();
  QScan s;
  s.fixed = fixed;
  s.var = ps.name;
  s.form = f.order.factor_form(fixed, ps.name);
  for (std::int64_t q = std::max<std::int64_t>(ps.min, 2);; ++q) {
    if (q > kMaxScan) fail(ErrorKind::Reduction, f.name + ": no stop point below " + std::to_string(kMaxScan));
    if (!ps.admits(q)) continue;
    auto lb = lower_bound_at(s.form, q);
    if (lb && exceeds(*lb, bound)) {
      s.stop = q;
      s.at_stop = *lb;
      break;
    }
    Bindings given = fixed;
    given[ps.name] = q;
    Bindings env = f.bind(given);
    ScannedPoint pt;
    pt.params = given;
    if (f.excluded(env)) {
      pt.kind = ScannedPoint::Kind::Excluded;
    } else {
      pt.order = f.order.eval(env);
      auto v = pt.order.try_value128();
      pt.kind = v && *v <= bound ? ScannedPoint::Kind::Grid : ScannedPoint::Kind::Pruned;
    }
    out.push_back(std::move(pt));
  }
  for (const auto& p : s.form.num) {
    if (p.degree() <= 0) continue;
    try {
      s.monotone.push_back(positivity_beyond(p.forward_difference(), s.stop));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PositivityFails) throw;
      fail(ErrorKind::Reduction, f.name + ": factor " + p.to_string('q') + " not increasing beyond " + std::to_string(s.stop));
    }
  }
  return s;
}

inline std::int64_t bits_above(u128 bound) {
  std::int64_t k = 0;
  while (k < 127 && (u128{1} << k) <= bound) ++k;
  return k;
}

/// All admissible, non-excluded parameters with |F(params)| <= bound,
/// together with the certificates bounding the search.
inline SqrtGrid sqrt_bound_grid(const GroupFamily& f, u128 bound) {
  if (f.kind != "formula") fail(ErrorKind::Reduction, f.name + " has no order formula");
  SqrtGrid g;
  g.bound = bound;
  const ParamSpec* np = f.integer_param();
  if (!np) {
    g.scans.push_back(scan_q(f, {}, bound, g.points));
    return g;
  }
  if (!f.q_exponent) fail(ErrorKind::Reduction, f.name + ": two-parameter family needs q_exponent");
  const std::string qvar = f.prime_power_param().name;
  NBound nb;
  nb.var = np->name;
  nb.q_exponent = f.q_exponent->source();
  nb.bits = bits_above(bound);
  auto [enum_poly, eden] = f.q_exponent->to_poly({}, np->name);
  if (eden <= 0) fail(ErrorKind::Reduction, "q_exponent denominator must be positive");
  nb.exponent_den = eden;
  nb.poly = enum_poly - IntPoly::constant(checked_mul(nb.bits, eden)) + IntPoly::constant(1);
  std::int64_t stop = np->min;
  while (true) {
    if (stop > 10'000) fail(ErrorKind::Reduction, f.name + ": no n bound");
    if (nb.poly.eval(stop) <= 0) {
      ++stop;
      continue;
    }
    try {
      nb.cert = positivity_beyond(nb.poly, stop);
      break;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PositivityFails) throw;
      ++stop;
    }
  }
  nb.stop = stop;
  // the declared exponent must be the exponent of q in the order formula
  for (std::int64_t n = np->min; n <= stop + 5; ++n) {
    auto form = f.order.factor_form({{np->name, n}}, qvar);
    i128 e = enum_poly.eval(n);
    if (e % eden != 0 || form.monomial != static_cast<std::int64_t>(e / eden))
      fail(ErrorKind::Reduction, f.name + ": q_exponent disagrees with the order formula at " + np->name + "=" + std::to_string(n));
  }
  g.n_bound = nb;
  for (std::int64_t n = np->min; n < stop; ++n) g.scans.push_back(scan_q(f, {{np->name, n}}, bound, g.points));
  return g;
}

}  // namespace codeg
