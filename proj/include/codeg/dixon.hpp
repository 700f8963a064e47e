#pragma once
// Dixon-Schneider character tables. Class matrices are reduced mod a prime
// p = 1 (mod exp G), common eigenvectors give central characters, degrees
// come from the norm relation and values are lifted to root-of-unity
// multiplicities by a discrete Fourier inversion over F_p.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "codeg/cyclotomic.hpp"
#include "codeg/error.hpp"
#include "codeg/exact_arith.hpp"
#include "codeg/perm_group.hpp"

namespace codeg {

struct CharRow {
  std::uint64_t degree = 1;
  std::vector<CyclotomicValue> values;  // one per class
  std::vector<std::size_t> kernel_classes;
};

struct CharTable {
  std::string label;
  FactoredInt order;
  ClassData classes;
  std::vector<CharRow> rows;
  std::uint64_t prime = 0;  // modulus used by the oracle, 0 if not computed

  std::uint64_t order_value() const { return order.value(); }
  std::vector<std::uint64_t> degrees() const {
    std::vector<std::uint64_t> d;
    for (const auto& r : rows) d.push_back(r.degree);
    std::sort(d.begin(), d.end());
    return d;
  }
};

struct DixonOptions {
  std::uint64_t seed = 1;
  std::size_t max_classes = 30;
  std::size_t max_attempts = 100;
};

namespace dixon_detail {

using Vec = std::vector<std::uint64_t>;
using Mat = std::vector<Vec>;

struct Field {
  std::uint64_t p;
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % p; }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + p - b) % p; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return a * b % p; }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const { return detail::powmod(a, e, p); }
  std::uint64_t inv(std::uint64_t a) const {
    if (a % p == 0) fail(ErrorKind::OracleFailure, "inverse of zero in F_p");
    return pow(a, p - 2);
  }
};

/// Characteristic polynomial (ascending, monic) via Hessenberg reduction.
inline Vec charpoly(Mat h, const Field& F) {
  const std::size_t n = h.size();
  for (std::size_t c = 0; c + 2 < n; ++c) {
    std::size_t piv = c + 1;
    while (piv < n && h[piv][c] == 0) ++piv;
    if (piv == n) continue;
    if (piv != c + 1) {
      std::swap(h[piv], h[c + 1]);
      for (std::size_t r = 0; r < n; ++r) std::swap(h[r][piv], h[r][c + 1]);
    }
    const std::uint64_t inv = F.inv(h[c + 1][c]);
    for (std::size_t k = c + 2; k < n; ++k) {
      if (h[k][c] == 0) continue;
      std::uint64_t u = F.mul(h[k][c], inv);
      for (std::size_t j = 0; j < n; ++j) h[k][j] = F.sub(h[k][j], F.mul(u, h[c + 1][j]));
      for (std::size_t r = 0; r < n; ++r) h[r][c + 1] = F.add(h[r][c + 1], F.mul(u, h[r][k]));
    }
  }
  std::vector<Vec> P(n + 1);
  P[0] = {1};
  for (std::size_t m = 1; m <= n; ++m) {
    Vec cur(m + 1, 0);
    // (x - h[m-1][m-1]) * P[m-1]
    for (std::size_t i = 0; i < P[m - 1].size(); ++i) {
      cur[i + 1] = F.add(cur[i + 1], P[m - 1][i]);
      cur[i] = F.sub(cur[i], F.mul(h[m - 1][m - 1], P[m - 1][i]));
    }
    std::uint64_t t = 1;
    for (std::size_t i = 1; i < m; ++i) {
      t = F.mul(t, h[m - i][m - i - 1]);
      std::uint64_t coef = F.mul(t, h[m - i - 1][m - 1]);
      for (std::size_t k = 0; k < P[m - i - 1].size(); ++k) cur[k] = F.sub(cur[k], F.mul(coef, P[m - i - 1][k]));
    }
    P[m] = std::move(cur);
  }
  return P[n];
}

/// Basis (rows) of the nullspace of a.
inline Mat nullspace(Mat a, const Field& F) {
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::vector<std::size_t> pivcol;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    std::uint64_t inv = F.inv(a[r][c]);
    for (auto& v : a[r]) v = F.mul(v, inv);
    for (std::size_t k = 0; k < rows; ++k) {
      if (k == r || a[k][c] == 0) continue;
      std::uint64_t u = a[k][c];
      for (std::size_t j = 0; j < cols; ++j) a[k][j] = F.sub(a[k][j], F.mul(u, a[r][j]));
    }
    pivcol.push_back(c);
    ++r;
  }
  Mat basis;
  std::vector<bool> is_piv(cols, false);
  for (auto c : pivcol) is_piv[c] = true;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_piv[f]) continue;
    Vec v(cols, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < pivcol.size(); ++i) v[pivcol[i]] = F.sub(0, a[i][f]);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Row-reduced basis with its pivot columns.
struct Space {
  Mat basis;
  std::vector<std::size_t> pivots;
};

inline Space make_space(Mat vecs, const Field& F) {
  Space s;
  const std::size_t cols = vecs.empty() ? 0 : vecs[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < vecs.size(); ++c) {
    std::size_t piv = r;
    while (piv < vecs.size() && vecs[piv][c] == 0) ++piv;
    if (piv == vecs.size()) continue;
    std::swap(vecs[piv], vecs[r]);
    std::uint64_t inv = F.inv(vecs[r][c]);
    for (auto& v : vecs[r]) v = F.mul(v, inv);
    for (std::size_t k = 0; k < vecs.size(); ++k) {
      if (k == r || vecs[k][c] == 0) continue;
      std::uint64_t u = vecs[k][c];
      for (std::size_t j = 0; j < cols; ++j) vecs[k][j] = F.sub(vecs[k][j], F.mul(u, vecs[r][j]));
    }
    s.pivots.push_back(c);
    ++r;
  }
  vecs.resize(r);
  s.basis = std::move(vecs);
  return s;
}

/// Splits an invariant space into eigenspaces of m. Returns nullopt when m
/// does not act diagonalizably on it (cannot happen over a good prime).
inline std::optional<std::vector<Space>> split(const Space& s, const Mat& m, const Field& F) {
  const std::size_t d = s.basis.size(), n = m.size();
  // A[k][i] = (m b_i)[pivot_k]
  Mat A(d, Vec(d, 0));
  for (std::size_t i = 0; i < d; ++i) {
    Vec mb(n, 0);
    for (std::size_t r = 0; r < n; ++r) {
      std::uint64_t acc = 0;
      for (std::size_t c = 0; c < n; ++c)
        if (m[r][c] && s.basis[i][c]) acc = F.add(acc, F.mul(m[r][c], s.basis[i][c]));
      mb[r] = acc;
    }
    for (std::size_t k = 0; k < d; ++k) A[k][i] = mb[s.pivots[k]];
    // invariance check: mb must equal sum_k mb[pivot_k] b_k
    for (std::size_t c = 0; c < n; ++c) {
      std::uint64_t acc = 0;
      for (std::size_t k = 0; k < d; ++k) acc = F.add(acc, F.mul(A[k][i], s.basis[k][c]));
      if (acc != mb[c]) return std::nullopt;
    }
  }
  Vec cp = charpoly(A, F);
  std::vector<Space> out;
  std::size_t total = 0;
  for (std::uint64_t lambda = 0; lambda < F.p && total < d; ++lambda) {
    std::uint64_t v = 0;
    for (std::size_t i = cp.size(); i-- > 0;) v = F.add(F.mul(v, lambda), cp[i]);
    if (v != 0) continue;
    Mat shifted = A;
    for (std::size_t k = 0; k < d; ++k) shifted[k][k] = F.sub(shifted[k][k], lambda);
    Mat ns = nullspace(shifted, F);
    Mat vecs;
    for (const auto& x : ns) {
      Vec w(n, 0);
      for (std::size_t i = 0; i < d; ++i)
        if (x[i])
          for (std::size_t c = 0; c < n; ++c) w[c] = F.add(w[c], F.mul(x[i], s.basis[i][c]));
      vecs.push_back(std::move(w));
    }
    total += vecs.size();
    out.push_back(make_space(std::move(vecs), F));
  }
  if (total != d) return std::nullopt;
  return out;
}

}  // namespace dixon_detail

/// Exact irreducible character table of the group, rows in canonical order
/// (trivial first, then by degree and value vectors).
inline CharTable dixon_table(const ClassStructure& cs, const DixonOptions& opt = {}) {
  using namespace dixon_detail;
  const ClassData& cd = cs.classes();
  const std::size_t r = cd.count();
  if (r > opt.max_classes)
    fail(ErrorKind::ClassCountCap, cs.group().name() + " has " + std::to_string(r) + " classes (cap " +
                                       std::to_string(opt.max_classes) + ")");
  const std::uint64_t n = cs.group().size();
  const std::uint64_t e = cd.exponent;
  std::uint64_t lower = 2 * floor_isqrt(n) + 2;
  std::uint64_t p = prime_in_progression(e, lower, 1ULL << 31);
  if (p == 0) fail(ErrorKind::Parameter, "no prime = 1 mod exponent below 2^31");
  const Field F{p};

  // mats[j][i][k] = a_{j i k} mod p
  std::vector<Mat> mats(r, Mat(r, Vec(r, 0)));
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t k = 0; k < r; ++k) mats[j][i][k] = cs.coeff(j, i, k) % p;

  Mat ident(r, Vec(r, 0));
  for (std::size_t i = 0; i < r; ++i) ident[i][i] = 1;
  std::vector<Space> spaces{make_space(ident, F)};

  auto refine = [&](const Mat& m) {
    std::vector<Space> next;
    for (const auto& s : spaces) {
      if (s.basis.size() == 1) {
        next.push_back(s);
        continue;
      }
      auto parts = split(s, m, F);
      if (!parts) fail(ErrorKind::OracleFailure, "class matrix not diagonalizable on an invariant space");
      for (auto& q : *parts) next.push_back(std::move(q));
    }
    spaces = std::move(next);
  };
  auto all_split = [&] { return std::all_of(spaces.begin(), spaces.end(), [](const Space& s) { return s.basis.size() == 1; }); };

  for (std::size_t j = 1; j < r && !all_split(); ++j) refine(mats[j]);
  std::mt19937_64 rng(opt.seed);
  for (std::size_t attempt = 0; attempt < opt.max_attempts && !all_split(); ++attempt) {
    Mat comb(r, Vec(r, 0));
    for (std::size_t j = 1; j < r; ++j) {
      std::uint64_t c = rng() % 101;
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) comb[a][b] = F.add(comb[a][b], F.mul(c, mats[j][a][b]));
    }
    refine(comb);
  }
  if (!all_split()) fail(ErrorKind::OracleFailure, "eigenspace splitting did not reach one-dimensional spaces");
  if (spaces.size() != r) fail(ErrorKind::OracleFailure, "eigenspace count differs from class count");

  // primitive e-th root in F_p
  std::uint64_t gen = 0;
  {
    auto pf = factorize(static_cast<std::int64_t>(p - 1)).primes();
    for (std::uint64_t g = 2; g < p && !gen; ++g) {
      bool ok = true;
      for (auto q : pf)
        if (F.pow(g, (p - 1) / q) == 1) {
          ok = false;
          break;
        }
      if (ok) gen = g;
    }
  }
  const std::uint64_t z_e = F.pow(gen, (p - 1) / e);
  const std::uint64_t sqrt_n = floor_isqrt(n);

  CharTable t;
  t.label = cs.group().name();
  t.order = factorize(static_cast<std::int64_t>(n));
  t.classes = cd;
  t.prime = p;
  for (const auto& s : spaces) {
    Vec w = s.basis[0];
    if (w[0] == 0) fail(ErrorKind::OracleFailure, "central character vanishes on the identity class");
    std::uint64_t inv0 = F.inv(w[0]);
    for (auto& v : w) v = F.mul(v, inv0);
    std::uint64_t S = 0;
    for (std::size_t k = 0; k < r; ++k)
      S = F.add(S, F.mul(F.mul(w[k], w[cd.inverse_class[k]]), F.inv(cd.sizes[k] % p)));
    std::uint64_t target = F.mul(n % p, F.inv(S));
    std::uint64_t d = 0;
    for (std::uint64_t c = 1; c <= sqrt_n; ++c)
      if (c * c % p == target) {
        d = c;
        break;
      }
    if (d == 0 || n % d) fail(ErrorKind::OracleFailure, "no admissible degree for a central character");
    Vec val(r);
    for (std::size_t k = 0; k < r; ++k) val[k] = F.mul(F.mul(w[k], d % p), F.inv(cd.sizes[k] % p));
    CharRow row;
    row.degree = d;
    for (std::size_t k = 0; k < r; ++k) {
      const std::uint32_t o = cd.orders[k];
      const std::uint64_t z = F.pow(z_e, e / o);
      const std::uint64_t zinv = F.inv(z);
      const std::uint64_t oinv = F.inv(o % p);
      CyclotomicValue cv;
      cv.e = o;
      cv.m.assign(o, 0);
      std::uint64_t total = 0;
      for (std::uint32_t kk = 0; kk < o; ++kk) {
        std::uint64_t acc = 0, step = F.pow(zinv, kk), zp = 1;
        for (std::uint32_t l = 0; l < o; ++l) {
          acc = F.add(acc, F.mul(val[cd.power_class[k][l]], zp));
          zp = F.mul(zp, step);
        }
        std::uint64_t mk = F.mul(acc, oinv);
        if (mk > d) fail(ErrorKind::OracleFailure, "multiplicity lift out of range");
        cv.m[kk] = mk;
        total += mk;
      }
      if (total != d) fail(ErrorKind::OracleFailure, "multiplicities do not sum to the degree");
      if (cv.m[0] == d) row.kernel_classes.push_back(k);
      row.values.push_back(std::move(cv));
    }
    t.rows.push_back(std::move(row));
  }
  std::sort(t.rows.begin(), t.rows.end(), [](const CharRow& a, const CharRow& b) {
    bool ta = a.kernel_classes.size() == a.values.size(), tb = b.kernel_classes.size() == b.values.size();
    if (ta != tb) return ta;
    if (a.degree != b.degree) return a.degree < b.degree;
    return a.values < b.values;
  });
  return t;
}

inline CharTable dixon_table(const PermGroup& g, const DixonOptions& opt = {}) {
  ClassStructure cs(g);
  return dixon_table(cs, opt);
}

inline FactoredInt kernel_order(const CharTable& t, std::size_t row) {
  if (row >= t.rows.size()) fail(ErrorKind::Domain, "row index out of range");
  std::uint64_t s = 0;
  for (auto k : t.rows[row].kernel_classes) s += t.classes.sizes[k];
  return factorize(static_cast<std::int64_t>(s));
}

struct TableReport {
  bool pass = true;
  std::string failure;  // first violated relation
};

/// Exact checks: sum of squared degrees, trivial first row, value
/// consistency, first and second orthogonality in Z[zeta_e].
inline TableReport verify_table(const CharTable& t) {
  TableReport rep;
  auto bad = [&](std::string why) {
    rep.pass = false;
    rep.failure = std::move(why);
    return rep;
  };
  const std::size_t r = t.classes.count();
  const u128 n = t.order.value128();
  if (t.rows.size() != r) return bad("row count " + std::to_string(t.rows.size()) + " != class count " + std::to_string(r));
  u128 sq = 0;
  for (const auto& row : t.rows) sq += static_cast<u128>(row.degree) * row.degree;
  if (sq != n) return bad("sum of squared degrees " + to_string(sq) + " != |G| " + to_string(n));
  for (std::size_t i = 0; i < r; ++i) {
    const auto& row = t.rows[i];
    if (row.values.size() != r) return bad("row " + std::to_string(i) + " has wrong length");
    for (std::size_t k = 0; k < r; ++k) {
      const auto& v = row.values[k];
      if (v.e != t.classes.orders[k] || v.m.size() != v.e)
        return bad("row " + std::to_string(i) + " class " + std::to_string(k) + ": value order mismatch");
      if (v.degree_sum() != row.degree)
        return bad("row " + std::to_string(i) + " class " + std::to_string(k) + ": multiplicities do not sum to degree");
    }
    if (row.values[0].m[0] != row.degree) return bad("row " + std::to_string(i) + ": value at identity != degree");
  }
  for (std::size_t k = 0; k < r; ++k)
    if (t.rows[0].values[k].m[0] != 1) return bad("first row is not the trivial character");
  const std::uint32_t E = static_cast<std::uint32_t>(t.classes.exponent);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i; j < r; ++j) {
      CycloAccumulator acc(E);
      for (std::size_t k = 0; k < r; ++k)
        acc.add_product(t.rows[i].values[k], t.rows[j].values[k], static_cast<std::int64_t>(t.classes.sizes[k]), true);
      auto v = acc.as_integer();
      std::int64_t want = i == j ? static_cast<std::int64_t>(n) : 0;
      if (!v || *v != want)
        return bad("first orthogonality fails for rows " + std::to_string(i) + "," + std::to_string(j));
    }
  }
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = a; b < r; ++b) {
      CycloAccumulator acc(E);
      for (std::size_t i = 0; i < r; ++i) acc.add_product(t.rows[i].values[a], t.rows[i].values[b], 1, true);
      auto v = acc.as_integer();
      std::int64_t want = a == b ? static_cast<std::int64_t>(n / t.classes.sizes[a]) : 0;
      if (!v || *v != want)
        return bad("second orthogonality fails for classes " + std::to_string(a) + "," + std::to_string(b));
    }
  }
  return rep;
}

}  // namespace codeg
