#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "codeg/catalog.hpp"
#include "codeg/reduction.hpp"

using namespace codeg;

namespace {

const Catalog& cat() {
  static Catalog c = load_catalog(CODEG_TEST_DATA);
  return c;
}

bool prime_power(std::int64_t q, std::int64_t* p = nullptr) {
  if (q < 2) return false;
  std::int64_t d = 2;
  while (q % d) ++d;
  std::int64_t x = q;
  while (x % d == 0) x /= d;
  if (p) *p = d;
  return x == 1;
}

u128 upow(u128 b, int e) {
  u128 r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// |L_{n+1}(q)|, or 2^100 once that is certainly exceeded
u128 psl_order(int n, std::int64_t q) {
  const u128 cap = u128{1} << 100;
  if ((n * (n + 1) / 2 + n * (n + 3) / 2) * std::log2(static_cast<double>(q)) > 90) return cap;
  u128 r = upow(static_cast<u128>(q), n * (n + 1) / 2);
  for (int i = 1; i <= n; ++i) r *= upow(static_cast<u128>(q), i + 1) - 1;
  return r / static_cast<u128>(std::gcd<std::int64_t>(n + 1, q - 1));
}

std::vector<std::int64_t> qs(const SqrtGrid& g, const std::string& var) {
  std::vector<std::int64_t> v;
  for (const auto& b : g.grid()) v.push_back(b.at(var));
  return v;
}

}  // namespace

TEST(Reduction, PSL2EvenAtU33Bound) {
  auto g = sqrt_bound_grid(cat().family("PSL2_even"), u128{1008} * 1008);
  EXPECT_EQ(qs(g, "q"), (std::vector<std::int64_t>{4, 8, 16, 32, 64}));
  ASSERT_EQ(g.scans.size(), 1U);
  EXPECT_EQ(g.scans[0].stop, 128);
  for (const auto& c : g.scans[0].monotone) EXPECT_TRUE(recheck_certificate(c));
}

TEST(Reduction, SuzukiAtU42Bound) {
  auto g = sqrt_bound_grid(cat().family("Suzuki"), u128{5184} * 5184);
  EXPECT_EQ(qs(g, "q2"), (std::vector<std::int64_t>{8}));
}

TEST(Reduction, PSL2OddMatchesBruteForce) {
  for (u128 m : {u128{1008}, u128{5184}}) {
    const u128 bound = m * m;
    auto g = sqrt_bound_grid(cat().family("PSL2_odd"), bound);
    std::vector<std::int64_t> brute;
    std::int64_t p = 0;
    for (std::int64_t q = 7; q < 200000; ++q)
      if (prime_power(q, &p) && p != 2 && static_cast<u128>(q) * (static_cast<u128>(q) * q - 1) / 2 <= bound)
        brute.push_back(q);
    EXPECT_EQ(qs(g, "q"), brute);
  }
}

TEST(Reduction, PSLnMatchesBruteForce) {
  const u128 bound = u128{5184} * 5184;
  auto g = sqrt_bound_grid(cat().family("PSL_n"), bound);
  ASSERT_TRUE(g.n_bound.has_value());
  EXPECT_TRUE(recheck_certificate(g.n_bound->cert));
  std::vector<std::pair<std::int64_t, std::int64_t>> brute, got;
  for (int n = 2; n <= 40; ++n)
    for (std::int64_t q = 2; q < 20000; ++q)
      if (prime_power(q) && psl_order(n, q) <= bound) brute.emplace_back(n, q);
  for (const auto& b : g.grid()) got.emplace_back(b.at("n"), b.at("q"));
  EXPECT_EQ(got, brute);
}

TEST(Reduction, SymplecticSteinbergRange) {
  auto g = sqrt_bound_grid(cat().family("BC_n"), u128{5184} * 5184);
  std::vector<std::pair<std::int64_t, std::int64_t>> n3;
  for (const auto& b : g.grid())
    if (b.at("n") >= 3) n3.emplace_back(b.at("n"), b.at("q"));
  EXPECT_EQ(n3, (std::vector<std::pair<std::int64_t, std::int64_t>>{{3, 2}}));
  // excluded (n, q) = (2, 2) is recorded but not on the grid
  bool saw_excluded = false;
  for (const auto& p : g.points)
    if (p.kind == ScannedPoint::Kind::Excluded) saw_excluded = p.params.at("n") == 2 && p.params.at("q") == 2;
  EXPECT_TRUE(saw_excluded);
}

TEST(Reduction, GridOrdersWithinBound) {
  const u128 bound = u128{5184} * 5184;
  for (const auto& [name, f] : cat().families) {
    if (f.kind != "formula") continue;
    auto g = sqrt_bound_grid(f, bound);
    for (const auto& p : g.points) {
      if (p.kind == ScannedPoint::Kind::Grid) {
        EXPECT_LE(p.order.value128(), bound) << name;
      } else if (p.kind == ScannedPoint::Kind::Pruned) {
        EXPECT_FALSE(p.order.try_value128() && *p.order.try_value128() <= bound);
      }
    }
    for (const auto& s : g.scans) EXPECT_TRUE(exceeds(s.at_stop, bound)) << name;
  }
}

TEST(Reduction, NonMonotoneFactorRejected) {
  // q^2 - 10q + 26 has no real root but decreases up to q = 5
  auto f = parse_family("name = Bad\nparam q = prime_power\norder = q^2*(q^2-10*q+26)\n");
  try {
    sqrt_bound_grid(f, 30);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Reduction);
  }
  EXPECT_NO_THROW(sqrt_bound_grid(f, 1'000'000));
}

TEST(Reduction, LowerBoundArithmetic) {
  auto form = RationalExpr::parse("q*(q^2-1)/gcd(2,q-1)").factor_form({}, "q");
  auto lb = lower_bound_at(form, 9);
  ASSERT_TRUE(lb.has_value());
  EXPECT_EQ(static_cast<std::uint64_t>(lb->num), 9U * 80U);
  EXPECT_TRUE(exceeds(*lb, 359));
  EXPECT_FALSE(exceeds(*lb, 360));
  EXPECT_EQ(bits_above(1), 1);
  EXPECT_EQ(bits_above(1024), 11);
}
