#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "codeg/exact_arith.hpp"

using namespace codeg;

namespace {

// trial division, independent of the Pollard path
std::map<std::uint64_t, std::uint32_t> trial(std::uint64_t n) {
  std::map<std::uint64_t, std::uint32_t> f;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    while (n % d == 0) {
      ++f[d];
      n /= d;
    }
  if (n > 1) ++f[n];
  return f;
}

std::vector<bool> sieve(std::size_t n) {
  std::vector<bool> p(n + 1, true);
  p[0] = p[1] = false;
  for (std::size_t i = 2; i * i <= n; ++i)
    if (p[i])
      for (std::size_t j = i * i; j <= n; j += i) p[j] = false;
  return p;
}

}  // namespace

TEST(Checked, OverflowThrows) {
  EXPECT_THROW(checked_mul<std::int64_t>(INT64_MAX, 2), Error);
  EXPECT_THROW(checked_add<std::int64_t>(INT64_MAX, 1), Error);
  EXPECT_THROW(checked_sub<std::int64_t>(INT64_MIN, 1), Error);
  EXPECT_EQ(checked_pow<std::int64_t>(3, 20), 3486784401LL);
  try {
    checked_mul<std::int64_t>(INT64_MAX, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Overflow);
  }
}

TEST(Parse, Integers) {
  EXPECT_EQ(parse_u64("18446744073709551615"), UINT64_MAX);
  EXPECT_THROW(parse_u64("18446744073709551616"), Error);
  EXPECT_THROW(parse_u64("12a"), Error);
  EXPECT_EQ(parse_i64("-42"), -42);
  EXPECT_EQ(to_string(parse_u128("340282366920938463463374607431768211455")), "340282366920938463463374607431768211455");
  EXPECT_EQ(parse_i128("-170141183460469231731687303715884105728"), -static_cast<i128>(~u128{0} >> 1) - 1);
  EXPECT_EQ(to_string(parse_i128("-17")), "-17");
}

TEST(Factorize, GoldenOrders) {
  EXPECT_EQ(factorize(6048).dotted(), "2^5.3^3.7");
  EXPECT_EQ(factorize(25920).dotted(), "2^6.3^4.5");
  EXPECT_EQ(factorize(1).dotted(), "1");
  EXPECT_EQ(factorize(1).decimal(), "1");
  EXPECT_THROW(factorize(0), Error);
}

TEST(Factorize, MatchesTrialDivision) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 400; ++i) {
    std::uint64_t n = rng() % 4'000'000'000ULL + 1;
    EXPECT_EQ(factorize(static_cast<std::int64_t>(n)).factors(), trial(n)) << n;
  }
  // products of two large primes exercise the rho path
  std::uint64_t p = 1000000007, q = 998244353;
  auto f = factorize(static_cast<std::int64_t>(p * q));
  EXPECT_EQ(f.exponent(p), 1U);
  EXPECT_EQ(f.exponent(q), 1U);
}

TEST(Primes, AgreeWithSieve) {
  auto s = sieve(20000);
  for (std::uint64_t n = 0; n <= 20000; ++n) EXPECT_EQ(is_prime(n), s[n]) << n;
  EXPECT_TRUE(is_prime(2305843009213693951ULL));  // 2^61-1
  EXPECT_FALSE(is_prime(3215031751ULL));          // strong pseudoprime to 2,3,5,7
}

TEST(FactoredInt, ArithmeticProperties) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    std::int64_t a = static_cast<std::int64_t>(rng() % 1'000'000 + 1), b = static_cast<std::int64_t>(rng() % 1'000'000 + 1);
    FactoredInt fa = factorize(a), fb = factorize(b);
    FactoredInt prod = fi_mul(fa, fb);
    EXPECT_EQ(prod.value(), static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
    EXPECT_EQ(fi_div_exact(prod, fb), fa);
    EXPECT_TRUE(fi_divides(prod, fa));
    EXPECT_EQ(fi_gcd(fa, fb).value(), std::gcd(a, b));
    EXPECT_EQ(fi_divides(fa, fb), a % b == 0);
    EXPECT_EQ(fa < fb, a < b);
    EXPECT_EQ(parse_factored(fa.dotted()), fa);
    if (a % b != 0) {
      try {
        fi_div_exact(fa, fb);
        ADD_FAILURE();
      } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ExactDivision);
      }
    }
  }
}

TEST(FactoredInt, LargeValues) {
  FactoredInt big = fi_pow(factorize(2), 200);
  EXPECT_FALSE(big.try_value128().has_value());
  EXPECT_THROW(big.value(), Error);
  EXPECT_EQ(big.dotted(), "2^200");
  EXPECT_NEAR(big.log2(), 200.0, 1e-9);
}

TEST(Isqrt, ExactAndFloor) {
  EXPECT_EQ(exact_isqrt(1016064), std::optional<std::uint64_t>(1008));
  EXPECT_FALSE(exact_isqrt(1016065).has_value());
  for (std::uint64_t n = 0; n < 5000; ++n) {
    auto r = floor_isqrt(n);
    EXPECT_LE(r * r, n);
    EXPECT_GT((r + 1) * (r + 1), n);
  }
}

TEST(PrimePower, Detection) {
  EXPECT_EQ(is_prime_power(64), (std::optional<std::pair<std::uint64_t, std::uint32_t>>{{2, 6}}));
  EXPECT_EQ(is_prime_power(121), (std::optional<std::pair<std::uint64_t, std::uint32_t>>{{11, 2}}));
  EXPECT_FALSE(is_prime_power(12).has_value());
  EXPECT_THROW(is_prime_power(1), Error);
}

TEST(IntPoly, EvalAndDifference) {
  IntPoly q = IntPoly::x();
  IntPoly p = q.pow(3) - q.scaled(4) + IntPoly::constant(7);
  for (i128 x = -20; x <= 20; ++x) {
    EXPECT_EQ(p.eval(x), x * x * x - 4 * x + 7);
    EXPECT_EQ(p.forward_difference().eval(x), p.eval(x + 1) - p.eval(x));
    EXPECT_EQ(p.shifted_by_one().eval(x), p.eval(x + 1));
  }
  EXPECT_EQ(p.to_string('q'), "q^3 - 4*q + 7");
  EXPECT_EQ((p - p).degree(), -1);
}

TEST(Positivity, CertificateHoldsAtRandomPoints) {
  std::mt19937_64 rng(3);
  int built = 0;
  for (int trial = 0; trial < 200 && built < 40; ++trial) {
    std::vector<std::int64_t> c(static_cast<std::size_t>(rng() % 4 + 2));
    for (auto& x : c) x = static_cast<std::int64_t>(rng() % 41) - 20;
    c.back() = static_cast<std::int64_t>(rng() % 5 + 1);
    IntPoly p(c);
    std::int64_t from = static_cast<std::int64_t>(rng() % 10);
    PositivityCertificate cert;
    try {
      cert = positivity_beyond(p, from);
    } catch (const Error& e) {
      ASSERT_EQ(e.kind(), ErrorKind::PositivityFails);
      // failure must be genuine: some q >= from with p(q) <= 0
      bool found = false;
      for (std::int64_t q = from; q <= cauchy_bound(p) && !found; ++q) found = p.eval(q) <= 0;
      EXPECT_TRUE(found) << p.to_string('q');
      continue;
    }
    ++built;
    EXPECT_TRUE(recheck_certificate(cert));
    for (int k = 0; k < 100; ++k) {
      std::int64_t q = from + static_cast<std::int64_t>(rng() % 1'000'000);
      EXPECT_GT(p.eval(q), 0) << p.to_string('q') << " at " << q;
    }
  }
  EXPECT_GT(built, 10);
}

TEST(Positivity, RejectsRootsAndTampering) {
  IntPoly p({-12, 1});  // q - 12
  EXPECT_THROW(positivity_beyond(p, 5), Error);
  auto c = positivity_beyond(p, 13);
  EXPECT_TRUE(recheck_certificate(c));
  c.from = 12;
  EXPECT_FALSE(recheck_certificate(c));
  auto nv = nonvanishing_beyond(IntPoly({-30, 1, 1}), 6);  // (q-5)(q+6)
  EXPECT_EQ(nv.kind, CertKind::Nonvanishing);
  EXPECT_THROW(nonvanishing_beyond(IntPoly({-30, 1, 1}), 5), Error);
}

TEST(Positivity, CauchyBoundExceedsRoots) {
  // roots 3, 7, 11 all below the bound
  IntPoly p = IntPoly({-3, 1}) * IntPoly({-7, 1}) * IntPoly({-11, 1});
  EXPECT_GT(cauchy_bound(p), 11);
}

TEST(PrimeInProgression, Smallest) {
  std::uint64_t p = prime_in_progression(12, 200, 1'000'000);
  EXPECT_EQ(p % 12, 1U);
  EXPECT_GT(p, 200U);
  EXPECT_TRUE(is_prime(p));
  for (std::uint64_t q = 201; q < p; ++q) EXPECT_FALSE(q % 12 == 1 && is_prime(q));
}
