#include <gtest/gtest.h>

#include "codeg/expr.hpp"

using namespace codeg;

namespace {

i128 ipow(i128 b, int e) {
  i128 r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// plain evaluation of a factor form, skipping gcd atoms
i128 eval_form(const FactorForm& f, i128 q) {
  i128 num = ipow(q, static_cast<int>(std::max<std::int64_t>(f.monomial, 0)));
  i128 den = ipow(q, static_cast<int>(std::max<std::int64_t>(-f.monomial, 0)));
  for (const auto& p : f.num) num *= p.eval(q);
  for (const auto& p : f.den) den *= p.eval(q);
  EXPECT_EQ(num % den, 0);
  return num / den;
}

}  // namespace

TEST(Expr, EvaluatesOrderFormulas) {
  auto psl2 = RationalExpr::parse("q*(q^2-1)/gcd(2,q-1)");
  EXPECT_EQ(psl2.eval({{"q", 7}}).value(), 168U);
  EXPECT_EQ(psl2.eval({{"q", 8}}).value(), 504U);
  auto psu3 = RationalExpr::parse("q^3*(q^2-1)*(q^3+1)/gcd(3,q+1)");
  EXPECT_EQ(psu3.eval({{"q", 3}}).value(), 6048U);
  auto psp4 = RationalExpr::parse("q^4*(q^2-1)*(q^4-1)/gcd(2,q-1)");
  EXPECT_EQ(psp4.eval({{"q", 3}}).value(), 25920U);
}

TEST(Expr, ProductOverIndex) {
  // |SL(n,q)| = q^(n(n-1)/2) prod_{i=2..n} (q^i - 1)
  auto e = RationalExpr::parse("q^(n*(n-1)/2)*prod(i,2,n,q^i-1)");
  EXPECT_EQ(e.eval({{"q", 2}, {"n", 3}}).value(), 168U);
  EXPECT_EQ(e.eval({{"q", 3}, {"n", 2}}).value(), 24U);
  auto big = RationalExpr::parse("q^36*prod(i,2,9,q^i-1)");
  auto v = big.eval({{"q", 5}});
  EXPECT_GT(v.log2(), 64.0L);
  EXPECT_EQ(v.exponent(5), 36U);
}

TEST(Expr, EpsAndSqrt) {
  auto e = RationalExpr::parse("(q+eps(q))/2");
  EXPECT_EQ(e.eval_int({{"q", 5}}), 3);
  EXPECT_EQ(e.eval_int({{"q", 7}}), 3);
  EXPECT_THROW(e.eval_int({{"q", 4}}), Error);
  auto s = RationalExpr::parse("sqrt(2*q)");
  EXPECT_EQ(s.eval_int({{"q", 8}}), 4);
  EXPECT_THROW(s.eval_int({{"q", 4}}), Error);
}

TEST(Expr, IntegralityErrors) {
  auto e = RationalExpr::parse("(q+1)/3");
  EXPECT_EQ(e.eval({{"q", 5}}).value(), 2U);
  try {
    e.eval({{"q", 4}});
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::FormulaIntegrality);
  }
  EXPECT_THROW(RationalExpr::parse("q/0").eval_int({{"q", 1}}), Error);
  EXPECT_THROW(RationalExpr::parse("q").eval({}), Error);
}

TEST(Expr, ParseErrors) {
  for (const char* bad : {"q+", "(q", "foo(q)", "gcd(q)", "q $ 2", "prod(2,1,3,q)"}) {
    try {
      RationalExpr::parse(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::Parse) << bad;
    }
  }
}

TEST(Expr, Symbols) {
  auto e = RationalExpr::parse("q^(n*(n-1)/2)*prod(i,2,n,q^i-1)");
  EXPECT_EQ(e.symbols(), (std::set<std::string>{"n", "q"}));
}

TEST(Expr, FactorFormReconstructsValue) {
  const char* src[] = {"q^3*(q^2-1)*(q^3+1)", "q^6*(q^2-1)*(q^6-1)", "q^2*(q^2+1)*(q-1)", "q*(q+1)/(q-1)^0",
                       "q^(n*(n-1)/2)*prod(i,2,n,q^i-1)"};
  for (const char* s : src) {
    auto e = RationalExpr::parse(s);
    for (std::int64_t n = 2; n <= 4; ++n) {
      Bindings env{{"n", n}};
      auto f = e.factor_form(env, "q");
      for (std::int64_t q = 2; q <= 13; ++q) {
        Bindings at = env;
        at["q"] = q;
        EXPECT_EQ(eval_form(f, q), static_cast<i128>(e.eval_int(at))) << s << " q=" << q;
      }
    }
  }
}

TEST(Expr, FactorFormRejectsVariableExponent) {
  auto e = RationalExpr::parse("2^q");
  EXPECT_THROW(e.factor_form({}, "q"), Error);
}

TEST(Expr, ToPolyMatchesEval) {
  auto e = RationalExpr::parse("q*(q^2-1)*(q+3)/2");
  auto [p, d] = e.to_poly({}, "q");
  for (std::int64_t q = -5; q <= 20; ++q) EXPECT_EQ(p.eval(q), static_cast<i128>(e.eval_int({{"q", q}})) * d);
}
