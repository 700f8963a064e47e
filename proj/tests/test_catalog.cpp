#include <gtest/gtest.h>

#include <cstdlib>

#include "codeg/catalog.hpp"

using namespace codeg;

namespace {

const std::string kData = CODEG_TEST_DATA;

const Catalog& cat() {
  static Catalog c = load_catalog(kData);
  return c;
}

std::vector<std::uint64_t> cods(const FamilyEvaluation& ev) {
  std::set<std::uint64_t> s;
  for (const auto& v : ev.values) s.insert(v.cod.value());
  return {s.begin(), s.end()};
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Usage;  // sentinel: nothing thrown
}

}  // namespace

TEST(Catalog, LoadsEverything) {
  EXPECT_GE(cat().records.size(), 40U);
  EXPECT_GE(cat().families.size(), 19U);
  EXPECT_GE(cat().groups.size(), 19U);
  EXPECT_TRUE(cat().has_family("Suzuki"));
  EXPECT_THROW(cat().record("nope"), Error);
}

TEST(Catalog, SuzukiAtEight) {
  auto ev = eval_family(cat().family("Suzuki"), {{"q2", 8}}, "full");
  EXPECT_EQ(ev.order.value(), 29120U);
  // |Sz(8)| = 64*65*7, degrees 14, 35, 64, 65, 91
  EXPECT_EQ(cods(ev), (std::vector<std::uint64_t>{1, 320, 448, 455, 832, 2080}));
  DegreeData sz = cat().record("Sz_8");
  EXPECT_EQ(cod_from_record(sz).values(), cods(ev));
}

TEST(Catalog, SuzukiParameterRelation) {
  const auto& f = cat().family("Suzuki");
  for (std::int64_t q2 : {8, 32, 128, 512, 2048}) {
    Bindings env = f.bind({{"q2", q2}});
    EXPECT_EQ(env.at("r") * env.at("r"), 2 * q2);
  }
  EXPECT_FALSE(f.prime_power_param().admits(16));
  EXPECT_FALSE(f.prime_power_param().admits(27));
}

TEST(Catalog, G2AtThree) {
  auto ev = eval_family(cat().family("G2"), {{"q", 3}});
  // |G2(3)| = 3^6 (3^6-1)(3^2-1) = 4245696, cuspidal degree 3*16*13/6 = 104
  EXPECT_EQ(ev.order.value(), 4245696U);
  ASSERT_EQ(ev.values.size(), 1U);
  EXPECT_EQ(ev.values[0].cod.value(), 4245696U / 104);
  EXPECT_EQ(ev.values[0].degree->value(), 104U);
}

TEST(Catalog, FormulaFamiliesIntegralOverGrid) {
  for (const auto& [name, f] : cat().families) {
    if (f.kind != "formula") continue;
    const ParamSpec& qp = f.prime_power_param();
    const ParamSpec* np = f.integer_param();
    int evaluated = 0;
    for (std::int64_t n = np ? np->min : 0; n <= (np ? np->min + 2 : 0); ++n)
      for (std::int64_t q = 2; q <= 130; ++q) {
        if (!qp.admits(q)) continue;
        Bindings given{{qp.name, q}};
        if (np) given[np->name] = n;
        Bindings env = f.bind(given);
        if (f.excluded(env)) {
          EXPECT_EQ(kind_of([&] { eval_family(f, given); }), ErrorKind::Parameter) << name;
          continue;
        }
        try {
          for (const auto& v : f.variants()) {
            auto ev = eval_family(f, given, v);
            for (const auto& x : ev.values) {
              if (x.degree) {
                EXPECT_EQ(fi_mul(x.cod, *x.degree), ev.order) << name;
              }
            }
          }
          auto ev = eval_family(f, given);
          EXPECT_GE(ev.values.size(), 1U) << name;
          ++evaluated;
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::Overflow) continue;  // large (n, q) corners
          ADD_FAILURE() << name << " at " << RationalExpr::describe(given) << ": " << e.what();
        }
      }
    EXPECT_GT(evaluated, 0) << name;
  }
}

TEST(Catalog, ExcludedPointsRaise) {
  EXPECT_EQ(kind_of([] { eval_family(cat().family("PSL2_even"), {{"q", 2}}, "validated"); }), ErrorKind::Parameter);
  EXPECT_EQ(kind_of([] { eval_family(cat().family("Suzuki"), {{"q2", 2}}, "full"); }), ErrorKind::Parameter);
  EXPECT_EQ(kind_of([] { eval_family(cat().family("PSL2_even"), {{"q", 9}}, "validated"); }), ErrorKind::Parameter);
  EXPECT_EQ(kind_of([] { eval_family(cat().family("PSL2_even"), {{"r", 4}}); }), ErrorKind::Parameter);
}

TEST(Catalog, MatchPoints) {
  const auto& bc = cat().family("BC_n");
  EXPECT_EQ(bc.match_target(bc.bind({{"q", 3}, {"n", 2}})), std::optional<std::string>("U4_2"));
  EXPECT_EQ(bc.match_target(bc.bind({{"q", 5}, {"n", 2}})), std::nullopt);
  // |S4(3)| = 25920
  EXPECT_EQ(eval_family(bc, {{"q", 3}, {"n", 2}}).order.value(), 25920U);
}

TEST(Catalog, DataDirPrecedence) {
  ::setenv("CODEG_DATA", "/from/env", 1);
  EXPECT_EQ(resolve_data_dir(std::string("/from/flag")), "/from/flag");
  EXPECT_EQ(resolve_data_dir(std::nullopt), "/from/env");
  ::unsetenv("CODEG_DATA");
  EXPECT_EQ(resolve_data_dir(std::nullopt), "data");
  EXPECT_THROW(load_catalog("/nonexistent/dir"), Error);
}

TEST(Catalog, MalformedRecordsRejected) {
  const std::string ok = "name = X\norder = 6\ndegrees = 1, 1, 2\n";
  EXPECT_NO_THROW(parse_record(ok));
  EXPECT_EQ(kind_of([] { parse_record("name = X\norder = 7\ndegrees = 1, 1, 2\n"); }), ErrorKind::Data);
  EXPECT_THROW(parse_record("name = X\ndegrees = 1\n"), Error);
  EXPECT_THROW(parse_record("name = X\norder = 6\ndegrees = 1, 1, zz\n"), Error);
  EXPECT_THROW(parse_record("name = X\norder = 6\ndegrees = 1, 1, 2\nsimple = maybe\n"), Error);
}

TEST(Catalog, MalformedFamiliesRejected) {
  const std::string base = "name = F\nparam q = prime_power\norder = q*(q^2-1)\n";
  EXPECT_NO_THROW(parse_family(base));
  EXPECT_THROW(parse_family(base + "bogus = 1\n"), Error);
  EXPECT_THROW(parse_family(base + "param n = weird\n"), Error);
  EXPECT_THROW(parse_family(base + "identity = q*(q+1) == q^2\n"), Error);
  EXPECT_THROW(parse_family("name = F\nparam q = prime_power\n"), Error);
  EXPECT_THROW(parse_family("name = F\nkind = literature\n"), Error);
  EXPECT_THROW(parse_family(base + "witness w = q*(q+1 @ q-1\n"), Error);
}

TEST(Catalog, RecordsWithKernelAnnotations) {
  DegreeData d = cat().record("2_U4_2");
  EXPECT_FALSE(d.simple);
  CodegreeSet c = cod_from_record(d);
  EXPECT_TRUE(c.contains(factorize(12960)));
}
