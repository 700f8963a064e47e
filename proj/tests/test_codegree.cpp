#include <gtest/gtest.h>

#include "codeg/catalog.hpp"
#include "codeg/codegree.hpp"

using namespace codeg;

namespace {

const std::string kData = CODEG_TEST_DATA;

PermGroup load(const std::string& name) { return load_generator_file(kData + "/groups/" + name + ".gens"); }
DegreeData rec(const std::string& name) { return load_record(kData + "/records/" + name + ".rec"); }

std::vector<std::uint64_t> oracle_values(const std::string& name) {
  return cod_from_table(dixon_table(load(name))).values();
}

// cod of a simple group straight from |G| and its distinct degrees
std::vector<std::uint64_t> by_hand(std::uint64_t order, std::vector<std::uint64_t> cd) {
  std::set<std::uint64_t> s{1};
  for (auto d : cd)
    if (d > 1) s.insert(order / d);
  return {s.begin(), s.end()};
}

}  // namespace

TEST(Cod, SmallGroupsByHand) {
  EXPECT_EQ(oracle_values("S3"), (std::vector<std::uint64_t>{1, 2, 3}));
  EXPECT_EQ(oracle_values("C6"), (std::vector<std::uint64_t>{1, 2, 3, 6}));
  EXPECT_EQ(oracle_values("S4"), (std::vector<std::uint64_t>{1, 2, 3, 8}));
  EXPECT_EQ(oracle_values("D8"), (std::vector<std::uint64_t>{1, 2, 4}));
  EXPECT_EQ(oracle_values("Q8"), (std::vector<std::uint64_t>{1, 2, 4}));
  EXPECT_EQ(oracle_values("A5"), (std::vector<std::uint64_t>{1, 12, 15, 20}));
  EXPECT_EQ(oracle_values("trivial"), (std::vector<std::uint64_t>{1}));
}

TEST(Cod, TargetsGolden) {
  const std::vector<std::uint64_t> u33{1, 189, 216, 224, 288, 432, 864, 1008};
  const std::vector<std::uint64_t> u42{1, 320, 405, 432, 576, 648, 864, 1080, 1296, 1728, 2592, 4320, 5184};
  EXPECT_EQ(by_hand(6048, {1, 6, 7, 14, 21, 27, 28, 32}), u33);
  EXPECT_EQ(by_hand(25920, {1, 5, 6, 10, 15, 20, 24, 30, 40, 45, 60, 64, 81}), u42);
  EXPECT_EQ(oracle_values("U3_3"), u33);
  EXPECT_EQ(oracle_values("U4_2"), u42);
  EXPECT_EQ(cod_from_record(rec("U3_3")).values(), u33);
  EXPECT_EQ(cod_from_record(rec("U4_2")).values(), u42);
}

TEST(Cod, OracleAgreesWithRecords) {
  for (const char* n : {"A5", "A6", "L2_7", "L2_8", "L2_17", "L3_3"}) {
    CharTable t = dixon_table(load(n));
    DegreeData d = rec(n);
    EXPECT_EQ(t.degrees(), d.degrees) << n;
    EXPECT_EQ(cod_from_table(t), cod_from_record(d)) << n;
  }
}

TEST(Cod, QuotientAndConstituentProperties) {
  for (const char* n : {"S3", "S4", "A4", "D8", "Q8", "SL2_3", "C6"}) {
    auto r = codegree_inclusion_suite(load(n));
    EXPECT_TRUE(r.pass) << n << ": " << r.failure;
    EXPECT_GT(r.quotient_checks, 0U);
    EXPECT_GT(r.constituent_checks, 0U);
  }
}

TEST(Cod, SimpleRecordInvariants) {
  Catalog cat = load_catalog(kData);
  int checked = 0;
  for (const auto& [name, d] : cat.records) {
    if (!d.simple || d.partial) continue;
    CodegreeSet c = cod_simple(d);
    // distinct degrees and codegrees correspond one to one
    EXPECT_EQ(c.size(), d.cd().size()) << name;
    for (auto x : d.cd()) EXPECT_TRUE(c.contains(fi_div_exact(d.order, factorize(static_cast<std::int64_t>(x)))) || x == 1);
    ++checked;
  }
  EXPECT_GE(checked, 20);
}

TEST(Cod, SquareRootBoundOnSmallSimple) {
  for (const char* n : {"A5", "A6", "L2_7", "L2_8", "L2_17", "L3_3", "U3_3", "U4_2"}) {
    DegreeData d = rec(n);
    u128 m = cod_from_record(d).max().value128();
    EXPECT_LE(d.order.value128(), m * m) << n;
  }
}

TEST(Cod, SubsetWitnessIsSmallest) {
  auto a = make_cod_set({factorize(1), factorize(6), factorize(10), factorize(15)}, "t");
  auto b = make_cod_set({factorize(1), factorize(15)}, "t");
  auto r = subset_check(a, b);
  EXPECT_FALSE(r.contained);
  EXPECT_EQ(r.witness->value(), 6U);
  EXPECT_TRUE(subset_check(b, a).contained);
  EXPECT_THROW(make_cod_set({factorize(2)}, "t"), Error);
  EXPECT_EQ(first_missing({1, 2, 3}, {1, 3}), std::optional<std::uint64_t>(2));
}

TEST(Cod, BadRecordsRejected) {
  DegreeData d = rec("A5");
  d.degrees = {1, 3, 3, 4, 4};
  d.kernel_orders.assign(5, std::nullopt);
  EXPECT_THROW(validate_degree_data(d), Error);
  d = rec("A5");
  d.degrees = {1, 1, 3, 3, 4, 5};
  d.kernel_orders.assign(6, std::nullopt);
  EXPECT_THROW(validate_degree_data(d), Error);
  d = rec("A5");
  d.class_count = 6;
  EXPECT_THROW(validate_degree_data(d), Error);
}
