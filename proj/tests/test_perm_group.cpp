#include <gtest/gtest.h>

#include <filesystem>
#include <set>

#include "codeg/perm_group.hpp"

using namespace codeg;
namespace fs = std::filesystem;

namespace {

PermGroup load(const std::string& name) {
  return load_generator_file(std::string(CODEG_TEST_DATA) + "/groups/" + name + ".gens");
}

}  // namespace

TEST(Permutation, Cycles) {
  auto a = Permutation::from_cycles("(0 1 2)", 4);
  auto b = Permutation::from_cycles("(2 3)", 4);
  EXPECT_EQ((a * a * a).is_identity(), true);
  EXPECT_EQ((a * a.inverse()).is_identity(), true);
  EXPECT_FALSE((a * b).to_cycles() == (b * a).to_cycles());
  EXPECT_EQ(Permutation::from_cycles(a.to_cycles(), 4).to_cycles(), a.to_cycles());
  EXPECT_TRUE(Permutation::identity(5).is_identity());
  EXPECT_THROW(Permutation::from_cycles("(0 5)", 4), Error);
  EXPECT_THROW(Permutation::from_cycles("(0 1 0)", 4), Error);
}

TEST(Corpus, OrdersMatchExpected) {
  for (const auto& ent : fs::directory_iterator(std::string(CODEG_TEST_DATA) + "/groups")) {
    PermGroup g = load_generator_file(ent.path().string());
    ASSERT_GT(g.expected_order, 0U) << g.name;
    EnumeratedGroup e(g);
    EXPECT_EQ(e.size(), g.expected_order) << g.name;
  }
}

TEST(Classes, ClassEquationAndCentralizers) {
  for (const char* name : {"S3", "S4", "A5", "D8", "Q8", "SL2_3", "L2_7"}) {
    ClassStructure cs(load(name));
    const auto& c = cs.classes();
    std::uint64_t total = 0;
    for (auto s : c.sizes) {
      EXPECT_EQ(cs.group().size() % s, 0U);
      total += s;
    }
    EXPECT_EQ(total, cs.group().size()) << name;
    EXPECT_EQ(c.sizes[0], 1U);
    // class sizes by brute force: count conjugates of each rep
    for (std::size_t k = 0; k < c.count(); ++k) {
      std::set<std::uint32_t> conj;
      for (std::uint32_t g = 0; g < cs.group().size(); ++g)
        conj.insert(cs.group().product(cs.group().product(g, c.reps[k]), cs.group().id_of(cs.group().element(g).inverse())));
      EXPECT_EQ(conj.size(), c.sizes[k]) << name;
      EXPECT_EQ(c.orders[k], cs.group().element_order(c.reps[k]));
    }
  }
}

TEST(Classes, KnownClassCounts) {
  const std::map<std::string, std::size_t> expect{{"S3", 3}, {"S4", 5}, {"A5", 5}, {"D8", 5}, {"Q8", 5},
                                                  {"SL2_3", 7}, {"L2_7", 6}, {"A6", 7}, {"C6", 6}};
  for (const auto& [n, k] : expect) EXPECT_EQ(ClassStructure(load(n)).class_count(), k) << n;
}

TEST(Classes, StructureConstantsSum) {
  for (const char* name : {"S4", "A5", "Q8"}) {
    ClassStructure cs(load(name));
    const auto& c = cs.classes();
    const std::size_t r = c.count();
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) {
        std::uint64_t s = 0;
        for (std::size_t k = 0; k < r; ++k) {
          s += cs.coeff(i, j, k) * c.sizes[k];
          EXPECT_EQ(cs.coeff(i, j, k), cs.coeff_at(i, j, c.reps[k]));
        }
        EXPECT_EQ(s, c.sizes[i] * c.sizes[j]) << name;
      }
  }
}

TEST(Normal, SubgroupsAndQuotients) {
  ClassStructure s4(load("S4"));
  auto ns = normal_subgroups_small(s4);
  std::multiset<std::uint64_t> orders;
  for (const auto& cls : ns) {
    std::uint64_t o = 0;
    for (auto k : cls) o += s4.classes().sizes[k];
    orders.insert(o);
    EXPECT_TRUE(is_closed_union(s4, cls));
    EnumeratedGroup q(quotient_group(s4, cls));
    EXPECT_EQ(q.size() * o, 24U);
  }
  EXPECT_EQ(orders, (std::multiset<std::uint64_t>{1, 4, 12, 24}));
  ClassStructure a5(load("A5"));
  EXPECT_EQ(normal_subgroups_small(a5).size(), 2U);
}

TEST(Enumeration, CapRaises) {
  try {
    EnumeratedGroup e(load("A6"), 100);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::EnumerationOverflow);
  }
}

TEST(Generators, MalformedFilesRejected) {
  EXPECT_THROW(parse_generator_file("name = X\ndegree = 0\n"), Error);
  EXPECT_THROW(parse_generator_file("degree = 3\ngenerator = (0 1)\n"), Error);
  EXPECT_THROW(parse_generator_file("name = X\ndegree = 3\ngenerator = (0 7)\n"), Error);
}
