#include <gtest/gtest.h>

#include <chrono>
#include <set>

#include "codeg/dixon.hpp"

using namespace codeg;

namespace {

PermGroup load(const std::string& name) {
  return load_generator_file(std::string(CODEG_TEST_DATA) + "/groups/" + name + ".gens");
}

// |G'| by closing the set of commutators under multiplication
std::size_t derived_order(const EnumeratedGroup& g) {
  std::set<std::uint32_t> h;
  const std::uint32_t n = static_cast<std::uint32_t>(g.size());
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b) {
      auto ai = g.id_of(g.element(a).inverse()), bi = g.id_of(g.element(b).inverse());
      h.insert(g.product(g.product(ai, bi), g.product(a, b)));
    }
  std::vector<std::uint32_t> frontier(h.begin(), h.end());
  std::vector<std::uint32_t> gens = frontier;
  while (!frontier.empty()) {
    std::vector<std::uint32_t> next;
    for (auto x : frontier)
      for (auto s : gens) {
        auto y = g.product(x, s);
        if (h.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return h.size();
}

std::multiset<std::uint64_t> degrees(const CharTable& t) {
  auto d = t.degrees();
  return {d.begin(), d.end()};
}

}  // namespace

TEST(Dixon, KnownDegreeMultisets) {
  const std::map<std::string, std::multiset<std::uint64_t>> expect{
      {"S3", {1, 1, 2}},          {"S4", {1, 1, 2, 3, 3}}, {"A5", {1, 3, 3, 4, 5}},
      {"Q8", {1, 1, 1, 1, 2}},    {"D8", {1, 1, 1, 1, 2}}, {"A4", {1, 1, 1, 3}},
      {"C6", {1, 1, 1, 1, 1, 1}}, {"SL2_3", {1, 1, 1, 2, 2, 2, 3}}, {"L2_7", {1, 3, 3, 6, 7, 8}}};
  for (const auto& [n, d] : expect) {
    CharTable t = dixon_table(load(n));
    EXPECT_EQ(degrees(t), d) << n;
    auto rep = verify_table(t);
    EXPECT_TRUE(rep.pass) << n << ": " << rep.failure;
    EXPECT_EQ(t.rows.size(), t.classes.count());
  }
}

TEST(Dixon, LinearCharactersCountAbelianization) {
  for (const char* n : {"S3", "S4", "A4", "D8", "Q8", "SL2_3", "C6", "A5"}) {
    PermGroup g = load(n);
    EnumeratedGroup e(g);
    CharTable t = dixon_table(g);
    std::size_t linear = 0;
    for (auto d : t.degrees()) linear += d == 1;
    EXPECT_EQ(linear * derived_order(e), e.size()) << n;
  }
}

TEST(Dixon, KernelOrdersDivideGroupOrder) {
  CharTable t = dixon_table(load("S4"));
  std::multiset<std::uint64_t> ker;
  for (std::size_t i = 0; i < t.rows.size(); ++i) ker.insert(kernel_order(t, i).value());
  // trivial 24, sign 12, degree 2 has kernel V4, faithful degree 3 pair
  EXPECT_EQ(ker, (std::multiset<std::uint64_t>{24, 12, 4, 1, 1}));
}

TEST(Dixon, SeedIndependent) {
  for (const char* n : {"A5", "SL2_3", "L2_8"}) {
    DixonOptions a, b;
    a.seed = 1;
    b.seed = 987654321;
    CharTable ta = dixon_table(load(n), a), tb = dixon_table(load(n), b);
    EXPECT_EQ(ta.degrees(), tb.degrees()) << n;
    ASSERT_EQ(ta.rows.size(), tb.rows.size());
    std::multiset<std::vector<std::uint64_t>> ra, rb;
    for (std::size_t i = 0; i < ta.rows.size(); ++i) {
      std::vector<std::uint64_t> ka(ta.rows[i].kernel_classes.begin(), ta.rows[i].kernel_classes.end());
      std::vector<std::uint64_t> kb(tb.rows[i].kernel_classes.begin(), tb.rows[i].kernel_classes.end());
      ka.insert(ka.begin(), ta.rows[i].degree);
      kb.insert(kb.begin(), tb.rows[i].degree);
      ra.insert(ka);
      rb.insert(kb);
    }
    EXPECT_EQ(ra, rb) << n;
  }
}

TEST(Dixon, TamperedTableFailsVerification) {
  CharTable t = dixon_table(load("A5"));
  ASSERT_TRUE(verify_table(t).pass);
  auto bad = t;
  bad.rows[1].degree = 4;
  EXPECT_FALSE(verify_table(bad).pass);
  bad = t;
  std::swap(bad.rows[2].values[1].m, bad.rows[3].values[1].m);
  bad.rows.pop_back();
  EXPECT_FALSE(verify_table(bad).pass);
}

TEST(Dixon, TargetsWithinBudget) {
  auto start = std::chrono::steady_clock::now();
  CharTable u42 = dixon_table(load("U4_2"));
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(secs, 60.0);
  EXPECT_TRUE(verify_table(u42).pass);
  EXPECT_EQ(u42.rows.size(), 20U);
  CharTable u33 = dixon_table(load("U3_3"));
  EXPECT_TRUE(verify_table(u33).pass);
  EXPECT_EQ(u33.rows.size(), 14U);
}

TEST(Dixon, TrivialGroup) {
  CharTable t = dixon_table(load("trivial"));
  EXPECT_EQ(t.rows.size(), 1U);
  EXPECT_TRUE(verify_table(t).pass);
}
