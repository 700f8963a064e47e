#include <gtest/gtest.h>

#include <map>
#include <set>

#include "codeg/partitions.hpp"

using namespace codeg;

namespace {

// standard Young tableaux by removing the cell holding n
std::uint64_t syt(const Partition& p, std::map<Partition, std::uint64_t>& memo) {
  if (p.empty()) return 1;
  if (auto it = memo.find(p); it != memo.end()) return it->second;
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    bool corner = i + 1 == p.size() || p[i + 1] < p[i];
    if (!corner) continue;
    Partition q = p;
    if (--q[i] == 0) q.pop_back();
    s += syt(q, memo);
  }
  return memo[p] = s;
}

std::uint64_t factorial(std::uint64_t n) { return n <= 1 ? 1 : n * factorial(n - 1); }

}  // namespace

TEST(Partitions, Counts) {
  const std::uint32_t p[] = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42};
  for (std::uint32_t n = 0; n <= 10; ++n) EXPECT_EQ(partitions_of(n).size(), p[n]) << n;
  EXPECT_EQ(partitions_of(20).size(), 627U);
}

TEST(Partitions, HookMatchesTableauxCount) {
  std::map<Partition, std::uint64_t> memo;
  for (std::uint32_t n = 1; n <= 10; ++n) {
    std::uint64_t sq = 0;
    for (const auto& p : partitions_of(n)) {
      std::uint64_t f = hook_degree(p);
      EXPECT_EQ(f, syt(p, memo));
      sq += f * f;
    }
    EXPECT_EQ(sq, factorial(n)) << n;
  }
}

TEST(Partitions, AlternatingDegreesSum) {
  for (std::uint32_t n = 2; n <= 12; ++n) {
    std::uint64_t sq = 0;
    for (auto d : alternating_degrees(n)) sq += d * d;
    EXPECT_EQ(sq, factorial(n) / 2) << n;
  }
  auto a5 = alternating_degrees(5);
  EXPECT_EQ(std::multiset<std::uint64_t>(a5.begin(), a5.end()), (std::multiset<std::uint64_t>{1, 3, 3, 4, 5}));
}

TEST(Partitions, FormulasAgreeWithHook) {
  auto fs = small_shape_formulas("validated");
  ASSERT_EQ(fs.size(), 13U);
  for (std::int64_t n = 14; n <= 60; ++n)
    for (const auto& f : fs) {
      auto v = f.value(n);
      ASSERT_TRUE(v.has_value()) << f.shape << " n=" << n;
      EXPECT_EQ(static_cast<std::uint64_t>(*v), hook_degree(f.at(static_cast<std::uint32_t>(n)))) << f.shape << " n=" << n;
    }
  EXPECT_EQ(hook_degree({9, 3, 2}), 5733U);
}

TEST(Partitions, AsPrintedEntryDisagrees) {
  auto fs = small_shape_formulas("as-printed");
  const PartitionFormula* f = nullptr;
  for (const auto& x : fs)
    if (x.shape == "(n-5,4,1)") f = &x;
  ASSERT_NE(f, nullptr);
  EXPECT_EQ(f->value(14), std::optional<std::int64_t>(5460));
  EXPECT_EQ(hook_degree({9, 4, 1}), 4368U);
}

TEST(Partitions, DistinctnessCertificate) {
  auto c = shape_distinctness_certificate("validated", 14);
  EXPECT_TRUE(c.closed);
  EXPECT_EQ(c.pairs.size(), 78U);
  EXPECT_EQ(c.above_one.size(), 13U);
  for (const auto& p : c.pairs) EXPECT_TRUE(recheck_certificate(p.cert));
  for (const auto& a : c.above_one) EXPECT_TRUE(recheck_certificate(a));
}

TEST(Partitions, AlternatingHaveManyDegrees) {
  std::map<Partition, std::uint64_t> memo;
  for (std::uint32_t n = 14; n <= 20; ++n) {
    std::set<std::uint64_t> cd;
    for (const auto& p : partitions_of(n)) {
      std::uint64_t f = hook_degree(p);
      cd.insert(p == conjugate(p) ? f / 2 : f);
    }
    EXPECT_GE(cd.size(), 14U) << n;
    auto ad = alternating_degrees(n);
    EXPECT_EQ(cd, std::set<std::uint64_t>(ad.begin(), ad.end())) << n;
  }
}

TEST(Partitions, InvalidShapes) {
  EXPECT_THROW(check_partition({2, 3}), Error);
  EXPECT_THROW(small_shape_formulas("other"), Error);
}
