// Substream derivation and the portable bounded draws.

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "gossipmab/rng.hpp"

namespace gossipmab {
namespace {

TEST(DeriveSeed, DeterministicAndKeySensitive) {
  const auto a = derive_seed(42, {1, 2, 3});
  EXPECT_EQ(a, derive_seed(42, {1, 2, 3}));
  EXPECT_NE(a, derive_seed(43, {1, 2, 3}));
  EXPECT_NE(a, derive_seed(42, {1, 2, 4}));
  EXPECT_NE(a, derive_seed(42, {1, 2}));
  EXPECT_NE(a, derive_seed(42, {3, 2, 1}));  // key order is part of the name
}

TEST(Rng, SameSeedSameStream) {
  Rng a(7), b(7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, Uniform01InHalfOpenUnitInterval) {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.uniform01();
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
}

TEST(Rng, UniformIntCoversRangeExactly) {
  Rng rng(3);
  std::set<long long> seen;
  for (int i = 0; i < 1000; ++i) {
    const long long v = rng.uniform_int(2, 6);
    EXPECT_GE(v, 2);
    EXPECT_LE(v, 6);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 5u);
}

TEST(Rng, UniformIntSingletonAndEmptyRange) {
  Rng rng(5);
  EXPECT_EQ(rng.uniform_int(4, 4), 4);
  EXPECT_THROW(rng.uniform_int(5, 4), std::invalid_argument);
}

TEST(Rng, BernoulliDegenerate) {
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    EXPECT_FALSE(rng.bernoulli(0.0));
    EXPECT_TRUE(rng.bernoulli(1.0));
  }
}

TEST(Rng, BernoulliFrequency) {
  Rng rng(13);
  int ones = 0;
  const int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) ones += rng.bernoulli(0.3) ? 1 : 0;
  EXPECT_NEAR(static_cast<double>(ones) / kDraws, 0.3, 0.01);
}

TEST(SampleWithoutReplacement, SortedDistinctInRange) {
  Rng rng(17);
  for (int rep = 0; rep < 50; ++rep) {
    const auto s = sample_without_replacement(4, 10, rng);
    ASSERT_EQ(s.size(), 4u);
    EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
    EXPECT_TRUE(std::adjacent_find(s.begin(), s.end()) == s.end());
    for (const int v : s) {
      EXPECT_GE(v, 0);
      EXPECT_LT(v, 10);
    }
  }
  EXPECT_EQ(sample_without_replacement(10, 10, rng).size(), 10u);
  EXPECT_TRUE(sample_without_replacement(0, 5, rng).empty());
  EXPECT_THROW(sample_without_replacement(6, 5, rng), std::invalid_argument);
}

TEST(SampleWithoutReplacement, ReachesEverySubset) {
  Rng rng(23);
  std::set<std::vector<int>> seen;
  for (int i = 0; i < 5000; ++i) seen.insert(sample_without_replacement(4, 6, rng));
  EXPECT_EQ(seen.size(), 15u);  // C(6, 4)
}

}  // namespace
}  // namespace gossipmab
