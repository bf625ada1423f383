#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "lgdda/grades.hpp"

using namespace lgdda;

namespace {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST(Grade, SumOfFiniteValues) { EXPECT_EQ(grade_sum({1, 2, 0}), Grade(3)); }

TEST(Grade, OmegaAbsorbsSums) {
  EXPECT_EQ(grade_sum({Grade::omega(), 1}), Grade::omega());
  EXPECT_EQ(Grade(4) + Grade::omega(), Grade::omega());
}

TEST(Grade, EmptySumIsZero) { EXPECT_EQ(grade_sum(std::span<const Grade>{}), Grade(0)); }

TEST(Grade, OmegaIsAboveEveryNatural) {
  EXPECT_LT(Grade(1000000), Grade::omega());
  EXPECT_TRUE(Grade::omega().is_omega());
  EXPECT_THROW(Grade::omega().value(), std::domain_error);
}

TEST(Grade, ParseAndPrint) {
  EXPECT_EQ(Grade::parse("w"), Grade::omega());
  EXPECT_EQ(Grade::parse("17"), Grade(17));
  EXPECT_EQ(Grade(17).to_string(), "17");
  EXPECT_EQ(Grade::omega().to_string(), "w");
  EXPECT_THROW(Grade::parse("-1"), Error);
  EXPECT_THROW(Grade::parse(""), Error);
}

TEST(Grade, BoundedExtrema) {
  std::vector<Grade> xs{2, 3};
  EXPECT_EQ(min_star(xs), Grade(2));
  EXPECT_EQ(max_star(xs), Grade(3));
  EXPECT_EQ(min_star({}), Grade::omega());
  EXPECT_EQ(max_star({}), Grade(0));
  EXPECT_EQ(bounded_extrema({}, Extremum::min), Grade::omega());
}

TEST(Grade, SumIsOrderIndependent) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 200; ++round) {
    std::vector<Grade> xs;
    for (int i = 0; i < 6; ++i) xs.push_back(rng() % 9 == 0 ? Grade::omega() : Grade(rng() % 50));
    const Grade expected = grade_sum(xs);
    std::shuffle(xs.begin(), xs.end(), rng);
    EXPECT_EQ(grade_sum(xs), expected);
  }
}

TEST(Grade, ExtremaMatchPlainMinMax) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 200; ++round) {
    std::vector<Grade> xs;
    for (std::size_t i = 0, n = 1 + rng() % 5; i < n; ++i) xs.push_back(Grade(rng() % 20));
    EXPECT_EQ(min_star(xs), *std::min_element(xs.begin(), xs.end()));
    EXPECT_EQ(max_star(xs), *std::max_element(xs.begin(), xs.end()));
  }
}

TEST(Group, SortsAndDeduplicates) {
  Group g{"b", "a", "b"};
  EXPECT_EQ(g.members(), (std::vector<Agent>{"a", "b"}));
  EXPECT_EQ(g.to_string(), "a b");
  EXPECT_THROW(Group(std::vector<Agent>{}), Error);
  EXPECT_TRUE(Group{"a"}.subset_of(g));
  EXPECT_FALSE(g.subset_of(Group{"a"}));
}

TEST(Group, AllGroupsEndsWithFullGroup) {
  auto gs = all_groups({"c", "a", "b"});
  ASSERT_EQ(gs.size(), 7u);
  EXPECT_EQ(gs.front(), Group{"a"});
  EXPECT_EQ(gs.back(), (Group{"a", "b", "c"}));
}

TEST(Partitions, TwoAgentsGradeTwo) {
  auto ps = partitions(2, Group{"a", "b"});
  ASSERT_EQ(ps.size(), 3u);
  EXPECT_EQ(ps[0].to_string(), "(a:0,b:2)");
  EXPECT_EQ(ps[1].to_string(), "(a:1,b:1)");
  EXPECT_EQ(ps[2].to_string(), "(a:2,b:0)");
}

TEST(Partitions, ZeroGrade) {
  auto ps = partitions(0, Group{"a", "b"});
  ASSERT_EQ(ps.size(), 1u);
  EXPECT_EQ(ps[0].to_string(), "(a:0,b:0)");
}

TEST(Partitions, SingletonGroup) {
  auto ps = partitions(3, Group{"a"});
  ASSERT_EQ(ps.size(), 1u);
  EXPECT_EQ(ps[0]["a"], 3u);
}

TEST(Partitions, InfiniteGradeRejected) {
  try {
    partitions(Grade::omega(), Group{"a"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "partition of infinite grade");
  }
}

TEST(Partitions, CountsSumsAndDistinctness) {
  const std::vector<Agent> pool{"a", "b", "c", "d"};
  for (std::size_t size = 1; size <= 4; ++size) {
    Group g(std::vector<Agent>(pool.begin(), pool.begin() + size));
    for (std::uint64_t k = 0; k <= 6; ++k) {
      auto ps = partitions(k, g);
      EXPECT_EQ(ps.size(), binomial(k + size - 1, size - 1)) << "k=" << k << " |J|=" << size;
      std::set<std::vector<std::uint64_t>> seen;
      for (const auto& p : ps) {
        EXPECT_EQ(p.total(), k);
        EXPECT_TRUE(seen.insert(p.shares()).second);
      }
      EXPECT_TRUE(std::is_sorted(ps.begin(), ps.end(),
                                 [](const Partition& x, const Partition& y) { return x.shares() < y.shares(); }));
    }
  }
}

TEST(Partitions, SumOverSubgroup) {
  Partition p(Group{"a", "b", "c"}, {1, 2, 3});
  EXPECT_EQ(p.sum_over(Group{"a", "c"}), 4u);
  EXPECT_EQ(p["b"], 2u);
}
