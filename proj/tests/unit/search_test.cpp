#include <gtest/gtest.h>

#include <set>

#include "hevo/search.hpp"

using namespace hevo;
using namespace hevo::search;

namespace {

Visit improved(std::size_t i) { return Visit{i, Verdict::improved}; }
Visit regressed(std::size_t i) { return Visit{i, Verdict::regressed}; }

}  // namespace

TEST(Grid, LastDimensionVariesFastest) {
  Grid g({7, 3, 2, 2});
  EXPECT_EQ(g.size(), 84u);
  EXPECT_EQ(g.encode({0, 0, 0, 1}), 1u);
  EXPECT_EQ(g.encode({0, 0, 1, 0}), 2u);
  EXPECT_EQ(g.encode({0, 1, 0, 0}), 4u);
  EXPECT_EQ(g.encode({1, 0, 0, 0}), 12u);
  EXPECT_EQ(g.encode({6, 0, 1, 0}), 74u);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g.encode(g.decode(i)), i);
  EXPECT_THROW(g.decode(84), Error);
  EXPECT_THROW(g.encode({7, 0, 0, 0}), Error);
  EXPECT_THROW(g.encode({0, 0, 0}), Error);
}

TEST(Exhaustive, FirstUnseenInOrder) {
  Grid g({2, 3});
  EXPECT_EQ(next_exhaustive(g, {}), 0u);
  EXPECT_EQ(next_exhaustive(g, {improved(0), regressed(1)}), 2u);
  EXPECT_EQ(next_exhaustive(g, {improved(1)}), 0u);
  std::vector<Visit> all;
  for (std::size_t i = 0; i < g.size(); ++i) all.push_back(regressed(i));
  EXPECT_EQ(next_exhaustive(g, all), std::nullopt);
}

TEST(Exhaustive, VisitsOutsideTheGridAreIgnored) {
  Grid g({2});
  EXPECT_EQ(next_exhaustive(g, {Visit{std::nullopt, Verdict::improved}}), 0u);
}

TEST(Random, NeverRepeatsAndIsSeeded) {
  Grid g({4, 3});
  std::vector<Visit> visits;
  std::set<std::size_t> drawn;
  for (std::size_t k = 0; k < g.size(); ++k) {
    auto n = next_random(g, visits, derive_seed(5, {k}));
    ASSERT_TRUE(n);
    EXPECT_TRUE(drawn.insert(*n).second);
    visits.push_back(regressed(*n));
  }
  EXPECT_EQ(next_random(g, visits, 1), std::nullopt);
  EXPECT_EQ(next_random(g, {}, 42), next_random(g, {}, 42));
}

TEST(Random, UniformOverUnseen) {
  Grid g({5});
  std::vector<int> counts(5, 0);
  for (std::uint64_t s = 0; s < 4000; ++s) ++counts[*next_random(g, {regressed(2)}, derive_seed(s, {}))];
  EXPECT_EQ(counts[2], 0);
  for (int i : {0, 1, 3, 4}) {
    EXPECT_GT(counts[i], 850);
    EXPECT_LT(counts[i], 1150);
  }
}

TEST(HillClimb, FirstNeighbourInFieldOrder) {
  Grid g({7, 3, 2, 2});
  // From the origin only +1 moves exist; dimension 0 comes first.
  EXPECT_EQ(next_hill_climb(g, {improved(0)}, 0), g.encode({1, 0, 0, 0}));
  // -1 is tried before +1.
  std::size_t mid = g.encode({3, 1, 0, 0});
  EXPECT_EQ(next_hill_climb(g, {improved(mid)}, mid), g.encode({2, 1, 0, 0}));
}

TEST(HillClimb, RegressedFieldIsAvoided) {
  Grid g({7, 3, 2, 2});
  std::size_t mid = g.encode({3, 1, 0, 0});
  // A regressed tools move sends the search to another field.
  auto next = next_hill_climb(g, {improved(mid), regressed(g.encode({2, 1, 0, 0}))}, mid);
  ASSERT_TRUE(next);
  EXPECT_EQ(*next, g.encode({3, 0, 0, 0}));
}

TEST(HillClimb, FieldOfTheLastImprovementIsAvoided) {
  Grid g({1, 2, 2, 2});
  std::size_t first = g.encode({0, 0, 0, 0});
  std::size_t second = g.encode({0, 1, 0, 0});
  // The improvement came from dimension 1, so dimension 2 moves next.
  EXPECT_EQ(next_hill_climb(g, {improved(first), improved(second)}, second), g.encode({0, 1, 1, 0}));
}

TEST(HillClimb, FallsBackToDeprioritizedThenNearest) {
  Grid g({3, 3});
  std::size_t centre = g.encode({1, 1});
  std::vector<Visit> v{improved(centre), regressed(g.encode({0, 1})), regressed(g.encode({2, 1})), regressed(g.encode({1, 0}))};
  // Dimensions 0 and 1 both regressed; the only unseen neighbour is still tried.
  EXPECT_EQ(next_hill_climb(g, v, centre), g.encode({1, 2}));
  v.push_back(regressed(g.encode({1, 2})));
  // All four neighbours seen: nearest unseen by (dims changed, distance, order).
  EXPECT_EQ(next_hill_climb(g, v, centre), g.encode({0, 0}));
}

TEST(HillClimb, ExhaustsOnlyWhenEverythingIsSeen) {
  Grid g({2, 2});
  std::vector<Visit> v;
  std::size_t best = 0;
  v.push_back(improved(best));
  std::set<std::size_t> seen{best};
  while (auto n = next_hill_climb(g, v, best)) {
    EXPECT_TRUE(seen.insert(*n).second);
    v.push_back(regressed(*n));
  }
  EXPECT_EQ(seen.size(), g.size());
}

TEST(SingleDifference, Cases) {
  EXPECT_EQ(single_difference({1, 2, 3}, {1, 0, 3}), 1u);
  EXPECT_EQ(single_difference({1, 2, 3}, {1, 2, 3}), std::nullopt);
  EXPECT_EQ(single_difference({1, 2, 3}, {0, 0, 3}), std::nullopt);
}
