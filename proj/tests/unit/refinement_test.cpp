#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "mlx/error.hpp"
#include "mlx/refinement.hpp"

namespace mlx {
namespace {

VertexSet range(VertexId begin, VertexId end) {
  VertexSet out(end - begin);
  std::iota(out.begin(), out.end(), begin);
  return out;
}

std::vector<std::size_t> counts_of(const RefinementResult& r) {
  std::vector<std::size_t> out;
  for (const auto& p : r.beta_profile) out.push_back(p.count);
  return out;
}

Community random_community(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  Community c;
  std::bernoulli_distribution coin(0.3);
  while (c.vertices.size() < 2) {
    c.vertices.clear();
    for (VertexId u = 0; u < n; ++u) {
      if (coin(rng)) c.vertices.push_back(u);
    }
  }
  while (c.layers.empty()) {
    for (LayerId l = 0; l < m; ++l) {
      if (coin(rng)) c.layers.push_back(l);
    }
  }
  c.score = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return c;
}

TEST(JaccardMatch, Examples) {
  const Community a{{1, 2}, {0}, 1.0}, b{{2, 3}, {0}, 1.0};
  EXPECT_NEAR(jaccard_match(a, b), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(jaccard_match(a, a), 1.0);
  const Community c{{5, 6}, {1}, 1.0};
  EXPECT_EQ(jaccard_match(a, c), 0.0);
  EXPECT_EQ(jaccard_match(a, b), jaccard_match(b, a));
}

TEST(Refine, HandTracedGreedy) {
  // J(1,2) = 0.5 * 9/10 + 0.5 = 0.95, J(1,3) = J(2,3) = 0.5 * 0 + 0.5 * 1/5 = 0.1.
  const Community first{range(0, 10), {0}, 5.0};
  const Community second{range(1, 10), {0}, 4.0};
  const Community third{range(20, 30), {0, 1, 2, 3, 4}, 3.0};
  EXPECT_NEAR(jaccard_match(first, second), 0.5 * 0.9 + 0.5, 1e-15);
  EXPECT_NEAR(jaccard_match(first, third), 0.1, 1e-15);
  const auto kept = refine(std::vector<Community>{third, second, first}, 0.5);
  EXPECT_EQ(kept, (std::vector<Community>{first, third}));
}

TEST(Refine, BetaOneKeepsEveryDistinctCandidate) {
  std::mt19937_64 rng(1);
  std::vector<Community> cands;
  for (int i = 0; i < 30; ++i) cands.push_back(random_community(rng, 20, 4));
  cands.push_back(cands[3]);
  EXPECT_EQ(refine(cands, 1.0).size(), 30u);
}

TEST(Refine, BetaZeroKeepsFullyDisjointSets) {
  std::mt19937_64 rng(2);
  std::vector<Community> cands;
  for (int i = 0; i < 40; ++i) cands.push_back(random_community(rng, 30, 5));
  const auto kept = refine(cands, 0.0);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    for (std::size_t j = i + 1; j < kept.size(); ++j) EXPECT_EQ(jaccard_match(kept[i], kept[j]), 0.0);
  }
}

TEST(Refine, RejectsBetaOutsideUnitInterval) {
  EXPECT_THROW(refine({}, -0.1), ParameterError);
  EXPECT_THROW(refine({}, 1.5), ParameterError);
  EXPECT_TRUE(refine({}, 0.3).empty());
}

TEST(Refine, FuzzContract) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> count(1, 25);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Community> cands;
    const int t = count(rng);
    for (int i = 0; i < t; ++i) cands.push_back(random_community(rng, 15, 4));
    const double beta = unit(rng);
    const auto kept = refine(cands, beta);
    ASSERT_FALSE(kept.empty());
    const auto top = *std::min_element(cands.begin(), cands.end(), community_order);
    EXPECT_EQ(kept.front(), top);
    for (std::size_t i = 0; i < kept.size(); ++i) {
      for (std::size_t j = i + 1; j < kept.size(); ++j) EXPECT_LE(jaccard_match(kept[i], kept[j]), beta);
    }
  }
}

TEST(DefaultBeta, ConstantProfileChoosesZero) {
  const std::vector<Community> cands{{range(0, 5), {0}, 2.0}};
  const auto r = default_beta(cands);
  EXPECT_EQ(r.beta_used, 0.0);
  ASSERT_EQ(r.beta_profile.size(), kBetaGridSize);
  for (const auto& p : r.beta_profile) EXPECT_EQ(p.count, 1u);
}

TEST(DefaultBeta, LongestPlateauStartsAtTenPercent) {
  // J(c1, c3) = 0.095 and J(c2, c4) = 0.605; every other pair is disjoint.
  const std::vector<Community> cands{
      {range(0, 100), {0}, 4.0},
      {range(200, 300), {5}, 3.0},
      {range(81, 100), {1}, 2.0},
      {range(279, 300), {5}, 1.0},
  };
  const auto r = default_beta(cands);
  const auto k = counts_of(r);
  for (std::size_t i = 0; i < kBetaGridSize; ++i) {
    const std::size_t expected = i < 10 ? 2 : i <= 60 ? 3 : 4;
    EXPECT_EQ(k[i], expected) << "beta index " << i;
  }
  EXPECT_EQ(r.beta_used, 0.10);
  EXPECT_EQ(r.kept.size(), 3u);
}

TEST(DefaultBeta, SweepMatchesIndividualRefinements) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Community> cands;
    for (int i = 0; i < 60; ++i) cands.push_back(random_community(rng, 25, 3));
    const auto r = default_beta(cands);
    for (std::size_t i = 0; i < kBetaGridSize; ++i) {
      EXPECT_EQ(r.beta_profile[i].count, refine(cands, beta_grid_value(i)).size());
    }
    EXPECT_EQ(r.kept, refine(cands, r.beta_used));
    EXPECT_EQ(default_beta(cands, 4).kept, r.kept);
  }
}

TEST(DefaultBeta, EmptyInputIsAnError) { EXPECT_THROW(default_beta({}), ParameterError); }

TEST(StableWindow, FrequencyTieGoesToLongestRun) {
  std::vector<std::size_t> counts;
  counts.insert(counts.end(), 20, 2);
  counts.insert(counts.end(), 40, 3);
  counts.insert(counts.end(), 20, 2);
  counts.insert(counts.end(), 21, 4);
  EXPECT_EQ(stable_window_index(counts), 20u);
}

TEST(StableWindow, FullTieGoesToSmallerCount) {
  std::vector<std::size_t> counts;
  counts.insert(counts.end(), 40, 3);
  counts.insert(counts.end(), 40, 2);
  counts.insert(counts.end(), 21, 5);
  EXPECT_EQ(stable_window_index(counts), 40u);
}

TEST(StableWindow, ModeBeatsLongestRun) {
  std::vector<std::size_t> counts;
  counts.insert(counts.end(), 30, 1);
  counts.insert(counts.end(), 35, 2);
  counts.insert(counts.end(), 36, 1);
  EXPECT_EQ(stable_window_index(counts), 0u);
}

TEST(BetaProfile, TsvFormat) {
  const std::vector<BetaPoint> profile{{0.0, 3}, {0.01, 4}, {1.0, 9}};
  std::ostringstream out;
  write_beta_profile(out, profile);
  EXPECT_EQ(out.str(), "beta\tk\n0.00\t3\n0.01\t4\n1.00\t9\n");
}

}  // namespace
}  // namespace mlx
