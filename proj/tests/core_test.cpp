#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace smoothrank;
using smoothrank::testing::R;

namespace {

TEST(Ranking, RejectsNonPermutations) {
  EXPECT_THROW(Ranking({0, 0, 1}), std::invalid_argument);
  EXPECT_THROW(Ranking({0, 3, 1}), std::invalid_argument);
}

TEST(Ranking, CodeRoundTrip) {
  Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    const auto r = smoothrank::testing::random_ranking(9, rng);
    EXPECT_EQ(Ranking::from_code(r.code(), 9), r);
  }
  EXPECT_EQ(R({2, 1, 3}).label(), "a2>a1>a3");
}

TEST(Permutation, CompositionIsFunctionNotation) {
  const auto s = Permutation::transposition(3, 0, 1);
  const auto t = Permutation::cycle(3, std::vector<Alternative>{0, 1, 2});
  const auto st = s * t;
  for (Alternative a = 0; a < 3; ++a) EXPECT_EQ(st(a), s(t(a)));
  EXPECT_EQ(t.pow(3), Permutation::identity(3));
  EXPECT_EQ(t.pow(-1), t.inverse());
  EXPECT_EQ(t * t.inverse(), Permutation::identity(3));
}

TEST(KtDistance, Examples) {
  EXPECT_EQ(kt_distance(R({1, 2, 3}), R({1, 2, 3})), 0);
  EXPECT_EQ(kt_distance(R({1, 2, 3}), R({3, 2, 1})), 3);
  EXPECT_EQ(kt_distance(R({1, 2, 3}), R({2, 3, 1})), 2);
  EXPECT_THROW(kt_distance(R({1, 2}), R({1, 2, 3})), std::invalid_argument);
}

TEST(KtDistance, IsAMetricAndMatchesDefinition) {
  Rng rng(11);
  for (int m = 1; m <= 7; ++m)
    for (int k = 0; k < 40; ++k) {
      const auto a = smoothrank::testing::random_ranking(m, rng);
      const auto b = smoothrank::testing::random_ranking(m, rng);
      const auto c = smoothrank::testing::random_ranking(m, rng);
      EXPECT_EQ(kt_distance(a, b), smoothrank::testing::naive_kt(a, b));
      EXPECT_EQ(kt_distance(a, b), kt_distance(b, a));
      EXPECT_EQ(kt_distance(a, b) == 0, a == b);
      EXPECT_LE(kt_distance(a, c), kt_distance(a, b) + kt_distance(b, c));
      EXPECT_LE(kt_distance(a, b), m * (m - 1) / 2);
    }
}

TEST(KemenyScore, Examples) {
  const auto r = R({1, 2, 3});
  EXPECT_EQ(kemeny_score(r, Profile<double>(3, {r, r, r})), 0);
  EXPECT_EQ(kemeny_score(r, smoothrank::testing::cyclic3()), 4);
  const auto w = R({3, 1, 2});
  EXPECT_EQ(kemeny_score(r, Profile<double>(3, {w})), kt_distance(r, w));
}

TEST(KemenyScore, TallyPathMatchesDirectSum) {
  Rng rng(5);
  for (int k = 0; k < 100; ++k) {
    const int m = 2 + k % 6;
    const auto p = smoothrank::testing::random_profile(m, 1 + k % 9, rng);
    const auto r = smoothrank::testing::random_ranking(m, rng);
    EXPECT_EQ(kemeny_score(r, p), kemeny_score_from_tally(r, pairwise_tally(p)));
  }
}

TEST(PairwiseTally, Examples) {
  const auto unanimous = Profile<double>(2, {R({1, 2}), R({1, 2}), R({1, 2})});
  const auto n = pairwise_tally(unanimous);
  EXPECT_EQ(n(0, 1), 3);
  EXPECT_EQ(n(1, 0), 0);
  EXPECT_EQ(pairwise_tally(smoothrank::testing::cyclic3())(0, 1), 2);

  Rng rng(2);
  const auto p = smoothrank::testing::random_profile(5, 7, rng);
  const auto t = pairwise_tally(p);
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b)
      if (a != b) EXPECT_EQ(t(a, b) + t(b, a), 7);
}

TEST(Wmg, Examples) {
  const auto single = wmg(Profile<double>(3, {R({1, 2, 3})}));
  EXPECT_EQ(single(0, 1), 1);
  EXPECT_EQ(single(1, 2), 1);
  EXPECT_EQ(single(0, 2), 1);
  EXPECT_EQ(single(2, 0), -1);

  const auto cyc = wmg(smoothrank::testing::cyclic3());
  EXPECT_EQ(cyc(0, 1), 1);
  EXPECT_EQ(cyc(1, 2), 1);
  EXPECT_EQ(cyc(2, 0), 1);

  EXPECT_TRUE(wmg(Profile<double>(4)).is_zero());
}

TEST(Wmg, ProfileUnionReverseIsZero) {
  Rng rng(8);
  auto p = smoothrank::testing::random_profile(5, 6, rng);
  Profile<double> both = p;
  for (const auto& v : p.votes()) both.add(v.ranking.reversed());
  EXPECT_TRUE(wmg(both).is_zero());
}

TEST(Wmg, AntisymmetryAndParity) {
  Rng rng(21);
  for (int k = 0; k < 30; ++k) {
    const int m = 2 + k % 6, n = 1 + k % 7;
    const auto g = wmg(smoothrank::testing::random_profile(m, n, rng));
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        if (a == b) continue;
        EXPECT_EQ(g(a, b) + g(b, a), 0);
        EXPECT_LE(std::abs(g(a, b)), n);
        EXPECT_EQ((static_cast<int>(g(a, b)) - n) % 2, 0);
      }
  }
}

TEST(Wmg, StorageIsTheUpperTriangle) {
  Wmg g(4);
  g.set(2, 1, 3.0);
  EXPECT_EQ(g.vector()(Wmg::pair_index(4, 1, 2)), -3.0);
  EXPECT_EQ(g(1, 2), -3.0);
  EXPECT_EQ(Wmg::pair_count(5), 10);
  EXPECT_THROW(g.set(1, 1, 1.0), std::out_of_range);
}

TEST(Umg, Examples) {
  EXPECT_EQ(umg(Wmg(3)).num_edges(), 0u);
  const auto t = umg(wmg(Profile<double>(3, {R({1, 2, 3})})));
  EXPECT_TRUE(t.is_tournament());
  EXPECT_TRUE(t.has_edge(0, 1) && t.has_edge(1, 2) && t.has_edge(0, 2));
  const auto tri = umg(wmg(smoothrank::testing::cyclic3()));
  EXPECT_TRUE(tri.has_edge(0, 1) && tri.has_edge(1, 2) && tri.has_edge(2, 0));
  EXPECT_EQ(tri.num_edges(), 3u);
  EXPECT_FALSE(tri.has_antiparallel_pair());
}

TEST(KtToDigraph, Examples) {
  Digraph dag(3);
  dag.add_edge(0, 1);
  dag.add_edge(1, 2);
  EXPECT_EQ(kt_to_digraph(R({1, 2, 3}), dag), 0);

  Digraph tri(3);
  tri.add_edge(0, 1);
  tri.add_edge(1, 2);
  tri.add_edge(2, 0);
  // Orders that follow the cycle break one edge; the reversed ones break two.
  int ones = 0;
  for (const auto& r : all_rankings(3)) {
    const int back = kt_to_digraph(r, tri);
    EXPECT_TRUE(back == 1 || back == 2);
    ones += back == 1;
  }
  EXPECT_EQ(ones, 3);
  EXPECT_EQ(kt_to_digraph(R({1, 2, 3}), tri), 1);
  EXPECT_EQ(kt_to_digraph(R({1, 3, 2}), tri), 2);

  const auto trans = umg(wmg(Profile<double>(4, {R({1, 2, 3, 4})})));
  EXPECT_EQ(kt_to_digraph(R({4, 3, 2, 1}), trans), 6);
}

TEST(SlaterScore, Examples) {
  const auto r = R({2, 1, 3});
  EXPECT_EQ(slater_score(r, Profile<double>(3, {r, r})), 0);
  int best = 3;
  for (const auto& w : all_rankings(3)) best = std::min(best, slater_score(w, smoothrank::testing::cyclic3()));
  EXPECT_EQ(best, 1);
  EXPECT_EQ(slater_score(R({2, 3, 1}), smoothrank::testing::cyclic3()), 1);
  EXPECT_EQ(slater_score(R({3, 2, 1}), Profile<double>(3, {R({1, 2, 3})})), 3);
}

TEST(AvgKt, Examples) {
  const auto r = R({1, 2, 3});
  EXPECT_EQ(avg_kt(Profile<double>(3, {r, r, r})), 0);
  EXPECT_EQ(avg_kt(Profile<double>(3, {r, R({3, 2, 1})})), 3);
  EXPECT_EQ(avg_kt(smoothrank::testing::cyclic3()), 2);
  EXPECT_THROW(avg_kt(Profile<double>(3, {r})), std::invalid_argument);
}

TEST(AvgKt, MatchesOrderedPairDefinition) {
  Rng rng(4);
  for (int k = 0; k < 20; ++k) {
    const auto p = smoothrank::testing::random_profile(5, 2 + k % 6, rng);
    const auto votes = p.votes();
    double sum = 0;
    for (std::size_t i = 0; i < votes.size(); ++i)
      for (std::size_t j = 0; j < votes.size(); ++j)
        if (i != j) sum += kt_distance(votes[i].ranking, votes[j].ranking);
    const double n = static_cast<double>(votes.size());
    EXPECT_NEAR(avg_kt(p), sum / (n * (n - 1)), 1e-12);
  }
}

TEST(Permute, Examples) {
  const auto r = R({1, 2, 3});
  EXPECT_EQ(permute(Permutation::identity(3), r), r);
  EXPECT_EQ(permute(Permutation::transposition(3, 0, 1), r), R({2, 1, 3}));
  EXPECT_THROW(permute(Permutation::identity(4), r), std::invalid_argument);
}

TEST(Permute, CommutesWithEveryOperation) {
  Rng rng(13);
  for (int k = 0; k < 40; ++k) {
    const int m = 3 + k % 5;
    const auto sigma = smoothrank::testing::random_permutation(m, rng);
    const auto p = smoothrank::testing::random_profile(m, 1 + k % 6, rng);
    const auto r = smoothrank::testing::random_ranking(m, rng);
    const auto w = smoothrank::testing::random_ranking(m, rng);
    EXPECT_EQ(wmg(permute(sigma, p)), permute(sigma, wmg(p)));
    EXPECT_EQ(umg(wmg(permute(sigma, p))), permute(sigma, umg(wmg(p))));
    EXPECT_EQ(kt_distance(permute(sigma, r), permute(sigma, w)), kt_distance(r, w));
    EXPECT_EQ(kemeny_score(permute(sigma, r), permute(sigma, p)), kemeny_score(r, p));
    EXPECT_EQ(slater_score(permute(sigma, r), permute(sigma, p)), slater_score(r, p));
  }
}

TEST(Digraph, DegreesAndKinds) {
  Digraph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  EXPECT_FALSE(g.is_balanced());
  g.add_edge(2, 0);
  EXPECT_TRUE(g.is_balanced());
  EXPECT_TRUE(g.is_tournament());
  EXPECT_EQ(g.out_degree(0), 1);
  EXPECT_EQ(g.in_degree(0), 1);
  EXPECT_THROW(g.add_edge(1, 1), std::invalid_argument);
}

}  // namespace
