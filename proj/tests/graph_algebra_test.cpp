#include "test_util.hpp"

#include "smoothrank/graph_algebra.hpp"
#include "smoothrank/rational.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <algorithm>
#include <map>

using namespace smoothrank;
using smoothrank::testing::R;

namespace {

Wmg random_wmg(int m, Rng& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  Wmg g(m);
  for (Eigen::Index k = 0; k < g.vector().size(); ++k) g.vector()(k) = u(rng);
  return g;
}

WeightedMajorityGraph<Rational> random_exact_wmg(int m, Rng& rng) {
  std::uniform_int_distribution<int> u(-9, 9);
  WeightedMajorityGraph<Rational> g(m);
  for (Eigen::Index k = 0; k < g.vector().size(); ++k) g.vector()(k) = Rational(u(rng)) / (1 + k % 4);
  return g;
}

int rank_of(const Eigen::MatrixXd& a) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(1e-10);
  return static_cast<int>(lu.rank());
}

std::multiset<std::pair<Alternative, Alternative>> edges_of(const Digraph& g) {
  std::multiset<std::pair<Alternative, Alternative>> out;
  for (Alternative a = 0; a < g.num_vertices(); ++a)
    for (Alternative b = 0; b < g.num_vertices(); ++b)
      if (g.has_edge(a, b)) out.insert({a, b});
  return out;
}

TEST(Dot, Examples) {
  Rng rng(1);
  const auto g = random_wmg(5, rng);
  EXPECT_EQ(dot(g, Wmg(5)), 0.0);
  EXPECT_DOUBLE_EQ(dot(three_cycle(0, 1, 2, 5), cocycle(0, 5)), 0.0);
  for (int m = 3; m <= 7; ++m) {
    EXPECT_DOUBLE_EQ(dot(cocycle(0, m), cocycle(0, m)), m - 1);
    EXPECT_DOUBLE_EQ(dot(cocycle(1, m), cocycle(2, m)), -1);
  }
  EXPECT_DOUBLE_EQ(dot(three_cycle(0, 1, 2, 4), three_cycle(0, 1, 2, 4)), 3);
  EXPECT_THROW(dot(Wmg(3), Wmg(4)), std::invalid_argument);
}

TEST(ThreeCycle, StorageAndErrors) {
  const auto g = three_cycle(2, 0, 1, 4);
  EXPECT_EQ(g(2, 0), 1);
  EXPECT_EQ(g(0, 1), 1);
  EXPECT_EQ(g(1, 2), 1);
  EXPECT_EQ(g(0, 2), -1);
  EXPECT_EQ(g(0, 3), 0);
  EXPECT_THROW(three_cycle(0, 0, 1, 3), std::invalid_argument);
}

TEST(Cocycle, RowSumAndStar) {
  const auto g = cocycle(2, 5);
  EXPECT_EQ(g.row_sum(2), 4);
  const auto star = umg(g);
  EXPECT_EQ(star.num_edges(), 4u);
  for (Alternative b = 0; b < 5; ++b)
    if (b != 2) EXPECT_TRUE(star.has_edge(2, b));
}

TEST(OrthogonalDecompose, SingleRankingAtThree) {
  const auto g = wmg(Profile<double>(3, {R({1, 2, 3})}));
  const auto d = orthogonal_decompose(g.cast<Rational>());
  EXPECT_EQ(d.coefficients[0], Rational(2) / 3);
  EXPECT_EQ(d.coefficients[1], Rational(0));
  EXPECT_EQ(d.coefficients[2], Rational(-2) / 3);
  EXPECT_EQ(d.cyclic, Rational(1) / 3 * three_cycle<Rational>(0, 1, 2, 3));
}

TEST(OrthogonalDecompose, PureCycleHasNoCocyclePart) {
  const auto d = orthogonal_decompose(three_cycle<Rational>(0, 2, 3, 5));
  EXPECT_TRUE(d.cocyclic.is_zero());
}

TEST(OrthogonalDecompose, ExactOrthogonalAndIdempotent) {
  Rng rng(3);
  for (int m = 2; m <= 8; ++m) {
    const auto g = random_exact_wmg(m, rng);
    const auto d = orthogonal_decompose(g);
    EXPECT_EQ(d.cyclic + d.cocyclic, g);
    EXPECT_EQ(dot(d.cyclic, d.cocyclic), Rational(0));
    Rational sum = 0;
    for (const auto& c : d.coefficients) sum += c;
    EXPECT_EQ(sum, Rational(0));
    for (Alternative a = 0; a < m; ++a) EXPECT_EQ(dot(d.cyclic, cocycle<Rational>(a, m)), Rational(0));
    const auto again = orthogonal_decompose(d.cyclic);
    EXPECT_EQ(again.cyclic, d.cyclic);
    EXPECT_TRUE(again.cocyclic.is_zero());
  }
}

TEST(OrthogonalDecompose, MatchesLeastSquaresProjection) {
  Rng rng(4);
  for (int m = 3; m <= 6; ++m)
    for (int k = 0; k < 10; ++k) {
      const auto g = random_wmg(m, rng);
      const Eigen::MatrixXd c = cocycle_matrix(m);
      const Eigen::VectorXd coeff = c.completeOrthogonalDecomposition().solve(g.vector());
      const Eigen::VectorXd projected = c * coeff;
      const auto d = orthogonal_decompose(g);
      EXPECT_LT((projected - d.cocyclic.vector()).cwiseAbs().maxCoeff(), 1e-9);
      EXPECT_LT((d.cyclic + d.cocyclic - g).max_abs(), 1e-9);
    }
}

TEST(Bases, Ranks) {
  for (int m = 3; m <= 7; ++m) {
    EXPECT_EQ(rank_of(cycle_basis_matrix(m)), (m - 1) * (m - 2) / 2);
    EXPECT_EQ(cycle_basis_matrix(m).cols(), (m - 1) * (m - 2) / 2);
    EXPECT_EQ(rank_of(cocycle_matrix(m)), m - 1);
    Eigen::MatrixXd both(cycle_basis_matrix(m).rows(), cycle_basis_matrix(m).cols() + m);
    both << cycle_basis_matrix(m), cocycle_matrix(m);
    EXPECT_EQ(rank_of(both), m * (m - 1) / 2);
    EXPECT_LT((cycle_basis_matrix(m).transpose() * cocycle_matrix(m)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(CycleBasisCoeffs, Examples) {
  const auto through_a1 = cycle_basis_coeffs(three_cycle<Rational>(0, 2, 3, 5));
  int nonzero = 0;
  for (const auto& c : through_a1)
    if (c.lambda != 0) {
      ++nonzero;
      EXPECT_EQ(c.i, 2);
      EXPECT_EQ(c.j, 3);
      EXPECT_EQ(c.lambda, Rational(1));
    }
  EXPECT_EQ(nonzero, 1);

  const auto inner = three_cycle<Rational>(1, 2, 3, 5);
  EXPECT_EQ(from_cycle_basis(cycle_basis_coeffs(inner), 5), inner);

  for (const auto& c : cycle_basis_coeffs(WeightedMajorityGraph<Rational>(4))) EXPECT_EQ(c.lambda, Rational(0));
  EXPECT_THROW(cycle_basis_coeffs(cocycle<Rational>(0, 4)), std::invalid_argument);
}

TEST(CycleBasisCoeffs, ReconstructsRandomCycleParts) {
  Rng rng(6);
  for (int m = 3; m <= 8; ++m) {
    const auto cyc = orthogonal_decompose(random_exact_wmg(m, rng)).cyclic;
    EXPECT_EQ(from_cycle_basis(cycle_basis_coeffs(cyc), m), cyc);
  }
}

TEST(CycleToTriangles, SumsToTheCycle) {
  EXPECT_THROW(cycle_to_triangles({0, 1}), std::invalid_argument);
  EXPECT_THROW(cycle_to_triangles({0, 1, 0}), std::invalid_argument);
  for (const std::vector<Alternative>& cycle :
       {std::vector<Alternative>{0, 1, 2}, {3, 0, 2, 1}, {5, 1, 4, 0, 2, 3}, {9, 2, 7, 0, 5, 1, 8, 3, 6, 4}}) {
    const int m = static_cast<int>(*std::max_element(cycle.begin(), cycle.end())) + 1;
    const auto tris = cycle_to_triangles(cycle);
    EXPECT_EQ(tris.size(), cycle.size() - 2);
    WeightedMajorityGraph<Rational> sum(m);
    for (const auto& t : tris) sum += three_cycle<Rational>(t[0], t[1], t[2], m);
    EXPECT_EQ(sum, cycle_wmg<Rational>(cycle, m));
  }
  const auto self = cycle_to_triangles({2, 0, 1});
  ASSERT_EQ(self.size(), 1u);
  EXPECT_EQ(self[0], (Triangle{2, 0, 1}));
}

void expect_edge_cover(const Digraph& g, const std::vector<std::vector<Alternative>>& cycles) {
  std::multiset<std::pair<Alternative, Alternative>> covered;
  for (const auto& c : cycles) {
    EXPECT_GE(c.size(), 2u);
    std::set<Alternative> distinct(c.begin(), c.end());
    EXPECT_EQ(distinct.size(), c.size());
    for (std::size_t s = 0; s < c.size(); ++s) covered.insert({c[s], c[(s + 1) % c.size()]});
  }
  EXPECT_EQ(covered, edges_of(g));
}

TEST(EulerianDecomposition, Examples) {
  Digraph tri(3);
  tri.add_edge(0, 1);
  tri.add_edge(1, 2);
  tri.add_edge(2, 0);
  EXPECT_EQ(eulerian_cycle_decomposition(tri).size(), 1u);
  expect_edge_cover(tri, eulerian_cycle_decomposition(tri));

  Digraph two(6);
  for (auto [a, b] : {std::pair{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}}) two.add_edge(a, b);
  EXPECT_EQ(eulerian_cycle_decomposition(two).size(), 2u);
  expect_edge_cover(two, eulerian_cycle_decomposition(two));

  Digraph eight(5);
  for (auto [a, b] : {std::pair{0, 1}, {1, 2}, {2, 0}, {0, 3}, {3, 4}, {4, 0}}) eight.add_edge(a, b);
  const auto cycles = eulerian_cycle_decomposition(eight);
  EXPECT_EQ(cycles.size(), 2u);
  expect_edge_cover(eight, cycles);

  EXPECT_TRUE(eulerian_cycle_decomposition(Digraph(4)).empty());
  Digraph path(3);
  path.add_edge(0, 1);
  EXPECT_THROW(eulerian_cycle_decomposition(path), std::invalid_argument);
}

TEST(EulerianDecomposition, RandomBalancedGraphs) {
  Rng rng(9);
  for (int k = 0; k < 40; ++k) {
    const int m = 4 + k % 6;
    // Union of random edge-disjoint cycles built from a shuffled vertex order.
    Digraph g(m);
    for (int c = 0; c < 3; ++c) {
      const auto r = smoothrank::testing::random_ranking(m, rng);
      const int len = 3 + static_cast<int>(rng() % (m - 2));
      bool clash = false;
      for (int s = 0; s < len; ++s) {
        const Alternative a = r[s], b = r[(s + 1) % len];
        if (g.has_edge(a, b) || g.has_edge(b, a)) clash = true;
      }
      if (clash) continue;
      for (int s = 0; s < len; ++s) g.add_edge(r[s], r[(s + 1) % len]);
    }
    ASSERT_TRUE(g.is_balanced());
    expect_edge_cover(g, eulerian_cycle_decomposition(g));
  }
}

TEST(EdgeGadget, SumsToScaledEdge) {
  const auto m4 = edge_gadget_graphs(1, 0, 4);
  EXPECT_EQ(m4.triangles.size(), 2u);
  EXPECT_EQ(m4.cocycle_centers.size(), 4u);
  const auto m3 = edge_gadget_graphs(1, 0, 3);
  EXPECT_EQ(m3.triangles.size(), 1u);
  EXPECT_EQ(m3.cocycle_centers.size(), 3u);
  for (int m = 3; m <= 10; ++m)
    for (Alternative b = 0; b < m; ++b)
      for (Alternative c = 0; c < m; ++c) {
        if (b == c) continue;
        WeightedMajorityGraph<Rational> want(m);
        want.set(b, c, Rational(m));
        EXPECT_EQ(edge_gadget_wmg<Rational>(edge_gadget_graphs(b, c, m), m), want) << m << " " << b << " " << c;
      }
  EXPECT_THROW(edge_gadget_graphs(2, 2, 5), std::invalid_argument);
}

}  // namespace
