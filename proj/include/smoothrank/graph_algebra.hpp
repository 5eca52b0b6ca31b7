#ifndef SMOOTHRANK_GRAPH_ALGEBRA_HPP
#define SMOOTHRANK_GRAPH_ALGEBRA_HPP

#include "smoothrank/core.hpp"

#include <array>
#include <vector>

namespace smoothrank {

/// Sum over i < j of w1(a_i, a_j) * w2(a_i, a_j).
template <typename Scalar>
Scalar dot(const WeightedMajorityGraph<Scalar>& g1, const WeightedMajorityGraph<Scalar>& g2) {
  if (g1.num_alternatives() != g2.num_alternatives()) throw std::invalid_argument("dot: mismatched m");
  return g1.vector().dot(g2.vector());
}

/// Unit weights on i -> j, j -> k, k -> i.
template <typename Scalar = double>
WeightedMajorityGraph<Scalar> three_cycle(Alternative i, Alternative j, Alternative k, int m) {
  if (i == j || j == k || i == k) throw std::invalid_argument("three_cycle: vertices must be distinct");
  WeightedMajorityGraph<Scalar> g(m);
  g.add(i, j, Scalar(1));
  g.add(j, k, Scalar(1));
  g.add(k, i, Scalar(1));
  return g;
}

/// w(a, b) = 1 for every b != a; zero elsewhere.
template <typename Scalar = double>
WeightedMajorityGraph<Scalar> cocycle(Alternative a, int m) {
  if (a < 0 || a >= m) throw std::out_of_range("cocycle: bad center");
  WeightedMajorityGraph<Scalar> g(m);
  for (Alternative b = 0; b < m; ++b)
    if (b != a) g.set(a, b, Scalar(1));
  return g;
}

template <typename Scalar>
struct OrthogonalDecomposition {
  WeightedMajorityGraph<Scalar> cyclic;
  WeightedMajorityGraph<Scalar> cocyclic;
  /// cocyclic = sum_a coefficients[a] * cocycle(a); the coefficients sum to 0.
  std::vector<Scalar> coefficients;
};

/// Projection onto the cycle and co-cycle spaces. With s(a) the row sum of a,
/// c_a = s(a) / m gives w_co(a, b) = c_a - c_b, and the residual has every row
/// sum zero, i.e. it is orthogonal to every co-cycle.
template <typename Scalar>
OrthogonalDecomposition<Scalar> orthogonal_decompose(const WeightedMajorityGraph<Scalar>& g) {
  const int m = g.num_alternatives();
  std::vector<Scalar> coeff(m);
  for (Alternative a = 0; a < m; ++a) coeff[a] = g.row_sum(a) / Scalar(m);
  WeightedMajorityGraph<Scalar> co(m);
  for (Alternative a = 0; a < m; ++a)
    for (Alternative b = a + 1; b < m; ++b) co.set(a, b, coeff[a] - coeff[b]);
  return {g - co, co, std::move(coeff)};
}

template <typename Scalar>
struct TriangleCoefficient {
  Alternative i;
  Alternative j;
  Scalar lambda;
};

/// Coordinates of a cycle-space graph in the basis of 3-cycles
/// a_1 -> a_i -> a_j -> a_1 (i < j): lambda_ij = w(a_i, a_j).
template <typename Scalar>
std::vector<TriangleCoefficient<Scalar>> cycle_basis_coeffs(const WeightedMajorityGraph<Scalar>& g_cyc) {
  const int m = g_cyc.num_alternatives();
  const Scalar tol(tolerance<Scalar>() * std::max(1.0, to_double(g_cyc.max_abs())) * m);
  for (Alternative a = 0; a < m; ++a)
    if (scalar_abs(g_cyc.row_sum(a)) > tol) throw std::invalid_argument("cycle_basis_coeffs: graph is not in the cycle space");
  std::vector<TriangleCoefficient<Scalar>> out;
  for (Alternative i = 1; i < m; ++i)
    for (Alternative j = i + 1; j < m; ++j) out.push_back({i, j, g_cyc(i, j)});
  return out;
}

template <typename Scalar>
WeightedMajorityGraph<Scalar> from_cycle_basis(const std::vector<TriangleCoefficient<Scalar>>& coeffs, int m) {
  WeightedMajorityGraph<Scalar> g(m);
  for (const auto& c : coeffs) g += c.lambda * three_cycle<Scalar>(0, c.i, c.j, m);
  return g;
}

using Triangle = std::array<Alternative, 3>;

/// Fan triangulation (v1, v_s, v_{s+1}), s = 2..T-1, of the cycle v1 -> ... -> vT -> v1.
std::vector<Triangle> cycle_to_triangles(const std::vector<Alternative>& cycle);

/// Edge-disjoint simple cycles covering every edge of a balanced digraph.
/// Throws std::invalid_argument if some vertex has in-degree != out-degree.
std::vector<std::vector<Alternative>> eulerian_cycle_decomposition(const Digraph& g);

template <typename Scalar = double>
WeightedMajorityGraph<Scalar> cycle_wmg(const std::vector<Alternative>& cycle, int m) {
  WeightedMajorityGraph<Scalar> g(m);
  for (std::size_t s = 0; s < cycle.size(); ++s) g.add(cycle[s], cycle[(s + 1) % cycle.size()], Scalar(1));
  return g;
}

/// Unweighted pieces whose sum is the edge b -> c with weight m: the triangles
/// c -> a_i -> b -> c for every other a_i, one co-cycle at every other a_i and
/// two co-cycles at b.
struct EdgeGadget {
  std::vector<Triangle> triangles;
  std::vector<Alternative> cocycle_centers;
};

EdgeGadget edge_gadget_graphs(Alternative b, Alternative c, int m);

template <typename Scalar = double>
WeightedMajorityGraph<Scalar> edge_gadget_wmg(const EdgeGadget& gadget, int m) {
  WeightedMajorityGraph<Scalar> g(m);
  for (const auto& t : gadget.triangles) g += three_cycle<Scalar>(t[0], t[1], t[2], m);
  for (Alternative a : gadget.cocycle_centers) g += cocycle<Scalar>(a, m);
  return g;
}

/// Columns: the 3-cycles a_1 -> a_i -> a_j -> a_1 (i < j), vectorised.
Eigen::MatrixXd cycle_basis_matrix(int m);
/// Columns: co-cycles centred at every alternative.
Eigen::MatrixXd cocycle_matrix(int m);

}  // namespace smoothrank

#endif  // SMOOTHRANK_GRAPH_ALGEBRA_HPP
