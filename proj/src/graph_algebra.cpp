#include "smoothrank/graph_algebra.hpp"

#include <set>
#include <stdexcept>

namespace smoothrank {

std::vector<Triangle> cycle_to_triangles(const std::vector<Alternative>& cycle) {
  if (cycle.size() < 3) throw std::invalid_argument("cycle_to_triangles: cycle needs at least 3 vertices");
  if (std::set<Alternative>(cycle.begin(), cycle.end()).size() != cycle.size())
    throw std::invalid_argument("cycle_to_triangles: repeated vertex");
  std::vector<Triangle> out;
  out.reserve(cycle.size() - 2);
  for (std::size_t s = 1; s + 1 < cycle.size(); ++s) out.push_back({cycle[0], cycle[s], cycle[s + 1]});
  return out;
}

std::vector<std::vector<Alternative>> eulerian_cycle_decomposition(const Digraph& g) {
  if (!g.is_balanced()) throw std::invalid_argument("eulerian_cycle_decomposition: in-degree != out-degree");
  const int m = g.num_vertices();
  Digraph rest = g;
  std::vector<std::vector<Alternative>> cycles;
  std::vector<int> on_path(m, -1);

  auto next_out = [&](Alternative u) {
    for (Alternative x = 0; x < m; ++x)
      if (rest.has_edge(u, x)) return x;
    return -1;
  };

  for (Alternative start = 0; start < m; ++start) {
    while (next_out(start) >= 0) {
      std::vector<Alternative> path{start};
      on_path[start] = 0;
      while (!path.empty()) {
        const Alternative u = path.back();
        const Alternative x = next_out(u);
        if (x < 0) {
          // Only the walk's origin can be stuck, and only once its trail is empty.
          on_path[u] = -1;
          path.pop_back();
          continue;
        }
        rest.remove_edge(u, x);
        if (on_path[x] >= 0) {
          const auto first = path.begin() + on_path[x];
          std::vector<Alternative> cycle(first, path.end());
          for (auto it = first + 1; it != path.end(); ++it) on_path[*it] = -1;
          path.erase(first + 1, path.end());
          cycles.push_back(std::move(cycle));
        } else {
          on_path[x] = static_cast<int>(path.size());
          path.push_back(x);
        }
      }
    }
  }
  return cycles;
}

EdgeGadget edge_gadget_graphs(Alternative b, Alternative c, int m) {
  if (b == c) throw std::invalid_argument("edge_gadget_graphs: b == c");
  if (m < 3) throw std::invalid_argument("edge_gadget_graphs: m must be >= 3");
  if (b < 0 || c < 0 || b >= m || c >= m) throw std::out_of_range("edge_gadget_graphs: bad alternative");
  EdgeGadget gadget;
  for (Alternative a = 0; a < m; ++a) {
    if (a == b || a == c) continue;
    gadget.triangles.push_back({c, a, b});
    gadget.cocycle_centers.push_back(a);
  }
  gadget.cocycle_centers.push_back(b);
  gadget.cocycle_centers.push_back(b);
  return gadget;
}

Eigen::MatrixXd cycle_basis_matrix(int m) {
  const auto dim = Wmg::pair_count(m);
  Eigen::MatrixXd basis(dim, Wmg::pair_count(m - 1));
  Eigen::Index col = 0;
  for (Alternative i = 1; i < m; ++i)
    for (Alternative j = i + 1; j < m; ++j) basis.col(col++) = three_cycle<double>(0, i, j, m).vector();
  return basis;
}

Eigen::MatrixXd cocycle_matrix(int m) {
  Eigen::MatrixXd basis(Wmg::pair_count(m), m);
  for (Alternative a = 0; a < m; ++a) basis.col(a) = cocycle<double>(a, m).vector();
  return basis;
}

}  // namespace smoothrank
