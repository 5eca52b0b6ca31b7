#include "smoothrank/models.hpp"

#include <algorithm>
#include <cmath>

namespace smoothrank {

Rng make_stream(std::uint64_t master_seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0x5eedu};
  return Rng(seq);
}

double expected_kt_bound(double phi, int m) {
  if (!(phi > 0.0 && phi <= 1.0)) throw std::domain_error("expected_kt_bound: phi must be in (0, 1]");
  const double md = m;
  const double quadratic = md * md * phi;
  if (phi >= 1.0) return quadratic;
  const double tail = md * phi / ((1.0 - phi) * (1.0 - phi) * (1.0 - phi * phi));
  return std::min(quadratic, tail);
}

double phi_star(const DispersionVector& phis, int m) {
  if (phis.empty()) throw std::invalid_argument("phi_star: empty dispersion vector");
  double total = 0.0;
  for (double phi : phis) total += expected_kt_bound(phi, m);
  return total / static_cast<double>(phis.size());
}

// Repeated insertion: the i-th central alternative (1-based) goes to slot j
// from the top of the current i-1 items with probability phi^{i-j} / S_i.
Ranking mallows_sample(const MallowsParam<double>& param, Rng& rng) {
  const int m = param.num_alternatives();
  const double phi = std::max(param.phi, 1e-12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Alternative> order;
  order.reserve(m);
  std::vector<double> weights(m);
  for (int i = 1; i <= m; ++i) {
    double total = 0.0;
    for (int j = 1; j <= i; ++j) {
      weights[j - 1] = std::pow(phi, i - j);
      total += weights[j - 1];
    }
    double u = unit(rng) * total;
    int slot = i;
    for (int j = 1; j <= i; ++j) {
      u -= weights[j - 1];
      if (u < 0.0) {
        slot = j;
        break;
      }
    }
    order.insert(order.begin() + (slot - 1), param.central[i - 1]);
  }
  return Ranking(std::move(order));
}

Ranking pl_sample(const PlackettLuceParam<double>& param, Rng& rng) {
  const int m = param.num_alternatives();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Alternative> remaining(m);
  for (int a = 0; a < m; ++a) remaining[a] = a;
  std::vector<Alternative> order;
  order.reserve(m);
  while (remaining.size() > 1) {
    double total = 0.0;
    for (Alternative a : remaining) total += param.theta[a];
    double u = unit(rng) * total;
    std::size_t pick = remaining.size() - 1;
    for (std::size_t k = 0; k < remaining.size(); ++k) {
      u -= param.theta[remaining[k]];
      if (u < 0.0) {
        pick = k;
        break;
      }
    }
    order.push_back(remaining[pick]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  order.push_back(remaining.front());
  return Ranking(std::move(order));
}

Ranking sample_ranking(const MallowsParam<double>& param, Rng& rng) { return mallows_sample(param, rng); }
Ranking sample_ranking(const PlackettLuceParam<double>& param, Rng& rng) { return pl_sample(param, rng); }

}  // namespace smoothrank
