#ifndef SMOOTHRANK_MODELS_HPP
#define SMOOTHRANK_MODELS_HPP

#include "smoothrank/core.hpp"

#include <limits>
#include <map>
#include <optional>
#include <random>
#include <vector>

namespace smoothrank {

using Rng = std::mt19937_64;

/// Independent generator for stream `stream` under a master seed.
Rng make_stream(std::uint64_t master_seed, std::uint64_t stream);

/// Closed interval of admissible parameter values for a bounded model.
template <typename Scalar>
struct ParamBounds {
  Scalar lo;
  Scalar hi;
  bool contains(const Scalar& x) const { return lo <= x && x <= hi; }
};

// ---------------------------------------------------------------------------
// Mallows

template <typename S = double>
struct MallowsParam {
  using Scalar = S;

  Ranking central;
  Scalar phi;

  MallowsParam() = default;
  MallowsParam(Ranking central_ranking, Scalar dispersion,
               std::optional<ParamBounds<Scalar>> bounds = std::nullopt)
      : central(std::move(central_ranking)), phi(std::move(dispersion)) {
    if (!(phi > Scalar(0) && phi <= Scalar(1))) throw std::domain_error("MallowsParam: phi must be in (0, 1]");
    if (bounds && !bounds->contains(phi)) throw std::domain_error("MallowsParam: phi outside declared bounds");
  }

  int num_alternatives() const { return central.size(); }

  template <typename Other>
  MallowsParam<Other> cast() const {
    if constexpr (std::is_same_v<Other, double>) return MallowsParam<Other>(central, to_double(phi));
    else return MallowsParam<Other>(central, Other(phi));
  }

  std::weak_ordering operator<=>(const MallowsParam& other) const {
    if (auto c = central <=> other.central; c != 0) return c;
    if (phi < other.phi) return std::weak_ordering::less;
    if (other.phi < phi) return std::weak_ordering::greater;
    return std::weak_ordering::equivalent;
  }
  bool operator==(const MallowsParam& other) const { return central == other.central && phi == other.phi; }
};

/// 1 + x + ... + x^{count-1}.
template <typename Scalar>
Scalar geometric_sum(const Scalar& x, int count) {
  Scalar sum(0), term(1);
  for (int i = 0; i < count; ++i) {
    sum += term;
    term *= x;
  }
  return sum;
}

/// Z_phi = prod_{i=2..m} (1 + phi + ... + phi^{i-1}); equals m! at phi = 1.
template <typename Scalar>
Scalar mallows_z(const Scalar& phi, int m) {
  if (!(phi > Scalar(0) && phi <= Scalar(1))) throw std::domain_error("mallows_z: phi must be in (0, 1]");
  if (m < 1) throw std::domain_error("mallows_z: m must be positive");
  Scalar z(1);
  for (int i = 2; i <= m; ++i) z *= geometric_sum(phi, i);
  return z;
}

template <typename Scalar>
Scalar mallows_pmf(const MallowsParam<Scalar>& param, const Ranking& w) {
  const int m = param.num_alternatives();
  if (w.size() != m) throw std::invalid_argument("mallows_pmf: mismatched m");
  return ipow(param.phi, kt_distance(param.central, w)) / mallows_z(param.phi, m);
}

/// Probability that the alternative `gap` positions earlier in the central
/// ranking beats the later one:
///   (k+1)/(1-phi^{k+1}) - k/(1-phi^k)
///     = sum_{j<k} phi^j S_{k-j} / (S_k S_{k+1}),  S_i = 1 + ... + phi^{i-1},
/// which is 1/2 at phi = 1.
template <typename Scalar>
Scalar mallows_pairwise(const Scalar& phi, int gap) {
  if (gap < 1) throw std::domain_error("mallows_pairwise: gap must be >= 1");
  if (!(phi > Scalar(0) && phi <= Scalar(1))) throw std::domain_error("mallows_pairwise: phi must be in (0, 1]");
  Scalar numerator(0), power(1);
  for (int j = 0; j < gap; ++j) {
    numerator += power * geometric_sum(phi, gap - j);
    power *= phi;
  }
  return numerator / (geometric_sum(phi, gap) * geometric_sum(phi, gap + 1));
}

template <typename Scalar>
WeightedMajorityGraph<Scalar> expected_wmg(const MallowsParam<Scalar>& param) {
  const int m = param.num_alternatives();
  std::vector<Scalar> margin(m);
  for (int k = 1; k < m; ++k) margin[k] = Scalar(2) * mallows_pairwise(param.phi, k) - Scalar(1);
  WeightedMajorityGraph<Scalar> g(m);
  const auto order = param.central.order();
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) g.set(order[i], order[j], margin[j - i]);
  return g;
}

/// Exact E[KT(R, W)] for W ~ Mallows(R, phi): sum over gaps of (m-k)(1-p_k).
template <typename Scalar>
Scalar mallows_expected_kt(const Scalar& phi, int m) {
  Scalar total(0);
  for (int k = 1; k < m; ++k) total += Scalar(m - k) * (Scalar(1) - mallows_pairwise(phi, k));
  return total;
}

/// min(m^2 phi, m phi / ((1-phi)^2 (1-phi^2))); the second branch is
/// infinite at phi = 1.
double expected_kt_bound(double phi, int m);

template <typename Scalar>
double expected_kt_bound(const MallowsParam<Scalar>& param) {
  return expected_kt_bound(to_double(param.phi), param.num_alternatives());
}

using DispersionVector = std::vector<double>;

/// phi* = (1/n) sum_j min(m^2 phi_j, m phi_j / ((1-phi_j)^2 (1-phi_j^2))).
double phi_star(const DispersionVector& phis, int m);

Ranking mallows_sample(const MallowsParam<double>& param, Rng& rng);

// ---------------------------------------------------------------------------
// Plackett-Luce

template <typename S = double>
struct PlackettLuceParam {
  using Scalar = S;

  std::vector<Scalar> theta;

  PlackettLuceParam() = default;
  explicit PlackettLuceParam(std::vector<Scalar> weights,
                             std::optional<ParamBounds<Scalar>> bounds = std::nullopt)
      : theta(std::move(weights)) {
    Scalar total(0);
    for (const auto& t : theta) {
      if (!(t > Scalar(0) && t <= Scalar(1))) throw std::domain_error("PlackettLuceParam: theta_i must be in (0, 1]");
      if (bounds && !bounds->contains(t)) throw std::domain_error("PlackettLuceParam: theta_i outside bounds");
      total += t;
    }
    if (scalar_abs(Scalar(total - Scalar(1))) > Scalar(is_exact_v<Scalar> ? 0.0 : 1e-12))
      throw std::domain_error("PlackettLuceParam: theta must sum to 1");
  }

  int num_alternatives() const { return static_cast<int>(theta.size()); }

  template <typename Other>
  PlackettLuceParam<Other> cast() const {
    std::vector<Other> out;
    for (const auto& t : theta) {
      if constexpr (std::is_same_v<Other, double>) out.push_back(to_double(t));
      else out.push_back(Other(t));
    }
    if constexpr (std::is_same_v<Other, double>) {
      double total = 0;
      for (double t : out) total += t;
      for (double& t : out) t /= total;
    }
    return PlackettLuceParam<Other>(std::move(out));
  }

  bool operator<(const PlackettLuceParam& other) const { return theta < other.theta; }
  bool operator==(const PlackettLuceParam& other) const { return theta == other.theta; }
};

/// Witness utilities (theta_hi, (theta_lo + theta_hi)/2, theta_lo, ...),
/// normalised to sum to 1.
template <typename Scalar>
PlackettLuceParam<Scalar> pl_witness(int m, const Scalar& lo, const Scalar& hi) {
  std::vector<Scalar> raw(m, lo);
  raw[0] = hi;
  if (m > 1) raw[1] = (lo + hi) / Scalar(2);
  Scalar total(0);
  for (const auto& t : raw) total += t;
  for (auto& t : raw) t /= total;
  return PlackettLuceParam<Scalar>(std::move(raw));
}

template <typename Scalar>
Scalar pl_pmf(const PlackettLuceParam<Scalar>& param, const Ranking& r) {
  const int m = param.num_alternatives();
  if (r.size() != m) throw std::invalid_argument("pl_pmf: mismatched m");
  Scalar remaining(0);
  for (const auto& t : param.theta) remaining += t;
  Scalar prob(1);
  for (int i = 0; i + 1 < m; ++i) {
    const Scalar& t = param.theta[r[i]];
    prob *= t / remaining;
    remaining -= t;
  }
  return prob;
}

/// w(a, b) = (theta_a - theta_b) / (theta_a + theta_b).
template <typename Scalar>
WeightedMajorityGraph<Scalar> expected_wmg(const PlackettLuceParam<Scalar>& param) {
  const int m = param.num_alternatives();
  WeightedMajorityGraph<Scalar> g(m);
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      g.set(a, b, (param.theta[a] - param.theta[b]) / (param.theta[a] + param.theta[b]));
  return g;
}

Ranking pl_sample(const PlackettLuceParam<double>& param, Rng& rng);

// ---------------------------------------------------------------------------
// Neutrality: relabelled parameters

template <typename Scalar>
MallowsParam<Scalar> permute(const Permutation& sigma, const MallowsParam<Scalar>& param) {
  return MallowsParam<Scalar>(permute(sigma, param.central), param.phi);
}

template <typename Scalar>
PlackettLuceParam<Scalar> permute(const Permutation& sigma, const PlackettLuceParam<Scalar>& param) {
  if (sigma.size() != param.num_alternatives()) throw std::invalid_argument("permute: mismatched m");
  std::vector<Scalar> theta(param.theta.size());
  for (int a = 0; a < param.num_alternatives(); ++a) theta[sigma(a)] = param.theta[a];
  PlackettLuceParam<Scalar> out;
  out.theta = std::move(theta);
  return out;
}

// ---------------------------------------------------------------------------
// Parameter profiles

/// Weighted multiset of parameters from one model family.
template <typename Param>
class ParameterProfile {
 public:
  using Scalar = typename Param::Scalar;
  struct Entry {
    Param param;
    Scalar weight;
  };

  explicit ParameterProfile(int m = 0) : m_(m) {}

  void add(Param param, Scalar weight = Scalar(1)) {
    if (param.num_alternatives() != m_) throw std::invalid_argument("ParameterProfile: mismatched m");
    if (weight < Scalar(0)) throw std::invalid_argument("ParameterProfile: negative weight");
    entries_.push_back({std::move(param), std::move(weight)});
  }

  /// Union with `scale` copies of `other`.
  void append(const ParameterProfile& other, const Scalar& scale = Scalar(1)) {
    if (other.m_ != m_) throw std::invalid_argument("ParameterProfile: mismatched m");
    for (const auto& e : other.entries_) entries_.push_back({e.param, e.weight * scale});
  }

  int num_alternatives() const { return m_; }
  std::span<const Entry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  /// |P^Theta|.
  Scalar total_weight() const {
    Scalar total(0);
    for (const auto& e : entries_) total += e.weight;
    return total;
  }

  /// Merges identical parameters, dropping zero weights.
  ParameterProfile compacted() const {
    std::map<Param, Scalar> merged;
    for (const auto& e : entries_) {
      auto [it, inserted] = merged.try_emplace(e.param, e.weight);
      if (!inserted) it->second += e.weight;
    }
    ParameterProfile out(m_);
    for (auto& [p, w] : merged)
      if (w != Scalar(0)) out.entries_.push_back({p, w});
    return out;
  }

  std::size_t type_count() const { return compacted().size(); }

  template <typename Other>
  auto cast() const {
    using OtherParam = decltype(std::declval<Param>().template cast<Other>());
    ParameterProfile<OtherParam> out(m_);
    for (const auto& e : entries_) {
      if constexpr (std::is_same_v<Other, double>) out.add(e.param.template cast<Other>(), to_double(e.weight));
      else out.add(e.param.template cast<Other>(), Other(e.weight));
    }
    return out;
  }

 private:
  int m_;
  std::vector<Entry> entries_;
};

template <typename Param>
ParameterProfile<Param> permute(const Permutation& sigma, const ParameterProfile<Param>& p) {
  ParameterProfile<Param> out(p.num_alternatives());
  for (const auto& e : p.entries()) out.add(permute(sigma, e.param), e.weight);
  return out;
}

/// Sum over entries of weight * WMG(distribution), in closed form.
template <typename Param>
WeightedMajorityGraph<typename Param::Scalar> expected_wmg(const ParameterProfile<Param>& p) {
  using Scalar = typename Param::Scalar;
  WeightedMajorityGraph<Scalar> g(p.num_alternatives());
  if constexpr (std::is_same_v<Param, MallowsParam<Scalar>>) {
    // Every Mallows WMG is a relabelling of the margins for one phi.
    std::map<Scalar, std::vector<Scalar>> margins;
    for (const auto& e : p.entries()) {
      auto [it, inserted] = margins.try_emplace(e.param.phi);
      if (inserted) {
        it->second.resize(p.num_alternatives());
        for (int k = 1; k < p.num_alternatives(); ++k)
          it->second[k] = Scalar(2) * mallows_pairwise(e.param.phi, k) - Scalar(1);
      }
      const auto order = e.param.central.order();
      const int m = p.num_alternatives();
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) g.add(order[i], order[j], e.weight * it->second[j - i]);
    }
  } else {
    for (const auto& e : p.entries()) g += e.weight * expected_wmg(e.param);
  }
  return g;
}

Ranking sample_ranking(const MallowsParam<double>& param, Rng& rng);
Ranking sample_ranking(const PlackettLuceParam<double>& param, Rng& rng);

/// One independent ranking per unit of weight; weights must be integral.
template <typename Param>
Profile<double> sample_profile(const ParameterProfile<Param>& p, Rng& rng) {
  Profile<double> out(p.num_alternatives());
  for (const auto& e : p.entries()) {
    const double w = to_double(e.weight);
    if (w < 0 || w != std::floor(w)) throw std::invalid_argument("sample_profile: non-integral weight");
    const auto param = e.param.template cast<double>();
    for (long long k = 0; k < static_cast<long long>(w); ++k) out.add(sample_ranking(param, rng));
  }
  return out;
}

/// Same distribution as sample_profile, with identical rankings merged into
/// weighted entries. Suited to profiles with very many voters.
template <typename Param>
Profile<double> sample_profile_compact(const ParameterProfile<Param>& p, Rng& rng) {
  std::map<std::uint64_t, double> counts;
  for (const auto& e : p.entries()) {
    const double w = to_double(e.weight);
    if (w < 0 || w != std::floor(w)) throw std::invalid_argument("sample_profile: non-integral weight");
    const auto param = e.param.template cast<double>();
    for (long long k = 0; k < static_cast<long long>(w); ++k) counts[sample_ranking(param, rng).code()] += 1.0;
  }
  Profile<double> out(p.num_alternatives());
  for (auto [code, count] : counts) out.add(Ranking::from_code(code, p.num_alternatives()), count);
  return out;
}

}  // namespace smoothrank

#endif  // SMOOTHRANK_MODELS_HPP
