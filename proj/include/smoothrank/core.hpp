#ifndef SMOOTHRANK_CORE_HPP
#define SMOOTHRANK_CORE_HPP

#include "smoothrank/rational.hpp"

#include <Eigen/Dense>

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace smoothrank {

/// Dense 0-based alternative index; a_1 in formulas is index 0.
using Alternative = int;

/// Strict total order over m alternatives, most preferred first.
class Ranking {
 public:
  Ranking() = default;
  explicit Ranking(std::vector<Alternative> order);

  static Ranking identity(int m);

  int size() const { return static_cast<int>(order_.size()); }
  Alternative operator[](int position) const { return order_[position]; }
  std::span<const Alternative> order() const { return order_; }

  /// positions()[a] is the 0-based position of alternative a.
  std::vector<int> positions() const;
  Ranking reversed() const;

  /// Packs the order into 4-bit digits; valid for m <= 16.
  std::uint64_t code() const;
  static Ranking from_code(std::uint64_t code, int m);

  /// "a1>a2>a3".
  std::string label() const;

  auto operator<=>(const Ranking&) const = default;

 private:
  std::vector<Alternative> order_;
};

/// Bijection on {0..m-1}. Composition follows function notation:
/// (s * t)(a) == s(t(a)).
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<Alternative> map);

  static Permutation identity(int m);
  static Permutation transposition(int m, Alternative a, Alternative b);
  /// Maps cycle[i] to cycle[i+1] and the last element back to the first.
  static Permutation cycle(int m, std::span<const Alternative> cycle);

  int size() const { return static_cast<int>(map_.size()); }
  Alternative operator()(Alternative a) const { return map_[a]; }
  std::span<const Alternative> map() const { return map_; }

  Permutation inverse() const;
  Permutation pow(int exponent) const;

  friend Permutation operator*(const Permutation& lhs, const Permutation& rhs);
  bool operator==(const Permutation&) const = default;

 private:
  std::vector<Alternative> map_;
};

/// Profile of (possibly fractional) weighted votes.
template <typename Scalar = double>
class Profile {
 public:
  struct Vote {
    Ranking ranking;
    Scalar weight;
  };

  explicit Profile(int m = 0) : m_(m) {}
  Profile(int m, const std::vector<Ranking>& rankings) : m_(m) {
    for (const auto& r : rankings) add(r);
  }

  void add(Ranking ranking, Scalar weight = Scalar(1)) {
    if (ranking.size() != m_) throw std::invalid_argument("Profile: ranking has wrong number of alternatives");
    if (weight < Scalar(0)) throw std::invalid_argument("Profile: negative vote weight");
    votes_.push_back({std::move(ranking), std::move(weight)});
  }

  int num_alternatives() const { return m_; }
  std::span<const Vote> votes() const { return votes_; }
  bool empty() const { return votes_.empty(); }

  Scalar total_weight() const {
    Scalar total(0);
    for (const auto& v : votes_) total += v.weight;
    return total;
  }

  bool is_integral() const {
    for (const auto& v : votes_) {
      if constexpr (is_exact_v<Scalar>) {
        if (boost::multiprecision::denominator(v.weight) != 1) return false;
      } else {
        if (v.weight != std::floor(v.weight)) return false;
      }
    }
    return true;
  }

  /// Merges identical rankings; entries come out in lexicographic order.
  Profile compacted() const {
    std::map<Ranking, Scalar> merged;
    for (const auto& v : votes_) {
      auto [it, inserted] = merged.try_emplace(v.ranking, v.weight);
      if (!inserted) it->second += v.weight;
    }
    Profile out(m_);
    for (auto& [r, w] : merged) out.votes_.push_back({r, w});
    return out;
  }

 private:
  int m_;
  std::vector<Vote> votes_;
};

/// Antisymmetric edge weights stored as the upper triangle, i.e. a vector in
/// R^{m(m-1)/2} indexed by pairs (i, j) with i < j.
template <typename Scalar = double>
class WeightedMajorityGraph {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit WeightedMajorityGraph(int m = 0) : m_(m), w_(Vector::Zero(pair_count(m))) {}
  WeightedMajorityGraph(int m, Vector weights) : m_(m), w_(std::move(weights)) {
    if (w_.size() != pair_count(m)) throw std::invalid_argument("WeightedMajorityGraph: wrong vector length");
  }

  static Eigen::Index pair_count(int m) { return static_cast<Eigen::Index>(m) * (m - 1) / 2; }
  static Eigen::Index pair_index(int m, Alternative i, Alternative j) {
    // i < j required
    return static_cast<Eigen::Index>(i) * (2 * m - i - 1) / 2 + (j - i - 1);
  }

  int num_alternatives() const { return m_; }
  const Vector& vector() const { return w_; }
  Vector& vector() { return w_; }

  /// Winning margin w(a, b) = -w(b, a).
  Scalar operator()(Alternative a, Alternative b) const {
    if (a == b) return Scalar(0);
    return a < b ? w_(pair_index(m_, a, b)) : Scalar(-w_(pair_index(m_, b, a)));
  }

  void set(Alternative a, Alternative b, const Scalar& value) {
    check_pair(a, b);
    if (a < b) w_(pair_index(m_, a, b)) = value;
    else w_(pair_index(m_, b, a)) = -value;
  }

  void add(Alternative a, Alternative b, const Scalar& value) {
    check_pair(a, b);
    if (a < b) w_(pair_index(m_, a, b)) += value;
    else w_(pair_index(m_, b, a)) -= value;
  }

  /// s(a) = sum_b w(a, b).
  Scalar row_sum(Alternative a) const {
    Scalar s(0);
    for (Alternative b = 0; b < m_; ++b) s += (*this)(a, b);
    return s;
  }

  Scalar max_abs() const {
    Scalar best(0);
    for (Eigen::Index k = 0; k < w_.size(); ++k) {
      Scalar v = scalar_abs(w_(k));
      if (v > best) best = v;
    }
    return best;
  }

  bool is_zero() const { return max_abs() <= Scalar(tolerance<Scalar>()); }

  template <typename Other>
  WeightedMajorityGraph<Other> cast() const {
    typename WeightedMajorityGraph<Other>::Vector out(w_.size());
    for (Eigen::Index k = 0; k < w_.size(); ++k) {
      if constexpr (std::is_same_v<Other, double>) out(k) = to_double(w_(k));
      else out(k) = Other(w_(k));
    }
    return WeightedMajorityGraph<Other>(m_, std::move(out));
  }

  WeightedMajorityGraph& operator+=(const WeightedMajorityGraph& rhs) {
    check_same(rhs);
    w_ += rhs.w_;
    return *this;
  }
  WeightedMajorityGraph& operator-=(const WeightedMajorityGraph& rhs) {
    check_same(rhs);
    w_ -= rhs.w_;
    return *this;
  }
  WeightedMajorityGraph& operator*=(const Scalar& s) {
    w_ *= s;
    return *this;
  }

  friend WeightedMajorityGraph operator+(WeightedMajorityGraph lhs, const WeightedMajorityGraph& rhs) {
    return lhs += rhs;
  }
  friend WeightedMajorityGraph operator-(WeightedMajorityGraph lhs, const WeightedMajorityGraph& rhs) {
    return lhs -= rhs;
  }
  friend WeightedMajorityGraph operator*(const Scalar& s, WeightedMajorityGraph g) { return g *= s; }
  friend WeightedMajorityGraph operator*(WeightedMajorityGraph g, const Scalar& s) { return g *= s; }
  WeightedMajorityGraph operator-() const { return WeightedMajorityGraph(m_, Vector(-w_)); }

  friend bool operator==(const WeightedMajorityGraph& a, const WeightedMajorityGraph& b) {
    return a.m_ == b.m_ && a.w_ == b.w_;
  }

 private:
  void check_pair(Alternative a, Alternative b) const {
    if (a == b || a < 0 || b < 0 || a >= m_ || b >= m_) throw std::out_of_range("WeightedMajorityGraph: bad pair");
  }
  void check_same(const WeightedMajorityGraph& rhs) const {
    if (rhs.m_ != m_) throw std::invalid_argument("WeightedMajorityGraph: mismatched m");
  }

  int m_;
  Vector w_;
};

using Wmg = WeightedMajorityGraph<double>;
using ExactWmg = WeightedMajorityGraph<Rational>;

/// Unweighted directed graph without self-loops.
class Digraph {
 public:
  explicit Digraph(int m = 0) : m_(m), adj_(static_cast<std::size_t>(m) * m, 0) {}

  int num_vertices() const { return m_; }
  std::size_t num_edges() const { return edge_count_; }

  void add_edge(Alternative a, Alternative b);
  void remove_edge(Alternative a, Alternative b);
  bool has_edge(Alternative a, Alternative b) const { return adj_[index(a, b)] != 0; }

  /// Edges in lexicographic order.
  std::vector<std::pair<Alternative, Alternative>> edges() const;

  int out_degree(Alternative a) const;
  int in_degree(Alternative a) const;

  bool is_balanced() const;
  bool is_tournament() const;
  bool has_antiparallel_pair() const;

  bool operator==(const Digraph&) const = default;

 private:
  std::size_t index(Alternative a, Alternative b) const { return static_cast<std::size_t>(a) * m_ + b; }

  int m_;
  std::vector<char> adj_;
  std::size_t edge_count_ = 0;
};

// ---------------------------------------------------------------------------
// Kendall-tau machinery

/// Number of unordered pairs ordered oppositely by r and w.
int kt_distance(const Ranking& r, const Ranking& w);

/// Number of edges (a, b) in g with b ranked above a.
int kt_to_digraph(const Ranking& r, const Digraph& g);

/// N(a, b) = total weight of votes ranking a above b.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> pairwise_tally(const Profile<Scalar>& p) {
  const int m = p.num_alternatives();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> n =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(m, m);
  for (const auto& vote : p.votes()) {
    const auto order = vote.ranking.order();
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) n(order[i], order[j]) += vote.weight;
  }
  return n;
}

/// Kemeny score through the tally: sum over a >_R b of N(b, a).
template <typename Scalar>
Scalar kemeny_score_from_tally(const Ranking& r,
                               const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& tally) {
  Scalar score(0);
  const auto order = r.order();
  for (int i = 0; i < r.size(); ++i)
    for (int j = i + 1; j < r.size(); ++j) score += tally(order[j], order[i]);
  return score;
}

template <typename Scalar>
Scalar kemeny_score(const Ranking& r, const Profile<Scalar>& p) {
  if (r.size() != p.num_alternatives()) throw std::invalid_argument("kemeny_score: mismatched m");
  Scalar score(0);
  for (const auto& vote : p.votes()) score += vote.weight * Scalar(kt_distance(r, vote.ranking));
  return score;
}

template <typename Scalar>
WeightedMajorityGraph<Scalar> wmg(const Profile<Scalar>& p) {
  const int m = p.num_alternatives();
  WeightedMajorityGraph<Scalar> g(m);
  for (const auto& vote : p.votes()) {
    const auto order = vote.ranking.order();
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) g.add(order[i], order[j], vote.weight);
  }
  return g;
}

/// Edge (a, b) iff w(a, b) > 0; ties are dropped.
template <typename Scalar>
Digraph umg(const WeightedMajorityGraph<Scalar>& g) {
  const int m = g.num_alternatives();
  Digraph out(m);
  for (Alternative a = 0; a < m; ++a)
    for (Alternative b = a + 1; b < m; ++b) {
      const Scalar w = g(a, b);
      if (w > Scalar(0)) out.add_edge(a, b);
      else if (w < Scalar(0)) out.add_edge(b, a);
    }
  return out;
}

template <typename Scalar>
int slater_score(const Ranking& r, const Profile<Scalar>& p) {
  if (r.size() != p.num_alternatives()) throw std::invalid_argument("slater_score: mismatched m");
  return kt_to_digraph(r, umg(wmg(p)));
}

/// Average KT distance over ordered pairs of distinct voters,
/// (1 / (n(n-1))) * sum_{i != j} KT(R_i, R_j). Computed from the tally:
/// the ordered-pair sum equals 2 * sum_{a<b} N(a,b) N(b,a).
template <typename Scalar>
Scalar avg_kt(const Profile<Scalar>& p) {
  const Scalar n = p.total_weight();
  if (n < Scalar(2)) throw std::invalid_argument("avg_kt: needs at least two votes");
  const auto tally = pairwise_tally(p);
  Scalar sum(0);
  for (int a = 0; a < p.num_alternatives(); ++a)
    for (int b = a + 1; b < p.num_alternatives(); ++b) sum += tally(a, b) * tally(b, a);
  return Scalar(2) * sum / (n * (n - Scalar(1)));
}

// ---------------------------------------------------------------------------
// Permutation actions: alternative a is relabelled sigma(a).

Ranking permute(const Permutation& sigma, const Ranking& r);
Digraph permute(const Permutation& sigma, const Digraph& g);

template <typename Scalar>
Profile<Scalar> permute(const Permutation& sigma, const Profile<Scalar>& p) {
  if (sigma.size() != p.num_alternatives()) throw std::invalid_argument("permute: mismatched m");
  Profile<Scalar> out(p.num_alternatives());
  for (const auto& vote : p.votes()) out.add(permute(sigma, vote.ranking), vote.weight);
  return out;
}

template <typename Scalar>
WeightedMajorityGraph<Scalar> permute(const Permutation& sigma, const WeightedMajorityGraph<Scalar>& g) {
  const int m = g.num_alternatives();
  if (sigma.size() != m) throw std::invalid_argument("permute: mismatched m");
  WeightedMajorityGraph<Scalar> out(m);
  for (Alternative a = 0; a < m; ++a)
    for (Alternative b = a + 1; b < m; ++b) out.set(sigma(a), sigma(b), g(a, b));
  return out;
}

/// Digraph with unit weight +1 on each edge (a, b), antisymmetrically.
template <typename Scalar>
WeightedMajorityGraph<Scalar> to_wmg(const Digraph& g) {
  WeightedMajorityGraph<Scalar> out(g.num_vertices());
  for (auto [a, b] : g.edges()) out.add(a, b, Scalar(1));
  return out;
}

/// All m! rankings in lexicographic order.
std::vector<Ranking> all_rankings(int m);

}  // namespace smoothrank

#endif  // SMOOTHRANK_CORE_HPP
