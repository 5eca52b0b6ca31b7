#ifndef SMOOTHRANK_GADGETS_HPP
#define SMOOTHRANK_GADGETS_HPP

#include "smoothrank/graph_algebra.hpp"
#include "smoothrank/models.hpp"
#include "smoothrank/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace smoothrank {

// ---------------------------------------------------------------------------
// Permutation orbits

/// O_{G3c} for the triangle a1 -> a2 -> a3 -> a1: sigma1^i o sigma2^t and
/// sigma1^i o sigma2^t o eta2 for i = 1..3, t = 1..m-3, where sigma1 rotates
/// {a1, a2, a3}, sigma2 rotates {a4..am} and eta2 reverses {a4..am}. For
/// m <= 5 this is the same multiset as {sigma1^i o sigma2^{+-t}}; the
/// reflection is what cancels the edges inside {a4..am} for larger m. At
/// m = 3 the orbit is the three rotations of the triangle.
std::vector<Permutation> three_cycle_orbit(int m);

/// O_a: sigma_a^i and sigma_a^i o eta_a for i = 1..m-1, where sigma_a fixes a
/// and rotates the others in increasing index order and eta_a reverses them.
std::vector<Permutation> cocycle_orbit(Alternative a, int m);

/// Permutation sending a1, a2, a3 to t[0], t[1], t[2]; the remaining
/// alternatives keep their relative order.
Permutation triangle_relabel(const Triangle& t, int m);

template <typename Param>
ParameterProfile<Param> apply_orbit(const std::vector<Permutation>& orbit, const ParameterProfile<Param>& x) {
  ParameterProfile<Param> out(x.num_alternatives());
  for (const auto& sigma : orbit)
    for (const auto& e : x.entries()) out.add(permute(sigma, e.param), e.weight);
  return out;
}

template <typename Param>
ParameterProfile<Param> single(const Param& theta) {
  ParameterProfile<Param> p(theta.num_alternatives());
  p.add(theta);
  return p;
}

/// Q^Theta_{G3c}: triangle edges 2(m-3)alpha, edges from {a1,a2,a3} to the
/// rest beta, nothing inside {a4..am}.
template <typename Param>
ParameterProfile<Param> orbit_3cycle(const Param& theta) {
  if (theta.num_alternatives() < 3) throw std::invalid_argument("orbit_3cycle: m must be >= 3");
  return apply_orbit(three_cycle_orbit(theta.num_alternatives()), single(theta));
}

/// Co-cycle centred at a with every edge weight 2 * sum_{b != a} w_X(a, b).
template <typename Param>
ParameterProfile<Param> orbit_cocycle(Alternative a, const ParameterProfile<Param>& x) {
  if (x.num_alternatives() < 3) throw std::invalid_argument("orbit_cocycle: m must be >= 3");
  return apply_orbit(cocycle_orbit(a, x.num_alternatives()), x);
}

template <typename Param>
ParameterProfile<Param> orbit_cocycle(Alternative a, const Param& theta) {
  return orbit_cocycle(a, single(theta));
}

// ---------------------------------------------------------------------------
// Witness quantities of a single parameter

/// alpha = WMG(theta) . G3c with G3c = a1 -> a2 -> a3 -> a1.
template <typename Param>
typename Param::Scalar witness_alpha(const Param& theta) {
  using S = typename Param::Scalar;
  return dot(expected_wmg(theta), three_cycle<S>(0, 1, 2, theta.num_alternatives()));
}

/// beta = 2 * sum over {a1,a2,a3} x {a4..am} of w(d1, d2).
template <typename Param>
typename Param::Scalar witness_beta(const Param& theta) {
  using S = typename Param::Scalar;
  const auto g = expected_wmg(theta);
  S total(0);
  for (Alternative i = 0; i < 3; ++i)
    for (Alternative d = 3; d < theta.num_alternatives(); ++d) total += g(i, d);
  return S(2) * total;
}

/// gamma = WMG(theta) . cocycle(a1).
template <typename Param>
typename Param::Scalar witness_gamma(const Param& theta) {
  using S = typename Param::Scalar;
  return dot(expected_wmg(theta), cocycle<S>(0, theta.num_alternatives()));
}

// ---------------------------------------------------------------------------
// Gadget profiles

/// P^Theta_{G3c}: Q / (2(m-3)alpha) plus, when beta != 0,
/// 1 / (4(m-3)^2 alpha) copies of sigma_{a1<->d}(O_{a1}(Q)) for each
/// d in {a4..am}. Its expected WMG is the unit triangle a1 -> a2 -> a3.
template <typename Param>
ParameterProfile<Param> build_p_g3c(const Param& theta) {
  using S = typename Param::Scalar;
  const int m = theta.num_alternatives();
  const S alpha = witness_alpha(theta);
  if (!(to_double(alpha) > tolerance<S>())) throw std::domain_error("build_p_g3c: alpha must be positive");
  const auto q = orbit_3cycle(theta);
  ParameterProfile<Param> out(m);
  if (m == 3) {
    out.append(q, S(1) / alpha);
    return out.compacted();
  }
  out.append(q, S(1) / (S(2 * (m - 3)) * alpha));
  const S beta = witness_beta(theta);
  if (scalar_abs(beta) > S(tolerance<S>())) {
    const auto p1 = orbit_cocycle(0, q);
    const S scale = S(1) / (S(4 * (m - 3) * (m - 3)) * alpha);
    for (Alternative d = 3; d < m; ++d) out.append(permute(Permutation::transposition(m, 0, d), p1), scale);
  }
  return out.compacted();
}

template <typename Param>
ParameterProfile<Param> relabel_triangle_gadget(const ParameterProfile<Param>& g3c, const Triangle& t) {
  return permute(triangle_relabel(t, g3c.num_alternatives()), g3c);
}

/// Parameter profile whose expected WMG equals G (unit weights) for a balanced
/// digraph G: Eulerian cycle decomposition, fan triangulation, one relabelled
/// triangle gadget per triangle.
template <typename Param>
ParameterProfile<Param> build_p_g_kemeny(const Digraph& g, const Param& theta_3c) {
  const int m = g.num_vertices();
  if (theta_3c.num_alternatives() != m) throw std::invalid_argument("build_p_g_kemeny: mismatched m");
  if (g.has_antiparallel_pair()) throw std::invalid_argument("build_p_g_kemeny: antiparallel edges");
  const auto cycles = eulerian_cycle_decomposition(g);
  ParameterProfile<Param> out(m);
  if (cycles.empty()) return out;
  const auto base = build_p_g3c(theta_3c);
  for (const auto& cycle : cycles)
    for (const auto& t : cycle_to_triangles(cycle)) out.append(relabel_triangle_gadget(base, t));
  return out.compacted();
}

/// Unit co-cycle at `center` from the co-cycle witness: O_center applied to
/// sigma_{a1<->center}(theta_co), scaled by 1/(2 gamma).
template <typename Param>
ParameterProfile<Param> unit_cocycle_gadget(Alternative center, const Param& theta_co) {
  using S = typename Param::Scalar;
  const int m = theta_co.num_alternatives();
  const S gamma = witness_gamma(theta_co);
  if (!(to_double(gamma) > tolerance<S>())) throw std::domain_error("unit_cocycle_gadget: gamma must be positive");
  ParameterProfile<Param> out(m);
  out.append(orbit_cocycle(center, permute(Permutation::transposition(m, 0, center), theta_co)),
             S(1) / (S(2) * gamma));
  return out;
}

/// Parameter profile whose expected WMG is m * G for a tournament G; every
/// edge is realised by the single-edge construction.
template <typename Param>
ParameterProfile<Param> build_p_g_slater(const Digraph& g, const Param& theta_3c, const Param& theta_co) {
  const int m = g.num_vertices();
  if (!g.is_tournament()) throw std::invalid_argument("build_p_g_slater: graph is not a tournament");
  if (theta_3c.num_alternatives() != m || theta_co.num_alternatives() != m)
    throw std::invalid_argument("build_p_g_slater: mismatched m");
  const auto base = build_p_g3c(theta_3c);
  std::vector<ParameterProfile<Param>> unit_cocycles;
  for (Alternative a = 0; a < m; ++a) unit_cocycles.push_back(unit_cocycle_gadget(a, theta_co).compacted());
  ParameterProfile<Param> out(m);
  for (auto [b, c] : g.edges()) {
    const auto gadget = edge_gadget_graphs(b, c, m);
    for (const auto& t : gadget.triangles) out.append(relabel_triangle_gadget(base, t));
    for (Alternative center : gadget.cocycle_centers) out.append(unit_cocycles[center]);
  }
  return out.compacted();
}

/// floor(weight * m^K / |P|) copies of each parameter type.
template <typename Param>
ParameterProfile<Param> round_to_integral(const ParameterProfile<Param>& p, int K,
                                          unsigned long long max_voters = 1'000'000) {
  using S = typename Param::Scalar;
  const int m = p.num_alternatives();
  const S total = p.total_weight();
  if (!(total > S(0))) throw std::invalid_argument("round_to_integral: empty parameter profile");
  if (K < 1) throw std::invalid_argument("round_to_integral: K must be >= 1");
  if (std::pow(static_cast<double>(m), K) > static_cast<double>(max_voters))
    throw std::length_error("round_to_integral: m^K exceeds the voter cap");
  const S scale = ipow(S(m), K) / total;
  ParameterProfile<Param> out(m);
  const auto merged = p.compacted();
  for (const auto& e : merged.entries()) {
    const auto copies = floor_count(S(e.weight * scale));
    if (copies > 0) out.add(e.param, S(copies));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Structural checks of every gadget against its expected WMG

struct ClaimCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

template <typename Scalar>
bool wmg_matches(const WeightedMajorityGraph<Scalar>& got, const WeightedMajorityGraph<Scalar>& want) {
  const double scale = std::max(1.0, to_double(want.max_abs()));
  return to_double((got - want).max_abs()) <= tolerance<Scalar>() * scale;
}

/// Unit edge a -> b.
template <typename Scalar>
WeightedMajorityGraph<Scalar> unit_edge(Alternative a, Alternative b, int m) {
  WeightedMajorityGraph<Scalar> g(m);
  g.add(a, b, Scalar(1));
  return g;
}

/// Runs the orbit, triangle, co-cycle and single-edge checks for one witness
/// pair. Exact when Param::Scalar is Rational.
template <typename Param>
std::vector<ClaimCheck> verify_gadget_claims(const Param& theta_3c, const Param& theta_co) {
  using S = typename Param::Scalar;
  using G = WeightedMajorityGraph<S>;
  const int m = theta_3c.num_alternatives();
  std::vector<ClaimCheck> out;
  auto record = [&](std::string name, bool ok, std::string detail = {}) {
    out.push_back({std::move(name), ok, std::move(detail)});
  };
  const S alpha = witness_alpha(theta_3c);
  const S beta = witness_beta(theta_3c);
  const S gamma = witness_gamma(theta_co);
  const G tri = three_cycle<S>(0, 1, 2, m);

  const auto orbit = three_cycle_orbit(m);
  record("orbit_3cycle size", static_cast<int>(orbit.size()) == (m == 3 ? 3 : 6 * (m - 3)),
         std::to_string(orbit.size()) + " permutations");

  const auto q = orbit_3cycle(theta_3c);
  G want_q = (m == 3 ? alpha : S(2 * (m - 3)) * alpha) * tri;
  for (Alternative i = 0; i < 3; ++i)
    for (Alternative d = 3; d < m; ++d) want_q.add(i, d, beta);
  record("orbit_3cycle: triangle 2(m-3)alpha, cross edges beta, inner block 0", wmg_matches(expected_wmg(q), want_q),
         "alpha=" + std::to_string(to_double(alpha)) + " beta=" + std::to_string(to_double(beta)));

  bool single_ok = true;
  for (Alternative a = 0; a < m; ++a) {
    const G want = S(2) * expected_wmg(theta_3c).row_sum(a) * cocycle<S>(a, m);
    single_ok = single_ok && wmg_matches(expected_wmg(orbit_cocycle(a, theta_3c)), want);
  }
  record("orbit_cocycle(a, theta): co-cycle of weight 2 sum_b w(a, b)", single_ok);

  if (m >= 4) {
    const G want = S(2 * (m - 3)) * beta * cocycle<S>(0, m);
    record("orbit_cocycle(a1, Q): co-cycle of weight 2(m-3)beta", wmg_matches(expected_wmg(orbit_cocycle(0, q)), want));
  }

  const auto p3c = build_p_g3c(theta_3c);
  record("P_G3c: unit triangle a1 -> a2 -> a3", wmg_matches(expected_wmg(p3c), tri),
         std::to_string(p3c.size()) + " types");

  record("orbit_cocycle(a1, theta_co): co-cycle of weight 2 gamma",
         wmg_matches(expected_wmg(orbit_cocycle(0, theta_co)), S(2) * gamma * cocycle<S>(0, m)),
         "gamma=" + std::to_string(to_double(gamma)));
  bool unit_ok = true;
  for (Alternative c = 0; c < m; ++c)
    unit_ok = unit_ok && wmg_matches(expected_wmg(unit_cocycle_gadget(c, theta_co)), cocycle<S>(c, m));
  record("unit co-cycle gadget at every center", unit_ok);

  bool edges_ok = true;
  for (Alternative b = 0; b < m; ++b)
    for (Alternative c = 0; c < m; ++c)
      if (b != c) edges_ok = edges_ok && edge_gadget_wmg<S>(edge_gadget_graphs(b, c, m), m) == S(m) * unit_edge<S>(b, c, m);
  record("edge gadget graphs sum to m copies of b -> c", edges_ok);

  // a2 -> a1 realised from parameters.
  const auto gadget = edge_gadget_graphs(1, 0, m);
  ParameterProfile<Param> edge(m);
  for (const auto& t : gadget.triangles) edge.append(relabel_triangle_gadget(p3c, t));
  for (Alternative c : gadget.cocycle_centers) edge.append(unit_cocycle_gadget(c, theta_co));
  record("single-edge parameter profile equals m copies of a2 -> a1",
         wmg_matches(expected_wmg(edge), S(m) * unit_edge<S>(1, 0, m)));
  return out;
}

// ---------------------------------------------------------------------------
// Witness verification

enum class ModelFamily { Mallows, PlackettLuce };

std::string to_string(ModelFamily family);
ModelFamily parse_model_family(const std::string& name);

struct WitnessReport {
  ModelFamily family = ModelFamily::Mallows;
  std::vector<int> ms;
  std::vector<double> alpha;  ///< margin form, WMG(pi) . G3c
  /// Probability form 2 Pr(a1 > a2) - Pr(a1 > a3) (Mallows only).
  std::vector<double> alpha_probability_form;
  std::vector<double> beta;
  std::vector<double> gamma;  ///< WMG(pi) . cocycle(a1)
  int k = 0;
  int k_star = 0;
  double A = 0.0;
  double B = 0.0;
  bool condition_iii = false;
  bool condition_iv = false;
};

/// Mallows: witness (a1 > ... > am, lo) with lo < 1. Plackett-Luce: utilities
/// proportional to (hi, (lo+hi)/2, lo, ..., lo).
WitnessReport verify_witness(ModelFamily family, double lo, double hi, int m_min = 3, int m_max = 8);

// ---------------------------------------------------------------------------
// Randomised reduction from feedback arc set

enum class FasKind { Eulerian, Tournament };

struct FasInstance {
  Digraph graph;
  int t = 0;
  FasKind kind = FasKind::Eulerian;

  /// Throws std::invalid_argument if the graph does not match its kind.
  void validate() const;
};

/// Minimum number of back edges over all rankings (exhaustive).
int min_feedback_arc_set(const Digraph& g);

struct ReductionConfig {
  /// Scaling exponent; defaults to 11 + 2k (Eulerian) or 7 + 2 max(k, k*)
  /// (tournament), lowered until m^K fits max_voters.
  std::optional<int> K;
  std::uint64_t seed = 0;
  double budget_multiplier = 3.0;
  /// Defaults to kemeny-brute for Eulerian and slater-brute for tournaments.
  std::optional<SolverKind> solver;
  ModelFamily family = ModelFamily::Mallows;
  double phi = 0.5;
  double theta_lo = 0.1;
  double theta_hi = 0.2;
  int k = 0;
  int k_star = 0;
  unsigned long long max_voters = 1'000'000;
  int pilot_solves = 5;
};

enum class Answer { No, Yes };

struct TrialRecord {
  std::uint64_t seed = 0;
  int K = 0;
  unsigned long long n = 0;
  std::string solver;
  bool finished = false;
  double elapsed_ms = 0.0;
  std::uint64_t op_count = 0;
  Answer answer = Answer::No;
  int back_edges = -1;  ///< -1 when the solver did not finish
};

/// Builds P^{Theta*} once; trials then sample, solve under the op budget and
/// check the returned ranking against the instance.
class ReductionPipeline {
 public:
  ReductionPipeline(FasInstance instance, ReductionConfig config);

  int K() const { return K_; }
  unsigned long long voters() const { return voters_; }
  std::size_t type_count() const;
  SolverKind solver() const { return solver_; }
  const FasInstance& instance() const { return instance_; }

  /// Median op_count over the configured number of pilot solves.
  std::uint64_t estimate_expected_ops(Rng& rng);
  std::uint64_t expected_ops() const { return expected_ops_; }

  TrialRecord run_trial(Rng& rng, std::uint64_t seed_label = 0);

 private:
  Profile<double> sample(Rng& rng) const;

  FasInstance instance_;
  ReductionConfig config_;
  SolverKind solver_;
  int K_ = 0;
  unsigned long long voters_ = 0;
  std::uint64_t expected_ops_ = 0;
  std::variant<ParameterProfile<MallowsParam<double>>, ParameterProfile<PlackettLuceParam<double>>> integral_;
};

/// One run of the randomised decision procedure.
Answer rp_reduction_run(const FasInstance& instance, const ReductionConfig& config, Rng& rng);

/// `trials` independent runs; trial i uses stream i + 1 of config.seed and the
/// budget comes from pilot solves on stream 0.
std::vector<TrialRecord> run_reduction_trials(const FasInstance& instance, const ReductionConfig& config, int trials);

}  // namespace smoothrank

#endif  // SMOOTHRANK_GADGETS_HPP
