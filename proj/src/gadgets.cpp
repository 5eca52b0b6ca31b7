#include "smoothrank/gadgets.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace smoothrank {

namespace {

/// Rotation of `members` (each to the next one) as a permutation of {0..m-1}.
Permutation rotation(int m, const std::vector<Alternative>& members) {
  if (members.size() < 2) return Permutation::identity(m);
  return Permutation::cycle(m, members);
}

/// Reverses the order of `members`, fixing everything else.
Permutation reflection(int m, const std::vector<Alternative>& members) {
  std::vector<Alternative> map(m);
  std::iota(map.begin(), map.end(), 0);
  const std::size_t k = members.size();
  for (std::size_t s = 0; s < k; ++s) map[members[s]] = members[k - 1 - s];
  return Permutation(std::move(map));
}

}  // namespace

std::vector<Permutation> three_cycle_orbit(int m) {
  if (m < 3) throw std::invalid_argument("three_cycle_orbit: m must be >= 3");
  const Permutation sigma1 = rotation(m, {0, 1, 2});
  std::vector<Permutation> out;
  if (m == 3) {
    for (int i = 1; i <= 3; ++i) out.push_back(sigma1.pow(i));
    return out;
  }
  std::vector<Alternative> rest(m - 3);
  std::iota(rest.begin(), rest.end(), 3);
  const Permutation sigma2 = rotation(m, rest);
  const Permutation eta2 = reflection(m, rest);
  out.reserve(6 * (m - 3));
  for (int i = 1; i <= 3; ++i)
    for (int t = 1; t <= m - 3; ++t) {
      const Permutation base = sigma1.pow(i) * sigma2.pow(t);
      out.push_back(base);
      out.push_back(base * eta2);
    }
  return out;
}

std::vector<Permutation> cocycle_orbit(Alternative a, int m) {
  if (m < 3) throw std::invalid_argument("cocycle_orbit: m must be >= 3");
  if (a < 0 || a >= m) throw std::out_of_range("cocycle_orbit: bad center");
  std::vector<Alternative> others;
  for (Alternative b = 0; b < m; ++b)
    if (b != a) others.push_back(b);
  const Permutation sigma = rotation(m, others);
  const Permutation eta = reflection(m, others);
  std::vector<Permutation> out;
  out.reserve(2 * (m - 1));
  for (int i = 1; i <= m - 1; ++i) {
    const Permutation base = sigma.pow(i);
    out.push_back(base);
    out.push_back(base * eta);
  }
  return out;
}

Permutation triangle_relabel(const Triangle& t, int m) {
  std::vector<Alternative> map(m, -1);
  std::vector<char> used(m, 0);
  for (int s = 0; s < 3; ++s) {
    if (t[s] < 0 || t[s] >= m || used[t[s]]) throw std::invalid_argument("triangle_relabel: bad triangle");
    map[s] = t[s];
    used[t[s]] = 1;
  }
  Alternative next = 0;
  for (Alternative a = 3; a < m; ++a) {
    while (used[next]) ++next;
    map[a] = next++;
  }
  return Permutation(std::move(map));
}

std::string to_string(ModelFamily family) {
  return family == ModelFamily::Mallows ? "mallows" : "pl";
}

ModelFamily parse_model_family(const std::string& name) {
  if (name == "mallows") return ModelFamily::Mallows;
  if (name == "pl" || name == "plackett-luce") return ModelFamily::PlackettLuce;
  throw std::invalid_argument("unknown model family '" + name + "'");
}

namespace {

/// Smallest k >= 0 such that x(m) * m^k does not shrink across the tested m,
/// read off a least-squares slope of log x against log m.
int fit_exponent(const std::vector<int>& ms, const std::vector<double>& xs) {
  if (ms.size() < 2) return 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(ms.size());
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const double x = std::log(ms[i]);
    const double y = std::log(xs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return std::max(0, static_cast<int>(std::ceil(-slope - 0.25)));
}

/// Half the smallest x(m) * m^k over the tested m.
double fit_constant(const std::vector<int>& ms, const std::vector<double>& xs, int k) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ms.size(); ++i) best = std::min(best, xs[i] * std::pow(ms[i], k));
  return 0.5 * best;
}

bool holds_for_all(const std::vector<int>& ms, const std::vector<double>& xs, double c, int k) {
  for (std::size_t i = 0; i < ms.size(); ++i)
    if (!(xs[i] > c / std::pow(ms[i], k))) return false;
  return true;
}

}  // namespace

WitnessReport verify_witness(ModelFamily family, double lo, double hi, int m_min, int m_max) {
  if (m_min < 3 || m_max < m_min) throw std::invalid_argument("verify_witness: bad m range");
  if (!(lo > 0) || hi < lo) throw std::invalid_argument("verify_witness: bad bounds");
  WitnessReport report;
  report.family = family;
  for (int m = m_min; m <= m_max; ++m) {
    report.ms.push_back(m);
    if (family == ModelFamily::Mallows) {
      if (!(lo < 1)) throw std::domain_error("verify_witness: Mallows witness needs phi < 1");
      const MallowsParam<double> theta(Ranking::identity(m), lo);
      report.alpha.push_back(witness_alpha(theta));
      report.beta.push_back(witness_beta(theta));
      report.gamma.push_back(witness_gamma(theta));
      report.alpha_probability_form.push_back(2.0 * mallows_pairwise(lo, 1) - mallows_pairwise(lo, 2));
    } else {
      if (!(hi > lo)) throw std::domain_error("verify_witness: Plackett-Luce witness needs lo < hi");
      const auto theta = pl_witness(m, lo, hi);
      report.alpha.push_back(witness_alpha(theta));
      report.beta.push_back(witness_beta(theta));
      report.gamma.push_back(witness_gamma(theta));
    }
  }
  const bool alpha_positive = std::all_of(report.alpha.begin(), report.alpha.end(), [](double x) { return x > 0; });
  const bool gamma_positive = std::all_of(report.gamma.begin(), report.gamma.end(), [](double x) { return x > 0; });
  if (alpha_positive) {
    report.k = fit_exponent(report.ms, report.alpha);
    report.A = fit_constant(report.ms, report.alpha, report.k);
    report.condition_iii = holds_for_all(report.ms, report.alpha, report.A, report.k);
  }
  if (gamma_positive) {
    report.k_star = fit_exponent(report.ms, report.gamma);
    report.B = fit_constant(report.ms, report.gamma, report.k_star);
    report.condition_iv = holds_for_all(report.ms, report.gamma, report.B, report.k_star);
  }
  return report;
}

void FasInstance::validate() const {
  if (t < 0) throw std::invalid_argument("FasInstance: t must be nonnegative");
  if (graph.num_vertices() < 3) throw std::invalid_argument("FasInstance: need at least 3 vertices");
  if (kind == FasKind::Eulerian) {
    if (!graph.is_balanced()) throw std::invalid_argument("FasInstance: graph is not Eulerian");
    if (graph.has_antiparallel_pair()) throw std::invalid_argument("FasInstance: antiparallel edges");
  } else if (!graph.is_tournament()) {
    throw std::invalid_argument("FasInstance: graph is not a tournament");
  }
}

int min_feedback_arc_set(const Digraph& g) {
  const int m = g.num_vertices();
  if (m > 10) throw std::length_error("min_feedback_arc_set: m too large for enumeration");
  std::vector<Alternative> order(m);
  std::iota(order.begin(), order.end(), 0);
  int best = std::numeric_limits<int>::max();
  do {
    best = std::min(best, kt_to_digraph(Ranking(order), g));
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

namespace {

template <typename Param>
ParameterProfile<Param> target_profile(const FasInstance& inst, const Param& theta3c, const Param& theta_co) {
  return inst.kind == FasKind::Eulerian ? build_p_g_kemeny(inst.graph, theta3c)
                                        : build_p_g_slater(inst.graph, theta3c, theta_co);
}

}  // namespace

ReductionPipeline::ReductionPipeline(FasInstance instance, ReductionConfig config)
    : instance_(std::move(instance)), config_(std::move(config)) {
  instance_.validate();
  const int m = instance_.graph.num_vertices();
  solver_ = config_.solver.value_or(instance_.kind == FasKind::Eulerian ? SolverKind::KemenyBrute
                                                                         : SolverKind::SlaterBrute);
  if (config_.K) {
    K_ = *config_.K;
  } else {
    K_ = instance_.kind == FasKind::Eulerian ? 11 + 2 * config_.k : 7 + 2 * std::max(config_.k, config_.k_star);
    while (K_ > 1 && std::pow(static_cast<double>(m), K_) > static_cast<double>(config_.max_voters)) --K_;
  }
  if (K_ < 1) throw std::invalid_argument("ReductionConfig: K must be >= 1");
  if (config_.budget_multiplier <= 0) throw std::invalid_argument("ReductionConfig: budget multiplier must be positive");

  auto finish = [&](auto profile, auto uniform) {
    // An edgeless graph has the zero WMG as target.
    if (profile.size() == 0) profile.add(uniform);
    auto rounded = round_to_integral(profile, K_, config_.max_voters);
    voters_ = static_cast<unsigned long long>(rounded.total_weight());
    integral_ = std::move(rounded);
  };
  if (config_.family == ModelFamily::Mallows) {
    const MallowsParam<double> theta(Ranking::identity(m), config_.phi);
    finish(target_profile(instance_, theta, theta), MallowsParam<double>(Ranking::identity(m), 1.0));
  } else {
    const auto theta = pl_witness(m, config_.theta_lo, config_.theta_hi);
    finish(target_profile(instance_, theta, theta), PlackettLuceParam<double>(std::vector<double>(m, 1.0 / m)));
  }
}

std::size_t ReductionPipeline::type_count() const {
  return std::visit([](const auto& p) { return p.size(); }, integral_);
}

Profile<double> ReductionPipeline::sample(Rng& rng) const {
  return std::visit([&](const auto& p) { return sample_profile_compact(p, rng); }, integral_);
}

std::uint64_t ReductionPipeline::estimate_expected_ops(Rng& rng) {
  const int pilots = std::max(1, config_.pilot_solves);
  std::vector<std::uint64_t> ops;
  for (int i = 0; i < pilots; ++i) ops.push_back(solve(solver_, sample(rng)).op_count);
  std::nth_element(ops.begin(), ops.begin() + pilots / 2, ops.end());
  expected_ops_ = std::max<std::uint64_t>(1, ops[pilots / 2]);
  return expected_ops_;
}

TrialRecord ReductionPipeline::run_trial(Rng& rng, std::uint64_t seed_label) {
  if (expected_ops_ == 0) throw std::logic_error("ReductionPipeline: estimate_expected_ops must run first");
  TrialRecord rec;
  rec.seed = seed_label;
  rec.K = K_;
  rec.n = voters_;
  rec.solver = to_string(solver_);
  const auto profile = sample(rng);
  Budget budget;
  budget.ops = static_cast<std::uint64_t>(std::ceil(config_.budget_multiplier * static_cast<double>(expected_ops_)));
  const auto outcome = solve_with_budget(solver_, profile, budget);
  if (const auto* res = std::get_if<SolveResult>(&outcome)) {
    rec.finished = true;
    rec.elapsed_ms = res->elapsed.count();
    rec.op_count = res->op_count;
    rec.back_edges = kt_to_digraph(res->ranking, instance_.graph);
    rec.answer = rec.back_edges <= instance_.t ? Answer::Yes : Answer::No;
  } else {
    const auto& timed_out = std::get<TimedOut>(outcome);
    rec.elapsed_ms = timed_out.elapsed.count();
    rec.op_count = timed_out.op_count;
  }
  return rec;
}

Answer rp_reduction_run(const FasInstance& instance, const ReductionConfig& config, Rng& rng) {
  ReductionPipeline pipeline(instance, config);
  pipeline.estimate_expected_ops(rng);
  return pipeline.run_trial(rng, config.seed).answer;
}

std::vector<TrialRecord> run_reduction_trials(const FasInstance& instance, const ReductionConfig& config, int trials) {
  if (trials < 1) throw std::invalid_argument("run_reduction_trials: trials must be >= 1");
  ReductionPipeline pipeline(instance, config);
  Rng pilot = make_stream(config.seed, 0);
  pipeline.estimate_expected_ops(pilot);
  std::vector<TrialRecord> out;
  out.reserve(trials);
  for (int i = 0; i < trials; ++i) {
    Rng rng = make_stream(config.seed, static_cast<std::uint64_t>(i) + 1);
    out.push_back(pipeline.run_trial(rng, static_cast<std::uint64_t>(i) + 1));
  }
  return out;
}

}  // namespace smoothrank
