#include "smoothrank/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace smoothrank {

namespace {

using Clock = std::chrono::steady_clock;
using Matrix = Eigen::MatrixXd;

struct BudgetExceeded {};

/// Counts operations and polls the budget every 256 of them.
class OpCounter {
 public:
  OpCounter(const Budget* budget, Clock::time_point start) : budget_(budget), start_(start) {}

  void tick() {
    ++count_;
    if (budget_ && (count_ & 0xFF) == 0) check();
  }
  void check() const {
    if (!budget_) return;
    if (budget_->ops && count_ > *budget_->ops) throw BudgetExceeded{};
    if (budget_->wall && Clock::now() - start_ > *budget_->wall) throw BudgetExceeded{};
  }
  std::uint64_t count() const { return count_; }

 private:
  const Budget* budget_;
  Clock::time_point start_;
  std::uint64_t count_ = 0;
};

/// Minimises sum over a before b of cost(b, a) over all orders.
Ranking brute_minimize(const Matrix& cost, OpCounter& ops, double& best_score) {
  const int m = static_cast<int>(cost.rows());
  std::vector<Alternative> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::vector<Alternative> best = order;
  best_score = std::numeric_limits<double>::infinity();
  do {
    ops.tick();
    double score = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) score += cost(order[j], order[i]);
    if (score < best_score) {
      best_score = score;
      best = order;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  ops.check();
  return Ranking(std::move(best));
}

void check_brute_size(int m, const SolverOptions& opts) {
  if (m > opts.max_brute_alternatives)
    throw std::length_error("brute force: m = " + std::to_string(m) + " exceeds cap " +
                            std::to_string(opts.max_brute_alternatives));
  if (m < 1) throw std::invalid_argument("brute force: empty alternative set");
}

SolveResult kemeny_brute_impl(const Profile<double>& p, const SolverOptions& opts, const Budget* budget) {
  const auto start = Clock::now();
  check_brute_size(p.num_alternatives(), opts);
  OpCounter ops(budget, start);
  const Matrix tally = pairwise_tally(p);
  SolveResult result;
  result.ranking = brute_minimize(tally, ops, result.score);
  result.op_count = ops.count();
  result.solver = "kemeny-brute";
  result.elapsed = Clock::now() - start;
  return result;
}

SolveResult slater_brute_impl(const Profile<double>& p, const SolverOptions& opts, const Budget* budget) {
  const auto start = Clock::now();
  const int m = p.num_alternatives();
  check_brute_size(m, opts);
  OpCounter ops(budget, start);
  const Digraph g = umg(wmg(p));
  Matrix cost = Matrix::Zero(m, m);
  for (auto [a, b] : g.edges()) cost(a, b) = 1.0;
  SolveResult result;
  result.ranking = brute_minimize(cost, ops, result.score);
  result.op_count = ops.count();
  result.solver = "slater-brute";
  result.elapsed = Clock::now() - start;
  return result;
}

struct DpNode {
  double cost;
  std::uint64_t parent;
  int last;
};

SolveResult kemeny_dp_impl(const Profile<double>& p, const SolverOptions& opts, const Budget* budget) {
  const auto start = Clock::now();
  const int m = p.num_alternatives();
  if (m < 1 || m > 63) throw std::invalid_argument("kemeny_dp: m must be in [1, 63]");
  if (!p.is_integral()) throw std::invalid_argument("kemeny_dp: profile must be integral");

  SolveResult result;
  result.solver = "kemeny-dp";
  DpDiagnostics diag;
  OpCounter ops(budget, start);

  auto finish = [&](Ranking r) {
    result.ranking = std::move(r);
    result.score = kemeny_score(result.ranking, p);
    result.op_count = ops.count();
    result.diagnostics = diag;
    result.elapsed = Clock::now() - start;
    return result;
  };

  const double n = p.total_weight();
  const Ranking* first_vote = nullptr;
  for (const auto& v : p.votes())
    if (v.weight > 0) {
      first_vote = &v.ranking;
      break;
    }
  if (!first_vote) return finish(Ranking::identity(m));
  if (n < 2) return finish(*first_vote);

  const Matrix tally = pairwise_tally(p);
  double disagreement = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) disagreement += tally(a, b) * tally(b, a);
  const double avg = 2.0 * disagreement / (n * (n - 1.0));
  diag.d = static_cast<int>(std::ceil(avg - 1e-9));
  if (diag.d == 0) return finish(*first_vote);

  diag.window_radius = static_cast<int>(std::ceil(diag.d * opts.window_slack - 1e-9));
  const auto pbar = average_positions(p);
  std::vector<int> lo(m), hi(m);
  for (int c = 0; c < m; ++c) {
    lo[c] = std::max(0, static_cast<int>(std::ceil(pbar[c] - diag.window_radius - 1e-9)));
    hi[c] = std::min(m - 1, static_cast<int>(std::floor(pbar[c] + diag.window_radius + 1e-9)));
  }
  // must_by[i]: alternatives whose last admissible position is before i.
  std::vector<std::uint64_t> must_by(m + 1, 0);
  for (int i = 0; i <= m; ++i)
    for (int c = 0; c < m; ++c)
      if (hi[c] < i) must_by[i] |= std::uint64_t{1} << c;

  const std::uint64_t full = (std::uint64_t{1} << m) - 1;
  std::vector<std::unordered_map<std::uint64_t, DpNode>> levels(m + 1);
  levels[0].emplace(0, DpNode{0.0, 0, -1});

  auto fall_back = [&]() {
    check_brute_size(m, opts);
    diag.fell_back = true;
    double score = 0.0;
    Ranking r = brute_minimize(tally, ops, score);
    return finish(std::move(r));
  };

  for (int i = 0; i < m; ++i) {
    auto& next = levels[i + 1];
    for (const auto& [mask, node] : levels[i]) {
      for (int c = 0; c < m; ++c) {
        const std::uint64_t bit = std::uint64_t{1} << c;
        if ((mask & bit) || i < lo[c] || i > hi[c]) continue;
        const std::uint64_t placed = mask | bit;
        if (must_by[i + 1] & ~placed) continue;
        ops.tick();
        double delta = 0.0;
        for (int u = 0; u < m; ++u)
          if (!(placed >> u & 1)) delta += tally(u, c);
        const double cost = node.cost + delta;
        auto [it, inserted] = next.try_emplace(placed, DpNode{cost, mask, c});
        if (!inserted && cost < it->second.cost) it->second = DpNode{cost, mask, c};
      }
    }
    diag.max_states = std::max(diag.max_states, next.size());
    if (next.empty() || next.size() > opts.max_states) return fall_back();
  }

  auto it = levels[m].find(full);
  if (it == levels[m].end()) return fall_back();
  std::vector<Alternative> order(m);
  std::uint64_t mask = full;
  for (int i = m; i > 0; --i) {
    const DpNode& node = levels[i].at(mask);
    order[i - 1] = node.last;
    mask = node.parent;
  }
  return finish(Ranking(std::move(order)));
}

}  // namespace

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::KemenyBrute: return "kemeny-brute";
    case SolverKind::KemenyDp: return "kemeny-dp";
    case SolverKind::SlaterBrute: return "slater-brute";
  }
  return "unknown";
}

SolverKind parse_solver_kind(const std::string& name) {
  if (name == "kemeny-brute" || name == "brute") return SolverKind::KemenyBrute;
  if (name == "kemeny-dp" || name == "dp") return SolverKind::KemenyDp;
  if (name == "slater-brute" || name == "slater") return SolverKind::SlaterBrute;
  throw std::invalid_argument("unknown solver '" + name + "'");
}

std::vector<double> average_positions(const Profile<double>& p) {
  const int m = p.num_alternatives();
  std::vector<double> avg(m, 0.0);
  const double n = p.total_weight();
  if (n <= 0) return avg;
  for (const auto& v : p.votes())
    for (int pos = 0; pos < m; ++pos) avg[v.ranking[pos]] += v.weight * pos;
  for (double& x : avg) x /= n;
  return avg;
}

SolveResult kemeny_brute(const Profile<double>& p, const SolverOptions& opts) {
  return kemeny_brute_impl(p, opts, nullptr);
}

SolveResult kemeny_dp(const Profile<double>& p, const SolverOptions& opts) { return kemeny_dp_impl(p, opts, nullptr); }

SolveResult slater_brute(const Profile<double>& p, const SolverOptions& opts) {
  return slater_brute_impl(p, opts, nullptr);
}

SolveResult solve(SolverKind kind, const Profile<double>& p, const SolverOptions& opts) {
  switch (kind) {
    case SolverKind::KemenyBrute: return kemeny_brute(p, opts);
    case SolverKind::KemenyDp: return kemeny_dp(p, opts);
    case SolverKind::SlaterBrute: return slater_brute(p, opts);
  }
  throw std::invalid_argument("solve: unknown solver");
}

std::variant<SolveResult, TimedOut> solve_with_budget(SolverKind kind, const Profile<double>& p, const Budget& budget,
                                                      const SolverOptions& opts) {
  if (budget.wall && budget.wall->count() <= 0) throw std::invalid_argument("solve_with_budget: budget must be positive");
  const auto start = Clock::now();
  try {
    switch (kind) {
      case SolverKind::KemenyBrute: return kemeny_brute_impl(p, opts, &budget);
      case SolverKind::KemenyDp: return kemeny_dp_impl(p, opts, &budget);
      case SolverKind::SlaterBrute: return slater_brute_impl(p, opts, &budget);
    }
  } catch (const BudgetExceeded&) {
    TimedOut out;
    out.elapsed = Clock::now() - start;
    out.op_count = budget.ops.value_or(0);
    return out;
  }
  throw std::invalid_argument("solve_with_budget: unknown solver");
}

}  // namespace smoothrank
