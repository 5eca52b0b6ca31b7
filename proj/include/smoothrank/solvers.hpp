#ifndef SMOOTHRANK_SOLVERS_HPP
#define SMOOTHRANK_SOLVERS_HPP

#include "smoothrank/core.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace smoothrank {

struct DpDiagnostics {
  int d = 0;              ///< ceil(avg_kt(P))
  int window_radius = 0;  ///< positions allowed around each average position
  std::size_t max_states = 0;
  bool fell_back = false;  ///< state cap or empty window forced brute force
};

struct SolveResult {
  Ranking ranking;
  double score = 0.0;
  std::chrono::duration<double, std::milli> elapsed{0};
  /// Deterministic work counter: score evaluations (brute force) or DP
  /// transitions.
  std::uint64_t op_count = 0;
  std::optional<DpDiagnostics> diagnostics;
  std::string solver;
};

struct SolverOptions {
  int max_brute_alternatives = 10;
  /// Window radius is ceil(d * window_slack).
  double window_slack = 1.0;
  std::size_t max_states = std::size_t{1} << 20;
};

/// Cooperative limits checked inside solver loops.
struct Budget {
  std::optional<std::chrono::nanoseconds> wall;
  std::optional<std::uint64_t> ops;
};

struct TimedOut {
  std::chrono::duration<double, std::milli> elapsed{0};
  std::uint64_t op_count = 0;
};

enum class SolverKind { KemenyBrute, KemenyDp, SlaterBrute };

std::string to_string(SolverKind kind);
SolverKind parse_solver_kind(const std::string& name);

/// Minimum Kemeny score over all m! rankings; ties go to the
/// lexicographically smallest ranking.
SolveResult kemeny_brute(const Profile<double>& p, const SolverOptions& opts = {});

/// Exact Kemeny ranking by dynamic programming over sets of already-placed
/// alternatives, restricted to positions within ceil(avg_kt) of each
/// alternative's average position. Falls back to brute force if the state
/// space exceeds the cap or the window admits no complete ranking.
SolveResult kemeny_dp(const Profile<double>& p, const SolverOptions& opts = {});

/// Minimum KT distance to UMG(P) over all rankings; lexicographic tie-break.
SolveResult slater_brute(const Profile<double>& p, const SolverOptions& opts = {});

SolveResult solve(SolverKind kind, const Profile<double>& p, const SolverOptions& opts = {});

std::variant<SolveResult, TimedOut> solve_with_budget(SolverKind kind, const Profile<double>& p, const Budget& budget,
                                                      const SolverOptions& opts = {});

/// Average position (0-based) of each alternative, weighted by vote weight.
std::vector<double> average_positions(const Profile<double>& p);

}  // namespace smoothrank

#endif  // SMOOTHRANK_SOLVERS_HPP
