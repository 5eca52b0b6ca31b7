#ifndef SMOOTHRANK_HARNESS_HPP
#define SMOOTHRANK_HARNESS_HPP

#include "smoothrank/models.hpp"
#include "smoothrank/solvers.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace smoothrank {

/// Op-count envelope constant for kemeny_dp, fitted once on the Monte Carlo
/// suite in tests/ and kept fixed.
inline constexpr double kDpEnvelopeC = 0.01;

/// C * 16^d * d^2 * n^2 * m^2 * log2(m), with d floored at 1.
double dp_envelope(int d, double n, int m, double c = kDpEnvelopeC);

// ---------------------------------------------------------------------------
// Configuration

/// Flat "key = value" experiment description. Lists are comma separated.
struct ExperimentConfig {
  std::string experiment = "suite";  ///< suite | smoothed | concentration | theorem3
  std::string family = "mallows";
  double phi_lo = 1e-12;
  double phi_hi = 1.0;
  int m = 4;
  int n = 50;
  std::vector<double> phis{0.3};
  std::vector<double> ts{2.0};
  int trials = 200;
  std::uint64_t seed = 1;
  std::string central = "unanimous";  ///< unanimous | cyclic | random
  SolverKind solver = SolverKind::KemenyDp;
  double envelope_c = kDpEnvelopeC;
  std::string csv;
  std::string jsonl;

  static ExperimentConfig parse(std::istream& in);
  static ExperimentConfig parse_text(const std::string& text);
  static ExperimentConfig load(const std::string& path);

  /// Canonical text of every field that affects results; output paths are
  /// excluded.
  std::string canonical() const;
  void validate() const;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& text);
std::string hex64(std::uint64_t x);

/// n votes: identity (unanimous), rotations of the identity (cyclic) or
/// uniform rankings from `rng` (random).
Profile<double> make_central_profile(const std::string& kind, int m, int n, Rng& rng);

/// One Mallows parameter per vote of an integral central profile, dispersion
/// phis[j] (or a single shared value).
ParameterProfile<MallowsParam<double>> mallows_adversary(const Profile<double>& central, const DispersionVector& phis);

// ---------------------------------------------------------------------------
// Smoothed runtime

struct SmoothedRunStats {
  struct PerProfile {
    std::string label;
    double mean_ops = 0;
    double median_ops = 0;
    std::uint64_t max_ops = 0;
    double mean_elapsed_ms = 0;  ///< informational
    double mean_d_bar = 0;
    int samples = 0;
    std::map<int, int> d_bar_histogram;
  };
  std::vector<PerProfile> profiles;
  /// Index of the profile with the largest mean op_count; the empirical sup.
  std::size_t worst = 0;
};

/// Monte Carlo estimate of E[op_count] under each supplied adversary, with
/// per-profile RNG streams of `seed`.
SmoothedRunStats smoothed_runtime_estimate(const std::vector<ParameterProfile<MallowsParam<double>>>& adversaries,
                                           const std::vector<std::string>& labels, SolverKind solver, int trials,
                                           std::uint64_t seed);

// ---------------------------------------------------------------------------
// Brute-force paradox calculator

struct BmParams {
  int m = 0;
  int n = 1;
  double phi_bar = 0.5;
  double epsilon = 0.5;

  /// ln l with l = n m ceil(log2 m!).
  double log_l() const;
  /// ln N = n ln m!.
  double log_n() const;
  /// ln of the perturbation floor (1 - phi_bar)^{n(m-1)}.
  double log_phi() const;
};

struct BmChainLink {
  std::string statement;
  double lhs = 0;
  double rhs = 0;
  bool holds = false;
};

struct BmReport {
  double threshold_m = 0;
  bool in_regime = false;  ///< m > threshold_m
  double lhs = 0;          ///< ln(n m log2 m) + n (ln m! + (m-1) ln(1 - phi_bar))
  double rhs = 0;          ///< (1/2) ln(m! n m^2)
  bool inequality_holds = false;
  /// The intermediate steps, in base-2 logarithms as written for the
  /// threshold; the Stirling step mixes bases and can fail just above it.
  std::vector<BmChainLink> chain;
};

BmReport bm_paradox_check(const BmParams& p);

// ---------------------------------------------------------------------------
// Concentration and the parameterised DP

struct ConcentrationReport {
  double central_avg_kt = 0;
  double phi_star = 0;
  double t = 0;
  double threshold = 0;  ///< avg_kt(P) + 2 phi* + t
  int trials = 0;
  int violations = 0;
  double empirical_violation_rate = 0;
  double bound = 0;  ///< exp(-2 n t^2 / (m^2 (m-1)^2))
  double sigma = 0;  ///< binomial standard deviation at the bound
  bool pass = false;
};

/// Fraction of sampled P' with avg_kt(P') > avg_kt(P) + 2 phi* + t.
ConcentrationReport concentration_check_claim10(const Profile<double>& central, const DispersionVector& phis, double t,
                                                int trials, std::uint64_t seed);

struct Theorem3Report {
  int d = 0;  ///< ceil(avg_kt(P) + 2 phi* + t)
  double t = 0;
  int trials = 0;
  double within_d_rate = 0;  ///< fraction of trials with d_bar <= d
  double required_rate = 0;  ///< 1 - exp(-2 n t^2 / (m^2 (m-1)^2)) - 3 sigma
  bool rate_pass = false;
  bool envelope_pass = false;  ///< op_count <= envelope on every trial
  std::uint64_t max_ops = 0;
  double max_envelope_ratio = 0;
  double mean_ops = 0;
  std::map<int, int> d_bar_histogram;
};

struct Theorem3Trial {
  int d_bar = 0;
  std::uint64_t op_count = 0;
  double elapsed_ms = 0;
  double envelope = 0;
};

Theorem3Report theorem3_check(const Profile<double>& central, const DispersionVector& phis, double t, int trials,
                              std::uint64_t seed, double envelope_c = kDpEnvelopeC,
                              std::vector<Theorem3Trial>* log = nullptr);

// ---------------------------------------------------------------------------
// Experiment runner

struct ExperimentOutput {
  std::string csv;
  std::string jsonl;
  std::uint64_t config_hash = 0;
};

/// Runs the configured experiment. The CSV is a pure function of the config;
/// the JSON-lines log also carries wall-clock times.
ExperimentOutput run_experiment(const ExperimentConfig& cfg);

/// run_experiment plus writing cfg.csv / cfg.jsonl when set.
ExperimentOutput run_experiment_to_files(const ExperimentConfig& cfg);

}  // namespace smoothrank

#endif  // SMOOTHRANK_HARNESS_HPP
