#include "smoothrank/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>

namespace smoothrank {

double dp_envelope(int d, double n, int m, double c) {
  // d = 0 still costs a pass over the alternatives, so the polynomial factor is kept.
  const double dd = std::max(d, 1);
  return c * std::pow(16.0, dd) * dd * dd * n * n * static_cast<double>(m) * m * std::log2(static_cast<double>(m));
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<double> parse_list(const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(trim(item)));
  return out;
}

/// Shortest round-trip text for a double, independent of locale state.
std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + num(xs[i]);
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::istream& in) {
  ExperimentConfig cfg;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    raw = trim(raw);
    if (raw.empty()) continue;
    const auto eq = raw.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(line) + ": expected key = value");
    const std::string key = trim(raw.substr(0, eq));
    const std::string value = trim(raw.substr(eq + 1));
    try {
      if (key == "experiment") cfg.experiment = value;
      else if (key == "family") cfg.family = value;
      else if (key == "phi_lo") cfg.phi_lo = std::stod(value);
      else if (key == "phi_hi") cfg.phi_hi = std::stod(value);
      else if (key == "m") cfg.m = std::stoi(value);
      else if (key == "n") cfg.n = std::stoi(value);
      else if (key == "phis" || key == "phi") cfg.phis = parse_list(value);
      else if (key == "ts" || key == "t") cfg.ts = parse_list(value);
      else if (key == "trials") cfg.trials = std::stoi(value);
      else if (key == "seed") cfg.seed = std::stoull(value);
      else if (key == "central") cfg.central = value;
      else if (key == "solver") cfg.solver = parse_solver_kind(value);
      else if (key == "envelope_c") cfg.envelope_c = std::stod(value);
      else if (key == "csv") cfg.csv = value;
      else if (key == "jsonl") cfg.jsonl = value;
      else throw std::invalid_argument("unknown key '" + key + "'");
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(line) + ": " + e.what());
    } catch (const std::out_of_range&) {
      throw std::invalid_argument("config line " + std::to_string(line) + ": value out of range");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse(in);
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  os << "experiment=" << experiment << "\nfamily=" << family << "\nphi_lo=" << num(phi_lo)
     << "\nphi_hi=" << num(phi_hi) << "\nm=" << m << "\nn=" << n << "\nphis=" << join(phis) << "\nts=" << join(ts)
     << "\ntrials=" << trials << "\nseed=" << seed << "\ncentral=" << central << "\nsolver=" << to_string(solver)
     << "\nenvelope_c=" << num(envelope_c) << "\n";
  return os.str();
}

void ExperimentConfig::validate() const {
  static const std::vector<std::string> experiments{"suite", "smoothed", "concentration", "theorem3"};
  if (std::find(experiments.begin(), experiments.end(), experiment) == experiments.end())
    throw std::invalid_argument("config: unknown experiment '" + experiment + "'");
  if (family != "mallows") throw std::invalid_argument("config: experiments support family = mallows");
  if (!(phi_lo > 0 && phi_lo <= phi_hi && phi_hi <= 1)) throw std::invalid_argument("config: need 0 < phi_lo <= phi_hi <= 1");
  if (m < 2 || m > 12) throw std::invalid_argument("config: m must be in [2, 12]");
  if (n < 2) throw std::invalid_argument("config: n must be >= 2");
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (phis.empty()) throw std::invalid_argument("config: phis is empty");
  for (double phi : phis)
    if (!(phi >= phi_lo && phi <= phi_hi)) throw std::invalid_argument("config: phi " + num(phi) + " outside bounds");
  for (double t : ts)
    if (!(t > 0)) throw std::invalid_argument("config: t must be positive");
  if (central != "unanimous" && central != "cyclic" && central != "random")
    throw std::invalid_argument("config: central must be unanimous, cyclic or random");
  if (envelope_c <= 0) throw std::invalid_argument("config: envelope_c must be positive");
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

Profile<double> make_central_profile(const std::string& kind, int m, int n, Rng& rng) {
  Profile<double> p(m);
  std::vector<Alternative> order(m);
  std::iota(order.begin(), order.end(), 0);
  for (int j = 0; j < n; ++j) {
    if (kind == "unanimous") {
      p.add(Ranking::identity(m));
    } else if (kind == "cyclic") {
      std::vector<Alternative> rotated(m);
      for (int i = 0; i < m; ++i) rotated[i] = (i + j) % m;
      p.add(Ranking(std::move(rotated)));
    } else if (kind == "random") {
      std::shuffle(order.begin(), order.end(), rng);
      p.add(Ranking(order));
    } else {
      throw std::invalid_argument("make_central_profile: unknown kind '" + kind + "'");
    }
  }
  return p;
}

ParameterProfile<MallowsParam<double>> mallows_adversary(const Profile<double>& central, const DispersionVector& phis) {
  if (!central.is_integral()) throw std::invalid_argument("mallows_adversary: central profile must be integral");
  if (phis.size() != 1 && static_cast<double>(phis.size()) != central.total_weight())
    throw std::invalid_argument("mallows_adversary: one phi per vote required");
  ParameterProfile<MallowsParam<double>> out(central.num_alternatives());
  std::size_t j = 0;
  for (const auto& v : central.votes())
    for (long long k = 0; k < static_cast<long long>(v.weight); ++k, ++j) {
      const double phi = phis.size() == 1 ? phis[0] : phis.at(j);
      out.add(MallowsParam<double>(v.ranking, phi));
    }
  return out;
}

// ---------------------------------------------------------------------------
// Smoothed runtime

SmoothedRunStats smoothed_runtime_estimate(const std::vector<ParameterProfile<MallowsParam<double>>>& adversaries,
                                           const std::vector<std::string>& labels, SolverKind solver, int trials,
                                           std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("smoothed_runtime_estimate: trials must be >= 1");
  if (labels.size() != adversaries.size()) throw std::invalid_argument("smoothed_runtime_estimate: one label per profile");
  SmoothedRunStats stats;
  double worst_mean = -1;
  for (std::size_t k = 0; k < adversaries.size(); ++k) {
    Rng rng = make_stream(seed, k + 1);
    SmoothedRunStats::PerProfile s;
    s.label = labels[k];
    std::vector<std::uint64_t> ops;
    double elapsed = 0, d_total = 0;
    for (int trial = 0; trial < trials; ++trial) {
      const auto profile = sample_profile(adversaries[k], rng);
      const auto result = solve(solver, profile);
      ops.push_back(result.op_count);
      elapsed += result.elapsed.count();
      const int d_bar =
          profile.total_weight() >= 2 ? static_cast<int>(std::ceil(avg_kt(profile) - 1e-9)) : 0;
      d_total += d_bar;
      ++s.d_bar_histogram[d_bar];
    }
    s.samples = trials;
    s.mean_ops = std::accumulate(ops.begin(), ops.end(), 0.0) / trials;
    s.max_ops = *std::max_element(ops.begin(), ops.end());
    std::sort(ops.begin(), ops.end());
    s.median_ops = trials % 2 ? static_cast<double>(ops[trials / 2])
                              : 0.5 * (static_cast<double>(ops[trials / 2 - 1]) + static_cast<double>(ops[trials / 2]));
    s.mean_elapsed_ms = elapsed / trials;
    s.mean_d_bar = d_total / trials;
    if (s.mean_ops > worst_mean) {
      worst_mean = s.mean_ops;
      stats.worst = k;
    }
    stats.profiles.push_back(std::move(s));
  }
  return stats;
}

// ---------------------------------------------------------------------------
// Brute-force paradox calculator

namespace {

double ln_factorial(int m) { return std::lgamma(static_cast<double>(m) + 1.0); }

void check_bm(const BmParams& p) {
  if (!(p.phi_bar > 0 && p.phi_bar < 1)) throw std::domain_error("bm_paradox_check: phi_bar must be in (0, 1)");
  if (p.m < 2) throw std::domain_error("bm_paradox_check: m must be >= 2");
  if (p.n < 1) throw std::domain_error("bm_paradox_check: n must be >= 1");
}

}  // namespace

double BmParams::log_l() const {
  const double log2_fact = ln_factorial(m) / std::log(2.0);
  return std::log(static_cast<double>(n) * m * std::ceil(log2_fact));
}

double BmParams::log_n() const { return n * ln_factorial(m); }

double BmParams::log_phi() const { return static_cast<double>(n) * (m - 1) * std::log1p(-phi_bar); }

BmReport bm_paradox_check(const BmParams& p) {
  check_bm(p);
  BmReport r;
  const double m = p.m, n = p.n, phi = p.phi_bar;
  r.threshold_m = std::exp2((3.0 - phi) / (1.0 - phi));
  r.in_regime = m >= r.threshold_m;

  const double ln_fact = ln_factorial(p.m);
  r.lhs = std::log(n * m * std::log2(m)) + n * (ln_fact + (m - 1) * std::log1p(-phi));
  r.rhs = 0.5 * (ln_fact + std::log(n) + 2 * std::log(m));
  r.inequality_holds = r.lhs > r.rhs;

  const double lg_fact = ln_fact / std::log(2.0);
  const double lg_one_minus = std::log2(1.0 - phi);
  const double slope = 2.0 / (1.0 - phi);
  auto link = [&](std::string s, double lhs, double rhs) { r.chain.push_back({std::move(s), lhs, rhs, lhs > rhs}); };
  link("m log m > m (2/(1-phi) + 1)", m * std::log2(m), m * (slope + 1));
  link("(m + 1/2) log m - m > (m-1) 2/(1-phi)", (m + 0.5) * std::log2(m) - m, (m - 1) * slope);
  link("log m! > (m-1) 2/(1-phi)", lg_fact, (m - 1) * slope);
  link("(1 - 1/(2n)) log m! + (m-1) log(1-phi) > 0", (1 - 1 / (2 * n)) * lg_fact + (m - 1) * lg_one_minus, 0.0);
  link("log(n m log m) + n (log m! + (m-1) log(1-phi)) > (1/2) log(m! n m^2)",
       std::log2(n * m * std::log2(m)) + n * (lg_fact + (m - 1) * lg_one_minus),
       0.5 * (lg_fact + std::log2(n) + 2 * std::log2(m)));
  return r;
}

// ---------------------------------------------------------------------------
// Concentration and the parameterised DP

namespace {

double hoeffding_bound(int n, double t, int m) {
  const double md = m;
  return std::exp(-2.0 * n * t * t / (md * md * (md - 1) * (md - 1)));
}

Profile<double> sample_around(const ParameterProfile<MallowsParam<double>>& adversary, Rng& rng) {
  return sample_profile(adversary, rng);
}

}  // namespace

ConcentrationReport concentration_check_claim10(const Profile<double>& central, const DispersionVector& phis, double t,
                                                int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("concentration_check_claim10: trials must be >= 1");
  if (!(t > 0)) throw std::invalid_argument("concentration_check_claim10: t must be positive");
  const auto adversary = mallows_adversary(central, phis);
  const int m = central.num_alternatives();
  const int n = static_cast<int>(central.total_weight());
  ConcentrationReport r;
  r.central_avg_kt = avg_kt(central);
  r.phi_star = phi_star(phis, m);
  r.t = t;
  r.threshold = r.central_avg_kt + 2 * r.phi_star + t;
  r.trials = trials;
  Rng rng = make_stream(seed, 0);
  for (int k = 0; k < trials; ++k)
    if (avg_kt(sample_around(adversary, rng)) > r.threshold) ++r.violations;
  r.empirical_violation_rate = static_cast<double>(r.violations) / trials;
  r.bound = hoeffding_bound(n, t, m);
  r.sigma = std::sqrt(r.bound * (1 - r.bound) / trials);
  r.pass = r.empirical_violation_rate <= r.bound + 3 * r.sigma;
  return r;
}

Theorem3Report theorem3_check(const Profile<double>& central, const DispersionVector& phis, double t, int trials,
                              std::uint64_t seed, double envelope_c, std::vector<Theorem3Trial>* log) {
  if (trials < 1) throw std::invalid_argument("theorem3_check: trials must be >= 1");
  if (!(t > 0)) throw std::invalid_argument("theorem3_check: t must be positive");
  const auto adversary = mallows_adversary(central, phis);
  const int m = central.num_alternatives();
  const int n = static_cast<int>(central.total_weight());
  Theorem3Report r;
  r.t = t;
  r.trials = trials;
  r.d = static_cast<int>(std::ceil(avg_kt(central) + 2 * phi_star(phis, m) + t - 1e-9));
  Rng rng = make_stream(seed, 0);
  int within = 0;
  double total_ops = 0;
  r.envelope_pass = true;
  for (int k = 0; k < trials; ++k) {
    const auto sample = sample_around(adversary, rng);
    const int d_bar = static_cast<int>(std::ceil(avg_kt(sample) - 1e-9));
    const auto result = kemeny_dp(sample);
    const double envelope = dp_envelope(d_bar, n, m, envelope_c);
    if (d_bar <= r.d) ++within;
    ++r.d_bar_histogram[d_bar];
    total_ops += static_cast<double>(result.op_count);
    r.max_ops = std::max(r.max_ops, result.op_count);
    if (static_cast<double>(result.op_count) > envelope) r.envelope_pass = false;
    if (envelope > 0) r.max_envelope_ratio = std::max(r.max_envelope_ratio, result.op_count / envelope);
    if (log) log->push_back({d_bar, result.op_count, result.elapsed.count(), envelope});
  }
  r.within_d_rate = static_cast<double>(within) / trials;
  r.mean_ops = total_ops / trials;
  const double bound = hoeffding_bound(n, t, m);
  r.required_rate = 1 - bound - 3 * std::sqrt(bound * (1 - bound) / trials);
  r.rate_pass = r.within_d_rate >= r.required_rate;
  return r;
}

// ---------------------------------------------------------------------------
// Experiment runner

namespace {

constexpr int kCsvSchema = 1;

class CsvWriter {
 public:
  explicit CsvWriter(std::ostringstream& out) : out_(out) {
    out_ << "experiment,m,n,phi,t,statistic,value\n";
  }
  void row(const std::string& experiment, int m, int n, double phi, std::optional<double> t, const std::string& stat,
           double value) {
    out_ << experiment << ',' << m << ',' << n << ',' << num(phi) << ',' << (t ? num(*t) : "") << ',' << stat << ','
         << num(value) << '\n';
  }

 private:
  std::ostringstream& out_;
};

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentOutput result;
  result.config_hash = fnv1a(cfg.canonical());
  const std::string header = "smoothrank schema=" + std::to_string(kCsvSchema) +
                             " config_hash=" + hex64(result.config_hash) + " seed=" + std::to_string(cfg.seed);
  std::ostringstream csv, jsonl;
  csv << "# " << header << "\n";
  {
    nlohmann::json h;
    h["type"] = "header";
    h["schema"] = kCsvSchema;
    h["config_hash"] = hex64(result.config_hash);
    h["seed"] = cfg.seed;
    h["config"] = cfg.canonical();
    jsonl << h.dump() << "\n";
  }
  CsvWriter rows(csv);

  Rng central_rng = make_stream(cfg.seed, 0);
  const Profile<double> central = make_central_profile(cfg.central, cfg.m, cfg.n, central_rng);
  const bool all = cfg.experiment == "suite";
  std::uint64_t stream = 1;

  if (all || cfg.experiment == "smoothed") {
    std::vector<ParameterProfile<MallowsParam<double>>> adversaries;
    std::vector<std::string> labels;
    for (double phi : cfg.phis) {
      adversaries.push_back(mallows_adversary(central, {phi}));
      labels.push_back("phi=" + num(phi));
    }
    const auto stats = smoothed_runtime_estimate(adversaries, labels, cfg.solver, cfg.trials, cfg.seed ^ (stream++ << 32));
    for (std::size_t k = 0; k < stats.profiles.size(); ++k) {
      const auto& s = stats.profiles[k];
      const double phi = cfg.phis[k];
      rows.row("smoothed", cfg.m, cfg.n, phi, std::nullopt, "mean_ops", s.mean_ops);
      rows.row("smoothed", cfg.m, cfg.n, phi, std::nullopt, "median_ops", s.median_ops);
      rows.row("smoothed", cfg.m, cfg.n, phi, std::nullopt, "max_ops", static_cast<double>(s.max_ops));
      rows.row("smoothed", cfg.m, cfg.n, phi, std::nullopt, "mean_d_bar", s.mean_d_bar);
      rows.row("smoothed", cfg.m, cfg.n, phi, std::nullopt, "samples", s.samples);
      for (auto [d, count] : s.d_bar_histogram)
        rows.row("smoothed", cfg.m, cfg.n, phi, std::nullopt, "d_bar_" + std::to_string(d), count);
      nlohmann::json j;
      j["type"] = "smoothed";
      j["label"] = s.label;
      j["mean_ops"] = s.mean_ops;
      j["max_ops"] = s.max_ops;
      j["mean_elapsed_ms"] = s.mean_elapsed_ms;
      j["worst"] = k == stats.worst;
      jsonl << j.dump() << "\n";
    }
    rows.row("smoothed", cfg.m, cfg.n, cfg.phis[stats.worst], std::nullopt, "sup_mean_ops",
             stats.profiles[stats.worst].mean_ops);
  }

  if (all || cfg.experiment == "concentration") {
    for (double phi : cfg.phis)
      for (double t : cfg.ts) {
        const auto r = concentration_check_claim10(central, {phi}, t, cfg.trials, cfg.seed ^ (stream++ << 32));
        rows.row("concentration", cfg.m, cfg.n, phi, t, "violation_rate", r.empirical_violation_rate);
        rows.row("concentration", cfg.m, cfg.n, phi, t, "bound", r.bound);
        rows.row("concentration", cfg.m, cfg.n, phi, t, "threshold", r.threshold);
        rows.row("concentration", cfg.m, cfg.n, phi, t, "pass", r.pass ? 1 : 0);
        nlohmann::json j;
        j["type"] = "concentration";
        j["phi"] = phi;
        j["t"] = t;
        j["violations"] = r.violations;
        j["trials"] = r.trials;
        j["bound"] = r.bound;
        j["pass"] = r.pass;
        jsonl << j.dump() << "\n";
      }
  }

  if (all || cfg.experiment == "theorem3") {
    for (double phi : cfg.phis)
      for (double t : cfg.ts) {
        std::vector<Theorem3Trial> log;
        const auto r = theorem3_check(central, {phi}, t, cfg.trials, cfg.seed ^ (stream++ << 32), cfg.envelope_c, &log);
        rows.row("theorem3", cfg.m, cfg.n, phi, t, "d", r.d);
        rows.row("theorem3", cfg.m, cfg.n, phi, t, "within_d_rate", r.within_d_rate);
        rows.row("theorem3", cfg.m, cfg.n, phi, t, "required_rate", r.required_rate);
        rows.row("theorem3", cfg.m, cfg.n, phi, t, "mean_ops", r.mean_ops);
        rows.row("theorem3", cfg.m, cfg.n, phi, t, "max_ops", static_cast<double>(r.max_ops));
        rows.row("theorem3", cfg.m, cfg.n, phi, t, "max_envelope_ratio", r.max_envelope_ratio);
        rows.row("theorem3", cfg.m, cfg.n, phi, t, "envelope_pass", r.envelope_pass ? 1 : 0);
        for (std::size_t k = 0; k < log.size(); ++k) {
          nlohmann::json j;
          j["type"] = "theorem3_trial";
          j["phi"] = phi;
          j["t"] = t;
          j["trial"] = k;
          j["d_bar"] = log[k].d_bar;
          j["op_count"] = log[k].op_count;
          j["elapsed_ms"] = log[k].elapsed_ms;
          j["within_envelope"] = static_cast<double>(log[k].op_count) <= log[k].envelope;
          jsonl << j.dump() << "\n";
        }
      }
  }

  result.csv = csv.str();
  result.jsonl = jsonl.str();
  return result;
}

ExperimentOutput run_experiment_to_files(const ExperimentConfig& cfg) {
  auto out = run_experiment(cfg);
  auto write = [](const std::string& path, const std::string& text) {
    if (path.empty()) return;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
  };
  write(cfg.csv, out.csv);
  write(cfg.jsonl, out.jsonl);
  return out;
}

}  // namespace smoothrank
