// smoothrank command-line front end.

#include "smoothrank/gadgets.hpp"
#include "smoothrank/graph_algebra.hpp"
#include "smoothrank/harness.hpp"
#include "smoothrank/io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace smoothrank;

namespace {

template <typename Write>
void emit(const std::string& path, Write write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write(out);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

void print_wmg_summary(std::ostream& os, const Wmg& g, const std::string& title) {
  os << "# " << title << "\n";
  write_wmg(os, g);
}

int run_verify_gadgets(int m, const std::string& phi_text, const std::string& family, const std::string& lo_text,
                       const std::string& hi_text) {
  std::vector<ClaimCheck> checks;
  if (family == "mallows") {
    const MallowsParam<Rational> theta(Ranking::identity(m), parse_rational(phi_text));
    checks = verify_gadget_claims(theta, theta);
  } else {
    const auto theta = pl_witness(m, parse_rational(lo_text), parse_rational(hi_text));
    checks = verify_gadget_claims(theta, theta);
  }
  bool all = true;
  for (const auto& c : checks) {
    std::cout << (c.passed ? "ok   " : "FAIL ") << c.name;
    if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
    std::cout << "\n";
    all = all && c.passed;
  }
  std::cout << (all ? "all gadget checks passed" : "gadget checks FAILED") << " (m=" << m << ", exact arithmetic)\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank aggregation and smoothed-complexity toolkit"};
  app.require_subcommand(1);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Kemeny or Slater ranking of a profile; prints a JSON record");
  std::string solve_rule = "kemeny", solve_in, solve_solver = "brute";
  bool solve_soc = false;
  solve_cmd->add_option("rule", solve_rule, "kemeny | slater")->check(CLI::IsMember({"kemeny", "slater"}));
  solve_cmd->add_option("--in", solve_in, ".profile file")->required();
  solve_cmd->add_option("--solver", solve_solver, "brute | dp (kemeny only)")->check(CLI::IsMember({"brute", "dp"}));
  solve_cmd->add_flag("--soc", solve_soc, "input is a strict-order-complete election file");

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "Sample a profile from a model or a parameter profile");
  std::string sample_model = "mallows", sample_central, sample_theta, sample_pprofile, sample_out;
  int sample_m = 3, sample_n = 10;
  double sample_phi = 0.5;
  std::uint64_t sample_seed = 1;
  int sample_k = 0;
  sample_cmd->add_option("--model", sample_model, "mallows | pl")->check(CLI::IsMember({"mallows", "pl"}));
  sample_cmd->add_option("--m", sample_m, "alternatives");
  sample_cmd->add_option("--n", sample_n, "voters (ignored with --pprofile)");
  sample_cmd->add_option("--phi", sample_phi, "Mallows dispersion");
  sample_cmd->add_option("--central", sample_central, "central ranking, e.g. 1,2,3");
  sample_cmd->add_option("--theta", sample_theta, "Plackett-Luce utilities, comma separated");
  sample_cmd->add_option("--pprofile", sample_pprofile, ".pprofile to sample from");
  sample_cmd->add_option("--K", sample_k, "round the .pprofile to m^K voters first (required for fractional weights)");
  sample_cmd->add_option("--seed", sample_seed, "master seed");
  sample_cmd->add_option("--out", sample_out, "output .profile (default stdout)");

  // decompose
  auto* decompose_cmd = app.add_subcommand("decompose", "Cycle / co-cycle decomposition of a WMG");
  std::string decompose_in, decompose_profile;
  decompose_cmd->add_option("--in", decompose_in, "WMG edge list");
  decompose_cmd->add_option("--profile", decompose_profile, "use the WMG of this .profile");

  // gadget
  auto* gadget_cmd = app.add_subcommand("gadget", "Build a gadget parameter profile");
  std::string gadget_kind = "g3c", gadget_graph, gadget_out, gadget_model = "mallows";
  int gadget_m = 4;
  double gadget_phi = 0.5, gadget_lo = 0.1, gadget_hi = 0.2;
  gadget_cmd->add_option("kind", gadget_kind, "g3c | kemeny | slater")->check(CLI::IsMember({"g3c", "kemeny", "slater"}));
  gadget_cmd->add_option("--m", gadget_m, "alternatives (g3c)");
  gadget_cmd->add_option("--graph", gadget_graph, "FAS file for kemeny / slater");
  gadget_cmd->add_option("--model", gadget_model, "mallows | pl")->check(CLI::IsMember({"mallows", "pl"}));
  gadget_cmd->add_option("--phi", gadget_phi, "Mallows witness dispersion");
  gadget_cmd->add_option("--lo", gadget_lo, "Plackett-Luce witness lower utility");
  gadget_cmd->add_option("--hi", gadget_hi, "Plackett-Luce witness upper utility");
  gadget_cmd->add_option("--out", gadget_out, "output .pprofile (default stdout)");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Check gadget identities or witness conditions");
  std::string verify_what = "gadgets", verify_phi = "1/2", verify_family = "mallows", verify_lo = "1/10",
              verify_hi = "1/5";
  int verify_m = 5, verify_m_max = 8;
  verify_cmd->add_option("what", verify_what, "gadgets | witness")->check(CLI::IsMember({"gadgets", "witness"}));
  verify_cmd->add_option("--m", verify_m, "alternatives (smallest m for witness)");
  verify_cmd->add_option("--m-max", verify_m_max, "largest m for witness");
  verify_cmd->add_option("--phi", verify_phi, "Mallows dispersion, decimal or p/q");
  verify_cmd->add_option("--family", verify_family, "mallows | pl")->check(CLI::IsMember({"mallows", "pl"}));
  verify_cmd->add_option("--lo", verify_lo, "Plackett-Luce lower utility");
  verify_cmd->add_option("--hi", verify_hi, "Plackett-Luce upper utility");

  // reduce
  auto* reduce_cmd = app.add_subcommand("reduce", "Randomised reduction trials on a FAS instance");
  std::string reduce_in, reduce_log, reduce_solver;
  int reduce_trials = 50;
  std::optional<int> reduce_k;
  std::uint64_t reduce_seed = 1;
  double reduce_phi = 0.5;
  reduce_cmd->add_option("--in", reduce_in, "FAS file")->required();
  reduce_cmd->add_option("--K", reduce_k, "scaling exponent (default: largest allowed by the voter cap)");
  reduce_cmd->add_option("--trials", reduce_trials, "number of trials");
  reduce_cmd->add_option("--seed", reduce_seed, "master seed");
  reduce_cmd->add_option("--phi", reduce_phi, "Mallows witness dispersion");
  reduce_cmd->add_option("--solver", reduce_solver, "brute | dp | slater");
  reduce_cmd->add_option("--log", reduce_log, "JSON-lines trial log (default stdout)");

  // experiment
  auto* experiment_cmd = app.add_subcommand("experiment", "Run an experiment from a key = value config");
  std::string experiment_config, experiment_csv, experiment_jsonl;
  experiment_cmd->add_option("--config", experiment_config, "config file")->required();
  experiment_cmd->add_option("--csv", experiment_csv, "override CSV output path");
  experiment_cmd->add_option("--jsonl", experiment_jsonl, "override JSON-lines output path");

  // bm-check
  auto* bm_cmd = app.add_subcommand("bm-check", "Brute-force paradox inequality calculator");
  BmParams bm;
  bm_cmd->add_option("--m", bm.m, "alternatives")->required();
  bm_cmd->add_option("--n", bm.n, "voters");
  bm_cmd->add_option("--phi-bar", bm.phi_bar, "upper dispersion bound");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) {
      Profile<double> p;
      if (solve_soc) {
        auto in = open_input(solve_in);
        p = read_soc(in);
      } else {
        p = load_profile(solve_in);
      }
      SolverKind kind = SolverKind::SlaterBrute;
      if (solve_rule == "kemeny") kind = solve_solver == "dp" ? SolverKind::KemenyDp : SolverKind::KemenyBrute;
      std::cout << to_json(solve(kind, p)).dump() << "\n";
      return 0;
    }

    if (*sample_cmd) {
      Rng rng = make_stream(sample_seed, 0);
      Profile<double> p;
      if (!sample_pprofile.empty()) {
        auto in = open_input(sample_pprofile);
        p = std::visit(
            [&](const auto& pp) { return sample_profile(sample_k > 0 ? round_to_integral(pp, sample_k) : pp, rng); },
            read_parameter_profile(in));
      } else if (sample_model == "mallows") {
        const Ranking central =
            sample_central.empty() ? Ranking::identity(sample_m) : parse_ranking(sample_central, sample_m);
        const MallowsParam<double> param(central, sample_phi);
        p = Profile<double>(sample_m);
        for (int j = 0; j < sample_n; ++j) p.add(mallows_sample(param, rng));
      } else {
        std::vector<double> theta(sample_m, 1.0 / sample_m);
        if (!sample_theta.empty()) {
          theta.clear();
          std::stringstream ss(sample_theta);
          std::string item;
          while (std::getline(ss, item, ',')) theta.push_back(std::stod(item));
        }
        const PlackettLuceParam<double> param(theta);
        p = Profile<double>(param.num_alternatives());
        for (int j = 0; j < sample_n; ++j) p.add(pl_sample(param, rng));
      }
      emit(sample_out, [&](std::ostream& os) { write_profile(os, p); });
      return 0;
    }

    if (*decompose_cmd) {
      Wmg g;
      if (!decompose_profile.empty()) {
        g = wmg(load_profile(decompose_profile));
      } else if (!decompose_in.empty()) {
        auto in = open_input(decompose_in);
        g = read_wmg(in);
      } else {
        throw std::invalid_argument("decompose: pass --in or --profile");
      }
      const auto dec = orthogonal_decompose(g);
      print_wmg_summary(std::cout, dec.cyclic, "cyclic part");
      print_wmg_summary(std::cout, dec.cocyclic, "co-cyclic part");
      std::cout << "# co-cycle coefficients\n";
      for (std::size_t a = 0; a < dec.coefficients.size(); ++a)
        std::cout << "c" << a + 1 << " = " << dec.coefficients[a] << "\n";
      std::cout << "# 3-cycle coordinates a1 -> ai -> aj\n";
      for (const auto& c : cycle_basis_coeffs(dec.cyclic))
        if (c.lambda != 0) std::cout << "lambda(" << c.i + 1 << "," << c.j + 1 << ") = " << c.lambda << "\n";
      return 0;
    }

    if (*gadget_cmd) {
      auto build = [&](const auto& theta) {
        using Param = std::decay_t<decltype(theta)>;
        ParameterProfile<Param> p;
        if (gadget_kind == "g3c") {
          p = build_p_g3c(theta);
        } else {
          const auto inst = load_fas(gadget_graph);
          p = gadget_kind == "kemeny" ? build_p_g_kemeny(inst.graph, theta) : build_p_g_slater(inst.graph, theta, theta);
        }
        emit(gadget_out, [&](std::ostream& os) { write_parameter_profile(os, p); });
        std::cerr << p.size() << " parameter types, total weight " << p.total_weight() << "\n";
        print_wmg_summary(std::cerr, expected_wmg(p), "expected WMG");
      };
      int m = gadget_m;
      if (gadget_kind != "g3c") {
        if (gadget_graph.empty()) throw std::invalid_argument("gadget: --graph is required for kemeny / slater");
        m = load_fas(gadget_graph).graph.num_vertices();
      }
      if (gadget_model == "mallows") build(MallowsParam<double>(Ranking::identity(m), gadget_phi));
      else build(pl_witness(m, gadget_lo, gadget_hi));
      return 0;
    }

    if (*verify_cmd) {
      if (verify_what == "gadgets") return run_verify_gadgets(verify_m, verify_phi, verify_family, verify_lo, verify_hi);
      const auto family = parse_model_family(verify_family);
      const double lo = to_double(parse_rational(family == ModelFamily::Mallows ? verify_phi : verify_lo));
      const double hi = to_double(parse_rational(family == ModelFamily::Mallows ? verify_phi : verify_hi));
      const auto r = verify_witness(family, lo, hi, verify_m, std::max(verify_m, verify_m_max));
      std::printf("%-4s %-14s %-14s %-14s", "m", "alpha", "beta", "gamma");
      if (family == ModelFamily::Mallows) std::printf(" %-14s", "alpha(prob)");
      std::printf("\n");
      for (std::size_t i = 0; i < r.ms.size(); ++i) {
        std::printf("%-4d %-14.8g %-14.8g %-14.8g", r.ms[i], r.alpha[i], r.beta[i], r.gamma[i]);
        if (family == ModelFamily::Mallows) std::printf(" %-14.8g", r.alpha_probability_form[i]);
        std::printf("\n");
      }
      std::printf("k=%d A=%.8g condition(iii)=%s\n", r.k, r.A, r.condition_iii ? "yes" : "no");
      std::printf("k*=%d B=%.8g condition(iv)=%s\n", r.k_star, r.B, r.condition_iv ? "yes" : "no");
      return r.condition_iii && r.condition_iv ? 0 : 1;
    }

    if (*reduce_cmd) {
      const auto inst = load_fas(reduce_in);
      ReductionConfig cfg;
      cfg.K = reduce_k;
      cfg.seed = reduce_seed;
      cfg.phi = reduce_phi;
      if (!reduce_solver.empty()) cfg.solver = parse_solver_kind(reduce_solver);
      const auto records = run_reduction_trials(inst, cfg, reduce_trials);
      int yes = 0, finished = 0;
      emit(reduce_log, [&](std::ostream& os) {
        for (const auto& r : records) os << to_json(r).dump() << "\n";
      });
      for (const auto& r : records) {
        yes += r.answer == Answer::Yes;
        finished += r.finished;
      }
      std::cerr << "K=" << records.front().K << " n=" << records.front().n << " trials=" << records.size()
                << " finished=" << finished << " YES=" << yes << " NO=" << records.size() - yes << "\n";
      std::cerr << "majority answer: " << (2 * yes > static_cast<int>(records.size()) ? "YES" : "NO") << "\n";
      return 0;
    }

    if (*experiment_cmd) {
      auto cfg = ExperimentConfig::load(experiment_config);
      if (!experiment_csv.empty()) cfg.csv = experiment_csv;
      if (!experiment_jsonl.empty()) cfg.jsonl = experiment_jsonl;
      const auto out = run_experiment_to_files(cfg);
      if (cfg.csv.empty()) std::cout << out.csv;
      std::cerr << "config_hash=" << hex64(out.config_hash) << " seed=" << cfg.seed << "\n";
      return 0;
    }

    if (*bm_cmd) {
      const auto r = bm_paradox_check(bm);
      std::printf("threshold_m = %.10g\n", r.threshold_m);
      std::printf("m = %d %s\n", bm.m, r.in_regime ? "(at or above threshold)" : "(below threshold: outside the regime)");
      std::printf("ln lhs = %.10g  ln rhs = %.10g  inequality %s\n", r.lhs, r.rhs, r.inequality_holds ? "holds" : "fails");
      for (const auto& link : r.chain)
        std::printf("  [%s] %s  (%.6g vs %.6g)\n", link.holds ? "holds" : "fails", link.statement.c_str(), link.lhs,
                    link.rhs);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
