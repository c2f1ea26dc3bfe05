// Command-line front end: `simulate` runs Monte Carlo comparisons and writes a
// metrics report; `test-one` runs a single dataset and prints the step trace.
//
// Exit codes: 0 success, 2 configuration or input error, 3 numeric error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>

#include "bsdtest/bsd.hpp"
#include "bsdtest/covariance.hpp"
#include "bsdtest/errors.hpp"
#include "bsdtest/estimators.hpp"
#include "bsdtest/harness.hpp"
#include "bsdtest/mrd.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct SimulateFlags {
  std::string config_path;
  long long m = 0;
  std::string cov;
  double rho = 0.0;
  long long block_size = 0;
  std::string sigma_file;
  double p = 0.0, v = 0.0, delta = 0.0, alpha = 0.0, gamma = 0.0;
  std::string methods;
  bool estimate_params = false;
  long long reps = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string format;
  unsigned threads = 1;
  bool quiet = false;
};

struct TestOneFlags {
  std::string x_file;
  std::string sigma_file;
  std::string cov = "identity";
  double rho = 0.0;
  long long block_size = 5;
  double p = 0.1, v = 16.0, delta = 1.0, alpha = 0.05, gamma = 0.25;
  std::string method = "bsd";
  std::string crit_file;
  bool estimate_params = false;
};

bsdtest::ExperimentConfig build_config(const SimulateFlags& f, CLI::App& cmd) {
  using bsdtest::ExperimentConfig;
  ExperimentConfig cfg;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw bsdtest::ConfigError("config: cannot open '" + f.config_path + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw bsdtest::ConfigError("config: " + f.config_path + ": " + e.what());
    }
    cfg = ExperimentConfig::from_json(j);
  }
  auto given = [&](const char* name) { return cmd.get_option(name)->count() > 0; };
  if (given("--m")) cfg.m = f.m;
  if (given("--cov")) cfg.cov = bsdtest::parse_covariance_kind(f.cov);
  if (given("--rho")) cfg.rho = f.rho;
  if (given("--block-size")) cfg.block_size = f.block_size;
  if (given("--sigma-file")) cfg.sigma_file = f.sigma_file;
  if (given("--p")) cfg.p = f.p;
  if (given("--v")) cfg.v = f.v;
  if (given("--delta")) cfg.delta = f.delta;
  if (given("--alpha")) cfg.alpha = f.alpha;
  if (given("--gamma")) cfg.gamma = f.gamma;
  if (given("--methods")) cfg.methods = bsdtest::parse_methods(f.methods);
  if (given("--estimate-params")) cfg.estimate_params = f.estimate_params;
  if (given("--reps")) cfg.reps = f.reps;
  if (given("--seed")) cfg.seed = f.seed;
  if (given("--out")) cfg.out = f.out;
  if (given("--format")) cfg.format = bsdtest::parse_report_format(f.format);
  if (given("--threads")) cfg.threads = f.threads;
  return cfg;
}

int run_simulate(const SimulateFlags& f, CLI::App& cmd) {
  const auto cfg = build_config(f, cmd);
  const auto report = bsdtest::run_experiment(cfg, f.quiet ? nullptr : &std::cerr);
  if (cfg.out.empty()) {
    bsdtest::emit_report(std::cout, report, cfg.format);
  } else {
    bsdtest::emit_report(cfg.out, report, cfg.format);
    if (!f.quiet) std::cerr << "[simulate] wrote " << cfg.out << '\n';
  }
  return 0;
}

int run_test_one(const TestOneFlags& f) {
  using namespace bsdtest;
  const VectorXd x = read_vector_file(f.x_file);
  const Eigen::Index m = x.size();
  CovarianceFamily family;
  if (!f.sigma_file.empty()) {
    family = CovarianceFamily::from_file(f.sigma_file);
    if (family.dim != m)
      throw ConfigError("sigma-file: dimension " + std::to_string(family.dim) +
                        " does not match x length " + std::to_string(m));
  } else {
    switch (parse_covariance_kind(f.cov)) {
      case CovarianceKind::identity: family = CovarianceFamily::identity(m); break;
      case CovarianceKind::intraclass: family = CovarianceFamily::intraclass(m, f.rho); break;
      case CovarianceKind::ar1: family = CovarianceFamily::ar1(m, f.rho); break;
      case CovarianceKind::block: family = CovarianceFamily::block(m, f.block_size, f.rho); break;
      case CovarianceKind::custom: throw ConfigError("cov: custom requires --sigma-file");
    }
    family.validate();
  }

  if (f.method == "bsd") {
    MixtureParams params{f.p, f.v, f.delta};
    if (f.estimate_params) {
      const EstimatorConfig est{f.gamma};
      const auto p_hat = estimate_p(x, est);
      const auto v_hat = estimate_v(x, p_hat.clamped, est);
      std::cout << "p_hat\t" << p_hat.raw << "\t(clamped " << p_hat.clamped << ")\n"
                << "v_hat\t" << v_hat.raw << "\t(clamped " << v_hat.clamped << ")\n";
      params.p = p_hat.clamped;
      params.v = v_hat.clamped;
    }
    const auto result = family.kind == CovarianceKind::intraclass
                            ? bsd_step_down_intraclass(x, family.rho, params)
                            : bsd_step_down(x, build_covariance(family), params);
    print_trace(std::cout, result, "log_S");
  } else if (f.method == "mrd") {
    auto crit = CriticalSequence::sidak_holm(m, f.alpha);
    if (!f.crit_file.empty()) {
      std::ifstream in(f.crit_file);
      if (!in) throw ParseError("cannot open critical sequence file '" + f.crit_file + "'");
      crit = CriticalSequence::read(in);
    }
    print_trace(std::cout, mrd_step_down(x, build_covariance(family), crit), "abs_U");
  } else {
    throw ConfigError("method: test-one supports bsd or mrd, got '" + f.method + "'");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian step-down multiple testing under known correlation"};
  app.require_subcommand(1);

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo comparison of testing procedures");
  simulate->add_option("--config", sim.config_path, "JSON config file; flags override its fields");
  simulate->add_option("--m", sim.m, "Number of hypotheses");
  simulate->add_option("--cov", sim.cov, "identity|intraclass|ar1|block|custom");
  simulate->add_option("--rho", sim.rho, "Correlation parameter");
  simulate->add_option("--block-size", sim.block_size, "Block size for cov=block");
  simulate->add_option("--sigma-file", sim.sigma_file, "Dense matrix file for cov=custom");
  simulate->add_option("--p", sim.p, "True non-null proportion");
  simulate->add_option("--v", sim.v, "True slab variance");
  simulate->add_option("--delta", sim.delta, "BSD threshold (default 1)");
  simulate->add_option("--alpha", sim.alpha, "Level for p-value methods and MRD (default 0.05)");
  simulate->add_option("--gamma", sim.gamma, "Estimator tuning constant (default 0.25)");
  simulate->add_option("--methods", sim.methods, "Comma list of bsd,mrd,bh,by,bonf,abh");
  simulate->add_flag("--estimate-params", sim.estimate_params, "Plug estimated p and V into BSD");
  simulate->add_option("--reps", sim.reps, "Monte Carlo replicates");
  simulate->add_option("--seed", sim.seed, "Base seed");
  simulate->add_option("--out", sim.out, "Report path (stdout when omitted)");
  simulate->add_option("--format", sim.format, "csv|json");
  simulate->add_option("--threads", sim.threads, "Worker threads over replicates");
  simulate->add_flag("--quiet", sim.quiet, "No progress output");

  TestOneFlags one;
  auto* test_one = app.add_subcommand("test-one", "Run one dataset and print the step trace");
  test_one->add_option("--x-file", one.x_file, "Whitespace-separated data vector")->required();
  test_one->add_option("--sigma-file", one.sigma_file, "Dense covariance file (standardised)");
  test_one->add_option("--cov", one.cov, "Family when no sigma file is given");
  test_one->add_option("--rho", one.rho, "Correlation parameter");
  test_one->add_option("--block-size", one.block_size, "Block size for cov=block");
  test_one->add_option("--p", one.p, "Non-null proportion");
  test_one->add_option("--v", one.v, "Slab variance");
  test_one->add_option("--delta", one.delta, "BSD threshold");
  test_one->add_option("--alpha", one.alpha, "MRD level for the default critical sequence");
  test_one->add_option("--gamma", one.gamma, "Estimator tuning constant");
  test_one->add_option("--method", one.method, "bsd|mrd");
  test_one->add_option("--crit-file", one.crit_file, "MRD critical constants, one per line");
  test_one->add_flag("--estimate-params", one.estimate_params, "Estimate p and V from x");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim, *simulate);
    return run_test_one(one);
  } catch (const bsdtest::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const bsdtest::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const bsdtest::DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const bsdtest::ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
