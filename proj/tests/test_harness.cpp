#include <doctest.h>

#include <sstream>

#include "bsdtest/harness.hpp"

using namespace bsdtest;

namespace {

GroundTruth truth_of(std::initializer_list<int> nu) {
  GroundTruth t;
  t.nu.resize(static_cast<Eigen::Index>(nu.size()));
  t.mu = VectorXd::Zero(t.nu.size());
  Eigen::Index i = 0;
  for (int v : nu) t.nu(i++) = v;
  return t;
}

std::string json_bytes(const MetricsReport& r) {
  std::ostringstream out;
  emit_report(out, r, ReportFormat::json);
  return out.str();
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("score_replicate") {
  const auto nulls = truth_of({0, 0, 0, 0});
  CHECK(score_replicate(DecisionVector(4, false), nulls) == ConfusionCounts{0, 0, 4, 0});
  CHECK(score_replicate(DecisionVector(4, true), nulls) == ConfusionCounts{0, 4, 0, 0});
  const auto mixed = truth_of({1, 0, 1, 0, 0});
  const auto exact = score_replicate({true, false, true, false, false}, mixed);
  CHECK(exact.fp == 0);
  CHECK(exact.fn == 0);
  CHECK(exact.total() == 5);
  CHECK_THROWS_AS(score_replicate(DecisionVector(3, false), mixed), DomainError);
}

TEST_CASE("replicate metrics reconcile with counts") {
  const ConfusionCounts c{3, 1, 90, 6};
  const auto m = replicate_metrics(c);
  CHECK(m.misclassification == doctest::Approx(0.07));
  CHECK(m.fdr == doctest::Approx(0.25));
  CHECK(m.fnr == doctest::Approx(6.0 / 96.0));
  CHECK(m.power == doctest::Approx(3.0 / 9.0));
  CHECK(m.rejections == 4.0);
  const auto zero = replicate_metrics({0, 0, 10, 0});
  CHECK(zero.fdr == 0.0);
  CHECK(zero.power == 0.0);
}

TEST_CASE("config validation names the field") {
  ExperimentConfig cfg;
  auto message = [](const ExperimentConfig& c) {
    try {
      c.validate();
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(cfg).empty());
  cfg.p = 1.5;
  CHECK(message(cfg).rfind("p:", 0) == 0);
  cfg = {};
  cfg.reps = 0;
  CHECK(message(cfg).rfind("reps:", 0) == 0);
  cfg = {};
  cfg.cov = CovarianceKind::intraclass;
  cfg.m = 11;
  cfg.rho = -0.2;
  CHECK(message(cfg).rfind("rho:", 0) == 0);
  cfg = {};
  cfg.cov = CovarianceKind::custom;
  CHECK(message(cfg).rfind("sigma-file:", 0) == 0);
  cfg = {};
  cfg.alpha = 0.0;
  CHECK(message(cfg).rfind("alpha:", 0) == 0);  // mrd needs a positive level
  cfg.methods = {Method::bonf};
  CHECK(message(cfg).empty());
  CHECK_THROWS_AS(parse_methods("bsd,nope"), ConfigError);
  CHECK(parse_methods("bsd,,abh") == std::vector<Method>{Method::bsd, Method::abh});
  CHECK(parse_methods("").empty());
}

TEST_CASE("config JSON overlay") {
  const auto j = nlohmann::json::parse(R"({
    "m": 30,
    "covariance": {"family": "ar1", "rho": 0.4},
    "model": {"p": 0.2, "v": 9},
    "methods": ["bsd", "bh"],
    "reps": 7
  })");
  const auto cfg = ExperimentConfig::from_json(j);
  CHECK(cfg.m == 30);
  CHECK(cfg.cov == CovarianceKind::ar1);
  CHECK(cfg.rho == 0.4);
  CHECK(cfg.p == 0.2);
  CHECK(cfg.v == 9.0);
  CHECK(cfg.delta == 1.0);
  CHECK(cfg.methods == std::vector<Method>{Method::bsd, Method::bh});
  CHECK(cfg.reps == 7);
  const auto round = ExperimentConfig::from_json(cfg.to_json());
  CHECK(round.to_json() == cfg.to_json());
  CHECK_THROWS_AS(ExperimentConfig::from_json(nlohmann::json::parse(R"({"m": "ten"})")), ConfigError);
}

TEST_CASE("run_experiment is reproducible") {
  ExperimentConfig cfg;
  cfg.m = 2;
  cfg.reps = 1;
  cfg.seed = 17;
  const auto a = json_bytes(run_experiment(cfg));
  const auto b = json_bytes(run_experiment(cfg));
  CHECK(a == b);

  cfg.m = 40;
  cfg.reps = 30;
  cfg.cov = CovarianceKind::ar1;
  cfg.rho = 0.5;
  cfg.estimate_params = true;
  const auto sequential = run_experiment(cfg);
  cfg.threads = 4;
  const auto parallel = run_experiment(cfg);
  CHECK(sequential.methods == parallel.methods);
}

TEST_CASE("bonferroni at alpha = 0 never rejects") {
  ExperimentConfig cfg;
  cfg.m = 50;
  cfg.reps = 20;
  cfg.alpha = 0.0;
  cfg.methods = {Method::bonf};
  const auto r = run_experiment(cfg);
  CHECK(r.method(Method::bonf).metric("fdr").estimate == 0.0);
  CHECK(r.method(Method::bonf).metric("power").estimate == 0.0);
  CHECK(r.method(Method::bonf).metric("rejections").estimate == 0.0);
}

TEST_CASE("BSD sanity at m = 100") {
  ExperimentConfig cfg;
  cfg.m = 100;
  cfg.p = 0.2;
  cfg.v = 10.0;
  cfg.reps = 500;
  cfg.methods = {Method::bsd, Method::bh};
  const auto r = run_experiment(cfg);
  const auto& bsd = r.method(Method::bsd);
  CHECK(bsd.metric("power").estimate > 0.0);
  CHECK(bsd.metric("power").std_error < 0.05);
  CHECK(bsd.metric("fdr").std_error < 0.05);
  for (const auto& mr : r.methods)
    for (const auto& mv : mr.metrics)
      if (mv.metric != "rejections") {
        CHECK(mv.estimate >= 0.0);
        CHECK(mv.estimate <= 1.0);
      }
}

TEST_CASE("reports: CSV shape and JSON round trip") {
  ExperimentConfig cfg;
  cfg.m = 10;
  cfg.reps = 3;
  cfg.methods = {};
  std::ostringstream empty;
  emit_report(empty, run_experiment(cfg), ReportFormat::csv);
  CHECK(empty.str() == "method,metric,estimate,std_error,replicates\n");

  cfg.methods = {Method::bsd, Method::mrd, Method::abh};
  const auto report = run_experiment(cfg);
  std::ostringstream csv;
  emit_report(csv, report, ReportFormat::csv);
  CHECK(line_count(csv.str()) == 1 + 3 * std::size(kMetricNames));

  const auto parsed = report_from_json(nlohmann::json::parse(json_bytes(report)));
  CHECK(parsed == report);
  CHECK(parsed.version == kLibraryVersion);

  CHECK_THROWS_WITH_AS(emit_report("/no/such/dir/report.csv", report, ReportFormat::csv),
                       doctest::Contains("/no/such/dir/report.csv"), std::runtime_error);
  CHECK_THROWS_AS(report_from_json(nlohmann::json::parse(R"({"version": "x"})")), ParseError);
}
