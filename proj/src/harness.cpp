#include "bsdtest/harness.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "bsdtest/baselines.hpp"
#include "bsdtest/bsd.hpp"
#include "bsdtest/estimators.hpp"
#include "bsdtest/mrd.hpp"

namespace bsdtest {

using nlohmann::json;

std::string_view to_string(Method m) {
  switch (m) {
    case Method::bsd: return "bsd";
    case Method::mrd: return "mrd";
    case Method::bh: return "bh";
    case Method::by: return "by";
    case Method::bonf: return "bonf";
    case Method::abh: return "abh";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (auto m : {Method::bsd, Method::mrd, Method::bh, Method::by, Method::bonf, Method::abh})
    if (to_string(m) == name) return m;
  throw ConfigError("methods: unknown method '" + std::string(name) +
                    "' (expected bsd, mrd, bh, by, bonf, abh)");
}

std::vector<Method> parse_methods(std::string_view list) {
  std::vector<Method> out;
  while (!list.empty()) {
    const auto comma = list.find(',');
    const auto item = list.substr(0, comma);
    if (!item.empty()) out.push_back(parse_method(item));
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  return out;
}

std::string_view to_string(ReportFormat f) { return f == ReportFormat::csv ? "csv" : "json"; }

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  throw ConfigError("format: expected csv or json, got '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Configuration

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& msg) {
    throw ConfigError(field + ": " + msg);
  };
  if (m < 1) fail("m", "must be >= 1");
  if (reps < 1) fail("reps", "must be >= 1");
  if (!(p > 0.0 && p < 1.0)) fail("p", "must lie in (0, 1)");
  if (!(v > 0.0)) fail("v", "must be positive");
  if (!(delta > 0.0)) fail("delta", "must be positive");
  if (!(alpha >= 0.0 && alpha < 1.0)) fail("alpha", "must lie in [0, 1)");
  if (!(gamma > 0.0 && gamma < 0.5)) fail("gamma", "must lie in (0, 1/2)");
  if (threads < 1) fail("threads", "must be >= 1");
  for (auto method : methods)
    if (method == Method::mrd && !(alpha > 0.0)) fail("alpha", "must be positive when mrd is selected");
  switch (cov) {
    case CovarianceKind::intraclass:
      if (!(rho > (m > 1 ? -1.0 / static_cast<double>(m - 1) : -INFINITY) && rho < 1.0))
        fail("rho", "outside the positive-definite range for intraclass");
      break;
    case CovarianceKind::ar1:
      if (!(std::abs(rho) < 1.0)) fail("rho", "|rho| must be < 1 for ar1");
      break;
    case CovarianceKind::block: {
      if (block_size < 1) fail("block-size", "must be >= 1");
      const Eigen::Index k = std::min(block_size, m);
      if (!(rho > (k > 1 ? -1.0 / static_cast<double>(k - 1) : -INFINITY) && rho < 1.0))
        fail("rho", "outside the positive-definite range for block");
      break;
    }
    case CovarianceKind::custom:
      if (sigma_file.empty()) fail("sigma-file", "required for cov=custom");
      break;
    case CovarianceKind::identity: break;
  }
}

CovarianceFamily ExperimentConfig::family() const {
  switch (cov) {
    case CovarianceKind::identity: return CovarianceFamily::identity(m);
    case CovarianceKind::intraclass: return CovarianceFamily::intraclass(m, rho);
    case CovarianceKind::ar1: return CovarianceFamily::ar1(m, rho);
    case CovarianceKind::block: return CovarianceFamily::block(m, block_size, rho);
    case CovarianceKind::custom: {
      auto f = CovarianceFamily::from_file(sigma_file);
      if (f.dim != m)
        throw ConfigError("sigma-file: matrix dimension " + std::to_string(f.dim) +
                          " does not match m = " + std::to_string(m));
      return f;
    }
  }
  throw ConfigError("cov: unknown family");
}

json ExperimentConfig::to_json() const {
  json methods_json = json::array();
  for (auto method : methods) methods_json.push_back(std::string(to_string(method)));
  json covariance = {{"family", std::string(to_string(cov))}, {"rho", rho}, {"block_size", block_size}};
  if (!sigma_file.empty()) covariance["sigma_file"] = sigma_file;
  return json{{"m", m},
              {"covariance", covariance},
              {"model", {{"p", p}, {"v", v}, {"delta", delta}}},
              {"alpha", alpha},
              {"gamma", gamma},
              {"methods", methods_json},
              {"estimate_params", estimate_params},
              {"reps", reps},
              {"seed", seed},
              {"format", std::string(to_string(format))}};
}

ExperimentConfig ExperimentConfig::from_json(const json& j) { return from_json(j, ExperimentConfig{}); }

ExperimentConfig ExperimentConfig::from_json(const json& j, ExperimentConfig base) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  auto read = [](const json& obj, const char* key, auto& field, const std::string& path) {
    if (!obj.contains(key)) return;
    try {
      obj.at(key).get_to(field);
    } catch (const json::exception&) {
      throw ConfigError(path + key + ": wrong type");
    }
  };
  read(j, "m", base.m, "");
  if (j.contains("covariance")) {
    const json& c = j.at("covariance");
    if (!c.is_object()) throw ConfigError("covariance: must be an object");
    if (c.contains("family")) {
      std::string name;
      read(c, "family", name, "covariance.");
      base.cov = parse_covariance_kind(name);
    }
    read(c, "rho", base.rho, "covariance.");
    read(c, "block_size", base.block_size, "covariance.");
    read(c, "sigma_file", base.sigma_file, "covariance.");
  }
  if (j.contains("model")) {
    const json& mj = j.at("model");
    if (!mj.is_object()) throw ConfigError("model: must be an object");
    read(mj, "p", base.p, "model.");
    read(mj, "v", base.v, "model.");
    read(mj, "delta", base.delta, "model.");
  }
  read(j, "alpha", base.alpha, "");
  read(j, "gamma", base.gamma, "");
  if (j.contains("methods")) {
    const json& mj = j.at("methods");
    if (mj.is_string()) {
      base.methods = parse_methods(mj.get<std::string>());
    } else if (mj.is_array()) {
      base.methods.clear();
      for (const auto& item : mj) {
        if (!item.is_string()) throw ConfigError("methods: entries must be strings");
        base.methods.push_back(parse_method(item.get<std::string>()));
      }
    } else {
      throw ConfigError("methods: must be a string or an array");
    }
  }
  read(j, "estimate_params", base.estimate_params, "");
  read(j, "reps", base.reps, "");
  read(j, "seed", base.seed, "");
  read(j, "out", base.out, "");
  read(j, "threads", base.threads, "");
  if (j.contains("format")) {
    std::string name;
    read(j, "format", name, "");
    base.format = parse_report_format(name);
  }
  return base;
}

// ---------------------------------------------------------------------------
// Scoring

ConfusionCounts score_replicate(const DecisionVector& decisions, const GroundTruth& truth) {
  if (static_cast<Eigen::Index>(decisions.size()) != truth.nu.size())
    throw DomainError("score_replicate: decisions and truth have different lengths");
  ConfusionCounts c;
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    const bool signal = truth.nu(static_cast<Eigen::Index>(i)) == 1;
    if (decisions[i]) {
      signal ? ++c.tp : ++c.fp;
    } else {
      signal ? ++c.fn : ++c.tn;
    }
  }
  return c;
}

ReplicateMetrics replicate_metrics(const ConfusionCounts& c) {
  auto ratio = [](std::int64_t num, std::int64_t den) {
    return static_cast<double>(num) / static_cast<double>(std::max<std::int64_t>(den, 1));
  };
  ReplicateMetrics r;
  r.misclassification = ratio(c.fp + c.fn, c.total());
  r.fdr = ratio(c.fp, c.rejections());
  r.fnr = ratio(c.fn, c.total() - c.rejections());
  r.power = ratio(c.tp, c.signals());
  r.rejections = static_cast<double>(c.rejections());
  return r;
}

MetricValue summarize(std::string_view metric, const std::vector<double>& values) {
  MetricValue out;
  out.metric = std::string(metric);
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  out.estimate = mean;
  out.std_error = values.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return out;
}

const MetricValue& MethodReport::metric(std::string_view name) const {
  for (const auto& mv : metrics)
    if (mv.metric == name) return mv;
  throw std::out_of_range("MethodReport: no metric '" + std::string(name) + "'");
}

const MethodReport& MetricsReport::method(Method m) const {
  for (const auto& r : methods)
    if (r.method == m) return r;
  throw std::out_of_range("MetricsReport: method '" + std::string(to_string(m)) + "' not present");
}

// ---------------------------------------------------------------------------
// Experiment driver

namespace {

struct Scenario {
  ExperimentConfig cfg;
  CovarianceFamily family;
  MixtureParams truth_params;
  std::optional<DatasetSampler> sampler;
  // Dense correlation and its inverse, present only when a dense method runs.
  std::optional<MatrixXd> sigma;
  std::optional<MatrixXd> sigma_inv;
  std::optional<CriticalSequence> critical;
  bool bsd_closed_form = false;
  double closed_form_rho = 0.0;
};

Scenario prepare(const ExperimentConfig& cfg) {
  Scenario s{cfg, cfg.family(), {cfg.p, cfg.v, cfg.delta}, std::nullopt, {}, {}, {}, false, 0.0};
  s.truth_params.validate();
  s.sampler.emplace(s.family, s.truth_params);
  bool need_dense = false;
  for (auto method : cfg.methods) {
    if (method == Method::bsd) {
      if (s.family.kind == CovarianceKind::intraclass || s.family.kind == CovarianceKind::identity) {
        s.bsd_closed_form = true;
        s.closed_form_rho = s.family.kind == CovarianceKind::intraclass ? s.family.rho : 0.0;
      } else {
        need_dense = true;
      }
    }
    if (method == Method::mrd) {
      need_dense = true;
      s.critical = CriticalSequence::sidak_holm(cfg.m, cfg.alpha);
    }
  }
  if (need_dense) {
    s.sigma = build_covariance(s.family);
    s.sigma_inv = spd_inverse(*s.sigma);
  }
  return s;
}

std::vector<ConfusionCounts> run_replicate(const Scenario& s, std::int64_t replicate) {
  const auto& cfg = s.cfg;
  const Dataset data = s.sampler->sample(cfg.seed, static_cast<std::uint64_t>(replicate));
  EstimatorConfig est;
  est.gamma = cfg.gamma;

  std::optional<double> p_hat;
  auto estimated_p = [&] {
    if (!p_hat) p_hat = estimate_p(data.x, est).clamped;
    return *p_hat;
  };
  std::optional<std::vector<double>> pv;
  auto pvalues = [&]() -> const std::vector<double>& {
    if (!pv) pv = two_sided_pvalues(data.x);
    return *pv;
  };

  std::vector<ConfusionCounts> counts;
  counts.reserve(cfg.methods.size());
  for (auto method : cfg.methods) {
    DecisionVector d;
    switch (method) {
      case Method::bsd: {
        MixtureParams params = s.truth_params;
        if (cfg.estimate_params) {
          params.p = estimated_p();
          params.v = estimate_v(data.x, params.p, est).clamped;
        }
        d = s.bsd_closed_form ? bsd_step_down_intraclass(data.x, s.closed_form_rho, params).decisions
                              : bsd_step_down(data.x, ActiveSet(*s.sigma, *s.sigma_inv), params).decisions;
        break;
      }
      case Method::mrd:
        d = mrd_step_down(data.x, ActiveSet(*s.sigma, *s.sigma_inv), *s.critical).decisions;
        break;
      case Method::bh: d = bh_step_up(pvalues(), cfg.alpha); break;
      case Method::by: d = by_step_up(pvalues(), cfg.alpha); break;
      case Method::bonf: d = bonferroni(pvalues(), cfg.alpha); break;
      case Method::abh: d = adaptive_bh(pvalues(), cfg.alpha, estimated_p()); break;
    }
    counts.push_back(score_replicate(d, data.truth));
  }
  return counts;
}

}  // namespace

MetricsReport run_experiment(const ExperimentConfig& cfg, std::ostream* log) {
  cfg.validate();
  const Scenario scenario = prepare(cfg);
  const auto reps = static_cast<std::size_t>(cfg.reps);
  std::vector<std::vector<ConfusionCounts>> results(reps);

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::mutex log_mutex;
  const std::size_t progress_every = std::max<std::size_t>(reps / 10, 1);

  auto worker = [&] {
    for (std::size_t r = next++; r < reps; r = next++) {
      try {
        results[r] = run_replicate(scenario, static_cast<std::int64_t>(r));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = reps;
        return;
      }
      const std::size_t finished = ++done;
      if (log && (finished % progress_every == 0 || finished == reps)) {
        std::lock_guard lock(log_mutex);
        *log << "[simulate] " << finished << "/" << reps << " replicates\n";
      }
    }
  };
  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::size_t>(std::max(cfg.threads, 1u), reps));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  // Reduction in replicate order, independent of scheduling.
  MetricsReport report;
  report.replicates = cfg.reps;
  report.config = cfg.to_json();
  for (std::size_t k = 0; k < cfg.methods.size(); ++k) {
    std::vector<double> mis, fdr, fnr, power, rej;
    for (std::size_t r = 0; r < reps; ++r) {
      const auto mm = replicate_metrics(results[r][k]);
      mis.push_back(mm.misclassification);
      fdr.push_back(mm.fdr);
      fnr.push_back(mm.fnr);
      power.push_back(mm.power);
      rej.push_back(mm.rejections);
    }
    MethodReport mr;
    mr.method = cfg.methods[k];
    mr.metrics = {summarize(kMetricNames[0], mis), summarize(kMetricNames[1], fdr),
                  summarize(kMetricNames[2], fnr), summarize(kMetricNames[3], power),
                  summarize(kMetricNames[4], rej)};
    report.methods.push_back(std::move(mr));
  }
  return report;
}

MetricsReport run_experiment(const ExperimentConfig& cfg) { return run_experiment(cfg, nullptr); }

// ---------------------------------------------------------------------------
// Reports

void write_csv(std::ostream& out, const MetricsReport& report) {
  std::ostringstream buf;
  buf << std::setprecision(12);
  buf << "method,metric,estimate,std_error,replicates\n";
  for (const auto& mr : report.methods)
    for (const auto& mv : mr.metrics)
      buf << to_string(mr.method) << ',' << mv.metric << ',' << mv.estimate << ',' << mv.std_error
          << ',' << report.replicates << '\n';
  out << buf.str();
}

json to_json(const MetricsReport& report) {
  json methods = json::array();
  for (const auto& mr : report.methods) {
    json metrics = json::array();
    for (const auto& mv : mr.metrics)
      metrics.push_back({{"metric", mv.metric}, {"estimate", mv.estimate}, {"std_error", mv.std_error}});
    methods.push_back({{"method", std::string(to_string(mr.method))}, {"metrics", metrics}});
  }
  return json{{"version", report.version},
              {"config", report.config},
              {"replicates", report.replicates},
              {"methods", methods}};
}

MetricsReport report_from_json(const json& j) {
  MetricsReport report;
  try {
    report.version = j.at("version").get<std::string>();
    report.config = j.at("config");
    report.replicates = j.at("replicates").get<std::int64_t>();
    for (const auto& mj : j.at("methods")) {
      MethodReport mr;
      mr.method = parse_method(mj.at("method").get<std::string>());
      for (const auto& vj : mj.at("metrics"))
        mr.metrics.push_back({vj.at("metric").get<std::string>(), vj.at("estimate").get<double>(),
                              vj.at("std_error").get<double>()});
      report.methods.push_back(std::move(mr));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  return report;
}

void emit_report(std::ostream& out, const MetricsReport& report, ReportFormat format) {
  if (format == ReportFormat::csv) {
    write_csv(out, report);
  } else {
    out << to_json(report).dump(2) << '\n';
  }
}

void emit_report(const std::string& path, const MetricsReport& report, ReportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open report file '" + path + "' for writing");
  emit_report(out, report, format);
  out.flush();
  if (!out) throw std::runtime_error("failed writing report file '" + path + "'");
}

}  // namespace bsdtest
