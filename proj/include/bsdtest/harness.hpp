#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bsdtest/covariance.hpp"
#include "bsdtest/model.hpp"
#include "bsdtest/step_down.hpp"

namespace bsdtest {

inline constexpr std::string_view kLibraryVersion = "0.1.0";

enum class Method { bsd, mrd, bh, by, bonf, abh };
enum class ReportFormat { csv, json };

std::string_view to_string(Method m);
Method parse_method(std::string_view name);
/// Comma-separated list, e.g. "bsd,bh,abh". Empty string gives no methods.
std::vector<Method> parse_methods(std::string_view list);
std::string_view to_string(ReportFormat f);
ReportFormat parse_report_format(std::string_view name);

struct ExperimentConfig {
  Eigen::Index m = 100;
  CovarianceKind cov = CovarianceKind::identity;
  double rho = 0.0;
  Eigen::Index block_size = 5;
  std::string sigma_file;
  double p = 0.1;
  double v = 16.0;
  double delta = 1.0;
  double alpha = 0.05;
  double gamma = 0.25;
  std::vector<Method> methods{Method::bsd, Method::mrd, Method::bh,
                              Method::by,  Method::bonf, Method::abh};
  bool estimate_params = false;
  Eigen::Index reps = 100;
  std::uint64_t seed = 1;
  std::string out;
  ReportFormat format = ReportFormat::csv;
  unsigned threads = 1;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
  /// Loads the covariance family (reads sigma_file for `custom`).
  CovarianceFamily family() const;

  nlohmann::json to_json() const;
  /// Overlays the keys present in `j` onto `base`.
  static ExperimentConfig from_json(const nlohmann::json& j, ExperimentConfig base);
  static ExperimentConfig from_json(const nlohmann::json& j);
};

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + fp + tn + fn; }
  std::int64_t rejections() const { return tp + fp; }
  std::int64_t signals() const { return tp + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

ConfusionCounts score_replicate(const DecisionVector& decisions, const GroundTruth& truth);

/// Metric names, in report order.
inline constexpr std::string_view kMetricNames[] = {"misclassification", "fdr", "fnr", "power",
                                                     "rejections"};

struct MetricValue {
  std::string metric;
  double estimate = 0.0;
  double std_error = 0.0;
  friend bool operator==(const MetricValue&, const MetricValue&) = default;
};

struct MethodReport {
  Method method = Method::bsd;
  std::vector<MetricValue> metrics;
  friend bool operator==(const MethodReport&, const MethodReport&) = default;

  const MetricValue& metric(std::string_view name) const;
};

struct MetricsReport {
  std::int64_t replicates = 0;
  std::vector<MethodReport> methods;
  nlohmann::json config;
  std::string version{kLibraryVersion};
  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;

  const MethodReport& method(Method m) const;
};

/// Per-replicate metric values derived from confusion counts.
struct ReplicateMetrics {
  double misclassification = 0.0;  // (fp + fn) / m
  double fdr = 0.0;                // fp / max(R, 1)
  double fnr = 0.0;                // fn / max(m - R, 1)
  double power = 0.0;              // tp / max(#signals, 1)
  double rejections = 0.0;
};
ReplicateMetrics replicate_metrics(const ConfusionCounts& c);

/// Mean and Monte Carlo standard error of per-replicate values.
MetricValue summarize(std::string_view metric, const std::vector<double>& values);

MetricsReport run_experiment(const ExperimentConfig& cfg);
/// Same, logging progress lines to `log` when non-null.
MetricsReport run_experiment(const ExperimentConfig& cfg, std::ostream* log);

void write_csv(std::ostream& out, const MetricsReport& report);
nlohmann::json to_json(const MetricsReport& report);
MetricsReport report_from_json(const nlohmann::json& j);
void emit_report(std::ostream& out, const MetricsReport& report, ReportFormat format);
/// Writes to `path`; throws std::runtime_error naming the path on I/O failure.
void emit_report(const std::string& path, const MetricsReport& report, ReportFormat format);

}  // namespace bsdtest
