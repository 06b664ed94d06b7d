#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shs6v/qspecial.hpp"

namespace shs6v {

// Flat key=value configuration of a KPZ-scaling scan. Times are fused steps.
struct ExperimentConfig {
  int I = 2;
  int J = 1;
  double b = 0.8;
  double rho = 1.0;
  std::vector<double> eps{0.01};
  long steps = 100;
  std::vector<long> times;  // empty: 0, steps/4, steps/2, steps
  long replicas = 200;
  std::uint64_t seed = 42;
  long sites = 0;           // 0: ceil(1/eps) sampled sites
  double horizon = 1.0;     // eps^2 * steps must not exceed this
  bool records = false;     // also emit one row per (replica, t, x)
  std::string csv;
  std::string json;

  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_text(const ExperimentConfig& c);
std::string config_to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const std::string& json);
// Throws ParameterError naming the violated constraint.
void validate(const ExperimentConfig& c);
std::vector<long> sample_times(const ExperimentConfig& c);

struct FluctuationRecord {
  double epsilon = 0.0;
  long replica = 0;
  long t = 0;
  long x = 0;
  long X = 0;             // integer label x + floor(mu t)
  double remainder = 0.0; // mu t - floor(mu t)
  double value = 0.0;     // sqrt(eps) (N^f(t, X) - rho X) - t log lambda
};

struct ScanRow {
  double epsilon = 0.0;
  long t = 0;
  long samples = 0;
  double mean = 0.0;
  double stderr_ = 0.0;     // from per-replica spatial means
  double exact_mean = 0.0;  // -sqrt(eps) sum E[K] - t log lambda
  double incr_var = 0.0;    // variance of N^f increments per site
  double pi_var = 0.0;      // Var[pi_rho]
  double incr_cov1 = 0.0;   // lag-one covariance of increments
};

struct CoefficientRow {
  double epsilon = 0.0;
  double lambda = 0.0, mu = 0.0;
  double A = 0.0, neg_j2 = 0.0, j_step = 0.0;
  double V_star = 0.0, D_star = 0.0;
};

struct ScanResult {
  ExperimentConfig config;
  std::vector<ScanRow> rows;
  std::vector<CoefficientRow> coefficients;
  std::vector<FluctuationRecord> records;
};

ScanResult kpz_scan(const ExperimentConfig& c);

std::string scan_csv(const ScanResult& r);
std::string records_csv(const ScanResult& r);
std::string scan_json(const ScanResult& r);
// Writes text to path; throws IOError.
void write_text(const std::string& path, const std::string& text);
// Writes the summary CSV (and records CSV as <csv stem>_records.csv) and the JSON report where configured.
void emit(const ScanResult& r);

extern const char* const kScanCsvHeader;
extern const char* const kRecordsCsvHeader;

}  // namespace shs6v
