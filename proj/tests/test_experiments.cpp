#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <omp.h>

#include "doctest.h"
#include "shs6v/experiments.hpp"
#include "shs6v/stationary.hpp"

using namespace shs6v;

TEST_CASE("config text and JSON round trips") {
  ExperimentConfig c;
  c.eps = {0.04, 0.01};
  c.times = {0, 10, 20};
  c.steps = 20;
  c.replicas = 7;
  c.records = true;
  c.csv = "out.csv";
  CHECK(parse_config(config_to_text(c)) == c);
  CHECK(config_from_json(config_to_json(c)) == c);
  ExperimentConfig r;
  r.replicas = 3;
  r.steps = 8;
  CHECK(config_from_json(scan_json(kpz_scan(r))) == r);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("I = 2\nfoo = 1\n"), ParameterError);
  CHECK_THROWS_AS(parse_config("I = two\n"), ParameterError);
  CHECK_THROWS_AS(parse_config("just words\n"), ParameterError);
  CHECK(parse_config("# comment\n\nI = 3  # trailing\n").I == 3);
  ExperimentConfig c;
  c.steps = 100000;
  CHECK_THROWS_AS(validate(c), ParameterError);  // eps^2 T above the horizon
  c.steps = 10;
  c.times = {11};
  CHECK_THROWS_AS(validate(c), ParameterError);
  c.times = {};
  c.b = 0.2;
  CHECK_THROWS_AS(validate(c), ParameterError);
  CHECK_THROWS_AS(load_config("/nonexistent/path.cfg"), IOError);
}

TEST_CASE("sample times") {
  ExperimentConfig c;
  c.steps = 100;
  CHECK(sample_times(c) == std::vector<long>{0, 25, 50, 100});
  c.times = {50, 0, 50};
  CHECK(sample_times(c) == std::vector<long>{0, 50});
}

TEST_CASE("empty run gives a header-only CSV") {
  ExperimentConfig c;
  c.replicas = 0;
  c.steps = 4;
  ScanResult r = kpz_scan(c);
  CHECK(records_csv(r) == std::string(kRecordsCsvHeader) + "\n");
  ScanResult none;
  CHECK(scan_csv(none) == std::string(kScanCsvHeader) + "\n");
}

TEST_CASE("scan is deterministic and thread-count independent") {
  ExperimentConfig c;
  c.eps = {0.04};
  c.steps = 20;
  c.replicas = 16;
  c.records = true;
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  ScanResult a = kpz_scan(c);
  omp_set_num_threads(std::max(2, saved));
  ScanResult b = kpz_scan(c);
  omp_set_num_threads(saved);
  CHECK(scan_csv(a) == scan_csv(b));
  CHECK(records_csv(a) == records_csv(b));
  CHECK(a.records.size() == size_t(16 * 25 * 4));
}

TEST_CASE("stationary drift cancels") {
  ExperimentConfig c;
  c.eps = {0.01};
  c.steps = 100;
  c.replicas = 200;
  ScanResult r = kpz_scan(c);
  ModelParams p = ModelParams::make_scaled(2, 1, 0.8, 1.0, 0.01);
  for (const ScanRow& row : r.rows) {
    CHECK(std::fabs(row.mean - row.exact_mean) < 4.0 * row.stderr_ + 1e-12);
    CHECK(row.incr_var == doctest::Approx(row.pi_var).epsilon(0.1));
  }
  REQUIRE(r.coefficients.size() == 1);
  CHECK(r.coefficients[0].V_star == doctest::Approx(1.75));
  CHECK(r.coefficients[0].D_star == doctest::Approx(0.875));
  CHECK(r.coefficients[0].A == doctest::Approx(integrated_covariance_A(p, 1.0)));
}

TEST_CASE("emit writes the configured files") {
  ExperimentConfig c;
  c.steps = 4;
  c.replicas = 2;
  c.records = true;
  std::string stem = (std::filesystem::temp_directory_path() / "shs6v_emit_test").string();
  c.csv = stem + ".csv";
  c.json = stem + ".json";
  emit(kpz_scan(c));
  for (const std::string& f : {c.csv, c.json, stem + "_records.csv"}) {
    std::ifstream in(f);
    CHECK(in.good());
    std::remove(f.c_str());
  }
  CHECK_THROWS_AS(write_text("/nonexistent/dir/x.csv", "x"), IOError);
}
