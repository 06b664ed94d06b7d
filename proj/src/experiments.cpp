#include "shs6v/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "shs6v/dynamics.hpp"
#include "shs6v/errors.hpp"
#include "shs6v/stationary.hpp"

namespace shs6v {

const char* const kScanCsvHeader = "epsilon,t,samples,mean,stderr,exact_mean,incr_var,pi_var,incr_cov1";
const char* const kRecordsCsvHeader = "epsilon,replica,t,x,X,remainder,value";

namespace {

struct ReplicaStats {
  std::vector<double> sum, sum2;       // field, per sample time
  std::vector<double> d1, d2, dd;      // increments: sum, sum of squares, lag-one products
  std::vector<FluctuationRecord> rec;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

ScanResult kpz_scan(const ExperimentConfig& c) {
  validate(c);
  ScanResult out;
  out.config = c;
  const std::vector<long> times = sample_times(c);
  const size_t nt = times.size();
  for (size_t ei = 0; ei < c.eps.size(); ++ei) {
    const double e = c.eps[ei];
    const double se = std::sqrt(e);
    ModelParams p = ModelParams::make_scaled(c.I, c.J, c.b, c.rho, e);
    const LambdaMu lm = fused_lambda_mu(p, c.rho);
    const StationaryDist pi = stationary_dist(p, c.rho);
    const long nx = c.sites > 0 ? c.sites : long(std::ceil(1.0 / e));

    std::vector<long> shift(nt);
    for (size_t k = 0; k < nt; ++k) shift[k] = long(std::floor(lm.mu * double(times[k])));
    const long lo = std::min(0L, *std::min_element(shift.begin(), shift.end()));
    const long hi = *std::max_element(shift.begin(), shift.end()) + nx;
    const int width = int(hi - lo + 1);

    CoefficientRow cr;
    cr.epsilon = e;
    cr.lambda = lm.lambda;
    cr.mu = lm.mu;
    cr.A = integrated_covariance_A(p, c.rho);
    cr.j_step = default_j_step(p);
    cr.neg_j2 = neg_j_second_derivative(p, c.rho);
    KpzCoefficients kc = kpz_coefficients(p);
    cr.V_star = kc.V_star;
    cr.D_star = kc.D_star;
    out.coefficients.push_back(cr);

    const long R = c.replicas;
    std::vector<ReplicaStats> reps(size_t(std::max(0L, R)));
    const std::uint64_t eseed = derive_seed(c.seed, ei);
#pragma omp parallel for schedule(dynamic)
    for (long r = 0; r < R; ++r) {
      ReplicaStats& st = reps[size_t(r)];
      st.sum.assign(nt, 0.0);
      st.sum2.assign(nt, 0.0);
      st.d1.assign(nt, 0.0);
      st.d2.assign(nt, 0.0);
      st.dd.assign(nt, 0.0);
      const std::uint64_t s = derive_seed(eseed, std::uint64_t(r));
      OccupancyWindow w = make_initial(p, InitialKind::ProductPiRho, lo, width, c.rho, Boundary::StationarySource, s);
      Environment env{s};
      long unfused = 0;
      for (size_t k = 0; k < nt; ++k) {
        for (; unfused < long(c.J) * times[k]; ++unfused) w = step_unfused(p, w, unfused, env).next;
        const double tl = double(times[k]) * std::log(lm.lambda);
        const double rem = lm.mu * double(times[k]) - double(shift[k]);
        long n = w.height(shift[k] - 1);
        int prev = -1;
        for (long x = 0; x < nx; ++x) {
          const long X = x + shift[k];
          const int eta = w.at(X);
          n += eta;
          const double v = se * (double(n) - c.rho * double(X)) - tl;
          st.sum[k] += v;
          st.sum2[k] += v * v;
          st.d1[k] += eta;
          st.d2[k] += double(eta) * eta;
          if (prev >= 0) st.dd[k] += double(prev) * eta;
          prev = eta;
          if (c.records) st.rec.push_back({e, r, times[k], x, X, rem, v});
        }
      }
    }

    for (size_t k = 0; k < nt; ++k) {
      ScanRow row;
      row.epsilon = e;
      row.t = times[k];
      row.samples = R * nx;
      row.pi_var = pi.variance;
      double ek = 0.0;
      for (long s = 0; s < long(c.J) * times[k]; ++s) ek += flux_mean(p, pi.chi, s);
      row.exact_mean = -se * ek - double(times[k]) * std::log(lm.lambda);
      if (R > 0 && nx > 0) {
        double s = 0, s1 = 0, s2 = 0, d1 = 0, d2 = 0, dd = 0;
        for (const auto& st : reps) {
          s += st.sum[k];
          double m = st.sum[k] / double(nx);
          s1 += m;
          s2 += m * m;
          d1 += st.d1[k];
          d2 += st.d2[k];
          dd += st.dd[k];
        }
        const double N = double(R) * double(nx);
        row.mean = s / N;
        double mr = s1 / double(R);
        row.stderr_ = R > 1 ? std::sqrt(std::max(0.0, (s2 - double(R) * mr * mr) / double(R - 1)) / double(R)) : 0.0;
        double md = d1 / N;
        row.incr_var = d2 / N - md * md;
        row.incr_cov1 = nx > 1 ? dd / (double(R) * double(nx - 1)) - md * md : 0.0;
      }
      out.rows.push_back(row);
    }
    for (auto& st : reps) out.records.insert(out.records.end(), st.rec.begin(), st.rec.end());
  }
  return out;
}

std::string scan_csv(const ScanResult& r) {
  std::string s = std::string(kScanCsvHeader) + "\n";
  for (const auto& w : r.rows)
    s += fmt(w.epsilon) + "," + std::to_string(w.t) + "," + std::to_string(w.samples) + "," + fmt(w.mean) + "," +
         fmt(w.stderr_) + "," + fmt(w.exact_mean) + "," + fmt(w.incr_var) + "," + fmt(w.pi_var) + "," +
         fmt(w.incr_cov1) + "\n";
  return s;
}

std::string records_csv(const ScanResult& r) {
  std::string s = std::string(kRecordsCsvHeader) + "\n";
  for (const auto& f : r.records)
    s += fmt(f.epsilon) + "," + std::to_string(f.replica) + "," + std::to_string(f.t) + "," + std::to_string(f.x) +
         "," + std::to_string(f.X) + "," + fmt(f.remainder) + "," + fmt(f.value) + "\n";
  return s;
}

std::string scan_json(const ScanResult& r) {
  nlohmann::ordered_json j;
  j["config"] = nlohmann::ordered_json::parse(config_to_json(r.config));
  auto& co = j["coefficients"] = nlohmann::ordered_json::array();
  for (const auto& c : r.coefficients)
    co.push_back({{"epsilon", c.epsilon},
                  {"lambda", c.lambda},
                  {"mu", c.mu},
                  {"A", c.A},
                  {"neg_j2", c.neg_j2},
                  {"j_step", c.j_step},
                  {"V_star", c.V_star},
                  {"D_star", c.D_star},
                  {"J_V_star", r.config.J * c.V_star}});
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& w : r.rows)
    rows.push_back({{"epsilon", w.epsilon},
                    {"t", w.t},
                    {"samples", w.samples},
                    {"mean", w.mean},
                    {"stderr", w.stderr_},
                    {"exact_mean", w.exact_mean},
                    {"incr_var", w.incr_var},
                    {"pi_var", w.pi_var},
                    {"incr_cov1", w.incr_cov1}});
  return j.dump(2) + "\n";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IOError("cannot write " + path);
  f << text;
  if (!f) throw IOError("write failed for " + path);
}

void emit(const ScanResult& r) {
  const auto& c = r.config;
  if (!c.csv.empty()) {
    write_text(c.csv, scan_csv(r));
    if (c.records) {
      std::string stem = c.csv;
      if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv") stem.resize(stem.size() - 4);
      write_text(stem + "_records.csv", records_csv(r));
    }
  }
  if (!c.json.empty()) write_text(c.json, scan_json(r));
}

}  // namespace shs6v
