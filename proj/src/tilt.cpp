#include "shs6v/tilt.hpp"

#include <cmath>

namespace shs6v {

StepTilt step_tilt(const ModelParams& p, double rho, long k) {
  double a = p.alpha_t(k), q = p.q, nu = p.nu, qr = std::pow(q, rho);
  double d1 = 1.0 + a * q - qr * (a * q + nu);
  double d0 = 1.0 + a - qr * (a + nu);
  if (d1 == 0.0 || d0 == 0.0) throw DegenerateTilt("step_tilt: vanishing denominator");
  return {d0 / d1, a * (1.0 - q) * (1.0 - nu) * qr / (d1 * d0)};
}

std::vector<double> jump_pmf(const ModelParams& p, long k, int nmax) {
  double a = p.alpha_t(k), th = p.theta_t(k);
  std::vector<double> P(size_t(nmax) + 1);
  P[0] = (1.0 + a * p.q) / (1.0 + a);
  double w = a * (1.0 - p.q) / (1.0 + a) * (1.0 - th);
  for (int n = 1; n <= nmax; ++n) {
    P[n] = w;
    w *= th;
  }
  return P;
}

TiltFrame TiltFrame::make(const ModelParams& p, double rho) {
  TiltFrame f;
  f.params = p;
  f.rho = rho;
  for (int k = 0; k < p.J; ++k) {
    StepTilt s = step_tilt(p, rho, k);
    f.lam.push_back(s.lambda);
    f.mu.push_back(s.mu);
  }
  return f;
}

double TiltFrame::log_lambda_hat(long t) const {
  double s = 0.0;
  long full = t / params.J;
  double per = 0.0;
  for (double l : lam) per += std::log(l);
  s = per * double(full);
  for (long k = full * params.J; k < t; ++k) s += std::log(lambda_at(k));
  return s;
}

double TiltFrame::lambda_hat(long t) const { return std::exp(log_lambda_hat(t)); }

double TiltFrame::mu_hat(long t) const {
  long full = t / params.J;
  double per = 0.0;
  for (double m : mu) per += m;
  double s = per * double(full);
  for (long k = full * params.J; k < t; ++k) s += mu_at(k);
  return s;
}

std::vector<double> TiltFrame::tilted_pmf(long k, int nmax) const {
  std::vector<double> P = jump_pmf(params, k, nmax);
  double qr = std::pow(params.q, rho), w = lambda_at(k);
  for (auto& v : P) {
    v *= w;
    w *= qr;
  }
  return P;
}

int TiltFrame::tail_cut(long k, double tol) const {
  double r = params.theta_t(k) * std::pow(params.q, rho);
  if (!(r < 1.0)) throw DegenerateTilt("tilted walk has no finite mean: theta q^rho >= 1");
  if (r <= 0.0) return 1;
  return 1 + int(std::ceil(std::log(tol * (1.0 - r)) / std::log(r)));
}

}  // namespace shs6v
