#pragma once

#include <vector>

#include "shs6v/qspecial.hpp"

namespace shs6v {

struct StepTilt {
  double lambda = 1.0;
  double mu = 0.0;
};

// Normalizing and centering parameters of the tilted one-step walk at time k.
StepTilt step_tilt(const ModelParams& p, double rho, long k);

// Untilted one-step jump law of a single reversed particle: P'(n), n = 0..nmax.
std::vector<double> jump_pmf(const ModelParams& p, long k, int nmax);

struct TiltFrame {
  ModelParams params;
  double rho = 0.0;
  std::vector<double> lam;  // one entry per phase 0..J-1
  std::vector<double> mu;

  static TiltFrame make(const ModelParams& p, double rho);
  double lambda_at(long k) const { return lam[size_t(params.mod(k))]; }
  double mu_at(long k) const { return mu[size_t(params.mod(k))]; }
  double log_lambda_hat(long t) const;
  double lambda_hat(long t) const;
  double mu_hat(long t) const;
  // Tilted weights lambda(k) P'(n) q^{rho n}; R(k) = n - mu(k).
  std::vector<double> tilted_pmf(long k, int nmax) const;
  // Index n beyond which the tilted tail (ratio theta q^rho) is below tol.
  int tail_cut(long k, double tol) const;
};

}  // namespace shs6v
