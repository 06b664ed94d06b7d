#pragma once

#include <vector>

#include "shs6v/qspecial.hpp"

namespace shs6v {

struct StationaryDist {
  double rho = 0.0;
  double chi = 0.0;
  std::vector<double> pmf;
  double mean = 0.0;
  double variance = 0.0;
};

// Negative root of sum_{i=1}^{I} chi / (chi - q^i) = rho.
double solve_chi(const ModelParams& p, double rho);
StationaryDist pi_rho(const ModelParams& p, double chi);
StationaryDist stationary_dist(const ModelParams& p, double rho);
double stationary_variance_formula(const ModelParams& p, double chi);

// Flux across any bond at step t under the product measure: Bernoulli(alpha(t) chi / (1 + alpha(t) chi)).
double flux_mean(const ModelParams& p, double chi, long t);

// Fused-step tilt parameters lambda, mu for density rho.
struct LambdaMu {
  double lambda = 1.0;
  double mu = 0.0;
};
LambdaMu fused_lambda_mu(const ModelParams& p, double rho);

double steady_current_j(const ModelParams& p, double rho);
double integrated_covariance_A(const ModelParams& p, double rho);
// Central second difference; h <= 0 selects max(1e-3, eps^(1/4)).
double neg_j_second_derivative(const ModelParams& p, double rho, double h = 0.0);
double default_j_step(const ModelParams& p);

struct KpzCoefficients {
  double V_star = 0.0;
  double D_star = 0.0;
};
KpzCoefficients kpz_coefficients(int I, int J, double b, double rho);
KpzCoefficients kpz_coefficients(const ModelParams& p);

}  // namespace shs6v
