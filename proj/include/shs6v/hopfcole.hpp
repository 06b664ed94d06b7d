#pragma once

#include <cstdint>
#include <vector>

#include "shs6v/dynamics.hpp"
#include "shs6v/tilt.hpp"

namespace shs6v {

// Z(t, x) on the window, indexed by the integer label X = x + mu_hat(t); stored as log Z.
struct ZField {
  long t = 0;
  long x_left = 0;
  long base = 0;
  double log_lambda_hat = 0.0;
  double rho = 0.0;
  double log_q = 0.0;
  std::vector<double> log_z;

  long x_right() const { return x_left + long(log_z.size()) - 1; }
  double log_at(long X) const;
  double at(long X) const;
};

ZField z_transform(const OccupancyWindow& w, const TiltFrame& f, long t);

// (p(t+1, t) * Z(t))(x - mu(t)) / Z(t, x); the region left of the window carries height base.
double heat_ratio(const TiltFrame& f, const OccupancyWindow& w, long t, long X);
// E[K(t, X) | F(t)] for every window site from the flux recursion means.
std::vector<double> expected_flux(const ModelParams& p, const OccupancyWindow& w, long t);

struct MartingaleDecomp {
  long t = 0;
  std::vector<double> M_kernel;  // Z(t+1, x - mu(t)) - p * Z
  std::vector<double> M_flux;    // lambda(t) (q - 1) Z Kbar
  std::vector<double> Theta1, Theta2;
  double tau = 0.0;              // only when the parameters are scaled
  double max_rel_gap = 0.0;      // max |M_kernel - M_flux| / Z
};

// Throws KernelMismatch if the two forms of M differ by more than 1e-8 Z.
MartingaleDecomp she_decompose(const TiltFrame& f, const OccupancyWindow& before, const StepRecord& step, long t);

struct QvReport {
  long X1 = 0, X2 = 0;
  double mean_M1 = 0.0, mean_M2 = 0.0;  // E[M | F(t)] by enumeration
  double lhs = 0.0, rhs = 0.0, gap = 0.0;
  double theta_sum_gap = 0.0;           // |Theta1 + Theta2 - lambda (q - 1) Z|
};

// Exhaustive one-step enumeration of E[M(X1) M(X2) | F(t)] against the Theta product.
QvReport quadratic_variation_check(const TiltFrame& f, const OccupancyWindow& w, long t, long X1, long X2);

double tau(const ModelParams& p, double rho, long s);
double tau_limit(int I, double b, double rho, int m);

struct TauTrendRow {
  double epsilon = 0.0;
  double mean = 0.0;    // time and site average of eps^-1 Theta1 Theta2 / Z^2 - tau(s)
  double stderr_ = 0.0;
  long samples = 0;
};

std::vector<TauTrendRow> tau_trend(int I, int J, double b, double rho, const std::vector<double>& eps, long steps,
                                   int width, std::uint64_t seed);

struct NearStationaryReport {
  double epsilon = 0.0;
  int n = 0;
  double a = 0.0;
  double u_fit = 0.0;   // slope of log ||Z(0, x)||_n against eps |x|
  double C_norm = 0.0;  // smallest C with ||Z(0, x)||_n <= C e^{u eps |x|}
  double C_incr = 0.0;  // smallest C for the increment envelope with the same u
  bool pass = false;    // against the declared C, u
};

NearStationaryReport near_stationary_check(const ModelParams& p, double rho, InitialKind kind, int n, double a,
                                           long replicas, std::uint64_t seed, double C_declared,
                                           double u_declared);

}  // namespace shs6v
