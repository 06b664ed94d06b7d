#include "shs6v/stationary.hpp"

#include <sstream>

namespace shs6v {

namespace {

double chi_sum(const ModelParams& p, double chi) {
  double s = 0.0, qi = 1.0;
  for (int i = 1; i <= p.I; ++i) {
    qi *= p.q;
    s += chi / (chi - qi);
  }
  return s;
}

double chi_sum_derivative(const ModelParams& p, double chi) {
  double s = 0.0, qi = 1.0;
  for (int i = 1; i <= p.I; ++i) {
    qi *= p.q;
    s += -qi / ((chi - qi) * (chi - qi));
  }
  return s;
}

}  // namespace

double solve_chi(const ModelParams& p, double rho) {
  if (!(rho > 0.0 && rho < p.I)) {
    std::ostringstream os;
    os << "solve_chi: need 0 < rho < I = " << p.I << ", got " << rho;
    throw BracketError(os.str());
  }
  if (!(p.q > 1.0)) throw ParameterError("solve_chi: q > 1 required");
  // f decreases from I at -inf to 0 at 0
  double lo = -1.0, hi = 0.0;
  while (chi_sum(p, lo) < rho) {
    lo *= 2.0;
    if (lo < -1e300) throw BracketError("solve_chi: bracket expansion failed");
  }
  for (int it = 0; it < 2000 && hi - lo > 1e-14 * std::fmax(1.0, std::fabs(lo)); ++it) {
    double m = 0.5 * (lo + hi);
    if (m == lo || m == hi) break;
    if (chi_sum(p, m) > rho) lo = m;
    else hi = m;
  }
  double chi = 0.5 * (lo + hi);
  for (int k = 0; k < 2; ++k) {
    double d = chi_sum_derivative(p, chi);
    double next = chi - (chi_sum(p, chi) - rho) / d;
    if (next < 0.0 && std::fabs(chi_sum(p, next) - rho) <= std::fabs(chi_sum(p, chi) - rho)) chi = next;
  }
  return chi;
}

StationaryDist pi_rho(const ModelParams& p, double chi) {
  StationaryDist d;
  d.chi = chi;
  d.pmf.resize(p.I + 1);
  double w = 1.0, qi = 1.0, nuqi = p.nu, z = 0.0;
  for (int i = 0; i <= p.I; ++i) {
    if (i > 0) {
      // ratio (1 - nu q^{i-1}) / (1 - q^i) * chi
      w *= (1.0 - nuqi) / (1.0 - qi * p.q) * chi;
      qi *= p.q;
      nuqi *= p.q;
    }
    d.pmf[i] = w;
    z += w;
  }
  double m = 0.0, m2 = 0.0;
  for (int i = 0; i <= p.I; ++i) {
    d.pmf[i] /= z;
    m += i * d.pmf[i];
    m2 += double(i) * i * d.pmf[i];
  }
  d.mean = m;
  d.variance = m2 - m * m;
  d.rho = m;
  return d;
}

StationaryDist stationary_dist(const ModelParams& p, double rho) {
  StationaryDist d = pi_rho(p, solve_chi(p, rho));
  d.rho = rho;
  return d;
}

double stationary_variance_formula(const ModelParams& p, double chi) {
  double rho = chi_sum(p, chi), s = 0.0, qi = 1.0;
  for (int i = 1; i <= p.I; ++i) {
    qi *= p.q;
    s += chi * chi / ((qi - chi) * (qi - chi));
  }
  return rho - s;
}

double flux_mean(const ModelParams& p, double chi, long t) {
  double a = p.alpha_t(t);
  return a * chi / (1.0 + a * chi);
}

LambdaMu fused_lambda_mu(const ModelParams& p, double rho) {
  double qr = std::pow(p.q, rho), qJ = int_pow(p.q, p.J), a = p.alpha, nu = p.nu;
  double d1 = 1.0 + a * qJ - qr * (a * qJ + nu);
  double d0 = 1.0 + a - qr * (a + nu);
  if (d1 == 0.0 || d0 == 0.0) throw DegenerateTilt("fused_lambda_mu: vanishing denominator");
  return {d0 / d1, a * qr * (1.0 - qJ) * (1.0 - nu) / (d1 * d0)};
}

double steady_current_j(const ModelParams& p, double rho) {
  p.require_scaled();
  double chi = solve_chi(p, rho);
  double s = 0.0;
  for (int k = 0; k < p.J; ++k) s += flux_mean(p, chi, k);
  return (s - rho * fused_lambda_mu(p, rho).mu) / std::sqrt(p.scaled->epsilon);
}

double integrated_covariance_A(const ModelParams& p, double rho) {
  p.require_scaled();
  return stationary_dist(p, rho).variance;
}

double default_j_step(const ModelParams& p) {
  p.require_scaled();
  return std::fmax(1e-3, std::pow(p.scaled->epsilon, 0.25));
}

double neg_j_second_derivative(const ModelParams& p, double rho, double h) {
  if (h <= 0.0) h = default_j_step(p);
  if (!(rho - h > 0.0 && rho + h < p.I)) throw ParameterError("second difference leaves (0, I)");
  return -(steady_current_j(p, rho + h) - 2.0 * steady_current_j(p, rho) + steady_current_j(p, rho - h)) / (h * h);
}

KpzCoefficients kpz_coefficients(int I, int J, double b, double rho) {
  double V = ((I + J) * b - (I + J - 2)) / (double(I) * I * (1.0 - b));
  return {V, rho * (I - rho) / I * V};
}

KpzCoefficients kpz_coefficients(const ModelParams& p) {
  p.require_scaled();
  return kpz_coefficients(p.I, p.J, p.scaled->b, p.scaled->rho);
}

}  // namespace shs6v
