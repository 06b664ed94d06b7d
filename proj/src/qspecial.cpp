#include "shs6v/qspecial.hpp"

#include <sstream>

namespace shs6v {

ModelParams ModelParams::make(double q, int I, int J, double alpha) {
  if (!(q > 0.0)) throw ParameterError("q must be positive");
  if (I < 1 || J < 1) throw ParameterError("I and J must be >= 1");
  ModelParams p;
  p.q = q;
  p.I = I;
  p.J = J;
  p.alpha = alpha;
  p.nu = int_pow(q, -I);
  return p;
}

ModelParams ModelParams::make_scaled(int I, int J, double b, double rho, double eps) {
  if (!(eps > 0.0)) throw ParameterError("scaled mode needs eps > 0");
  double lo = double(I + J - 2) / double(I + J - 1);
  if (!(b > lo && b < 1.0)) {
    std::ostringstream os;
    os << "scaled mode needs " << lo << " < b < 1, got b = " << b;
    throw ParameterError(os.str());
  }
  if (!(rho > 0.0 && rho < I)) {
    std::ostringstream os;
    os << "scaled mode needs 0 < rho < I = " << I << ", got rho = " << rho;
    throw ParameterError(os.str());
  }
  double q = std::exp(std::sqrt(eps));
  ModelParams p = make(q, I, J, (1.0 - b) / (b - q));
  p.scaled = ScaledParams{b, rho, eps};
  return p;
}

bool ModelParams::condition1() const {
  double lo = -int_pow(q, -(I + J - 1));
  return q > 1.0 && alpha > lo && alpha < 0.0;
}

void ModelParams::require_condition1() const {
  if (condition1()) return;
  std::ostringstream os;
  os.precision(17);
  if (!(q > 1.0)) {
    os << "condition violated: q > 1 fails (q = " << q << ")";
  } else {
    os << "condition violated: -q^-(I+J-1) < alpha < 0 fails (alpha = " << alpha
       << ", -q^-(I+J-1) = " << -int_pow(q, -(I + J - 1)) << ")";
  }
  throw ParameterError(os.str());
}

void ModelParams::require_scaled() const {
  if (!scaled) throw ParameterError("operation needs scaled-mode parameters (b, rho, eps)");
  require_condition1();
}

std::string ModelParams::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "q=" << q << " I=" << I << " J=" << J << " alpha=" << alpha << " nu=" << nu;
  if (scaled) os << " b=" << scaled->b << " rho=" << scaled->rho << " eps=" << scaled->epsilon;
  return os.str();
}

int ModelParams::mod(long t) const {
  long m = t % J;
  if (m < 0) m += J;
  return int(m);
}

double ModelParams::alpha_t(long t) const { return alpha * int_pow(q, mod(t)); }

double ModelParams::rho() const {
  if (!scaled) throw ParameterError("rho requested but no scaled block present");
  return scaled->rho;
}

double ModelParams::theta_t(long t) const {
  double a = alpha_t(t);
  return (nu + a) / (1.0 + a);
}

double ModelParams::theta_sup() const {
  double th = 0.0;
  for (int k = 0; k < J; ++k) th = std::fmax(th, theta_t(k));
  return th;
}

double q_pochhammer(double a, double q, int n) { return q_pochhammer<double>(a, q, n); }

double reg_4phi3(int n, const std::array<double, 3>& a, const std::array<double, 3>& b, double q, double z) {
  return reg_4phi3<double>(n, a, b, q, z);
}

double q_bracket(int n, double q) {
  if (q == 1.0) return double(n);
  double qn = int_pow(q, n);
  return (qn - 1.0 / qn) / (q - 1.0 / q);
}

double q_factorial(int n, double q) {
  double r = 1.0;
  for (int i = 1; i <= n; ++i) r *= q_bracket(i, q);
  return r;
}

double q_binomial(int n, int k, double q) {
  if (k < 0 || k > n) return 0.0;
  return q_factorial(n, q) / (q_factorial(k, q) * q_factorial(n - k, q));
}

double q_binomial_sum(int I, double q, double z) {
  double nu = int_pow(q, -I);
  double s = 0.0;
  for (int n = 0; n <= I; ++n) s += q_pochhammer(nu, q, n) / q_pochhammer(q, q, n) * int_pow(z, n);
  return s;
}

double q_binomial_product(int I, double q, double z) {
  double nu = int_pow(q, -I);
  double r = 1.0;
  double qk = 1.0;
  for (int k = 0; k < I; ++k) {
    r *= 1.0 - nu * z * qk;
    qk *= q;
  }
  return r;
}

}  // namespace shs6v
