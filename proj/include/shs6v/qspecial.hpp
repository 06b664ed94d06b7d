#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "shs6v/ddreal.hpp"
#include "shs6v/errors.hpp"

namespace shs6v {

struct ScaledParams {
  double b = 0.0;
  double rho = 0.0;
  double epsilon = 0.0;
};

// Parameter pack of the model. nu is always derived from q and I.
struct ModelParams {
  double q = 2.0;
  int I = 1;
  int J = 1;
  double alpha = -0.1;
  double nu = 0.5;
  std::optional<ScaledParams> scaled;

  static ModelParams make(double q, int I, int J, double alpha);
  // q = exp(sqrt(eps)), alpha from b = (1 + alpha q) / (1 + alpha)
  static ModelParams make_scaled(int I, int J, double b, double rho, double eps);

  bool condition1() const;
  // Throws ParameterError naming the violated inequality.
  void require_condition1() const;
  // Throws ParameterError unless the scaled block is present and admissible.
  void require_scaled() const;
  std::string describe() const;

  int mod(long t) const;
  double alpha_t(long t) const;
  double rho() const;
  // sup over t of (nu + alpha(t)) / (1 + alpha(t))
  double theta_sup() const;
  double theta_t(long t) const;
};

// Integer power by repeated squaring (exact sign handling, no log/exp).
template <class R>
R int_pow(R x, int n) {
  if (n < 0) return R(1.0) / int_pow(x, -n);
  R r(1.0);
  while (n) {
    if (n & 1) r = r * x;
    x = x * x;
    n >>= 1;
  }
  return r;
}

namespace detail {
inline double mag(double x) { return std::fabs(x); }
inline double mag(dd x) { return std::fabs(x.hi + x.lo); }

template <class R>
bool vanishes(R factor, R scale) {
  return mag(factor) <= 64.0 * std::numeric_limits<double>::epsilon() * std::fmax(1.0, mag(scale));
}
}  // namespace detail

// (a; q)_n for any integer n.
template <class R>
R q_pochhammer(R a, R q, int n) {
  R r(1.0);
  if (n > 0) {
    R aq = a;
    for (int i = 0; i < n; ++i) {
      r = r * (R(1.0) - aq);
      aq = aq * q;
    }
    return r;
  }
  if (n == 0) return r;
  // n < 0: prod_{k=0}^{-n-1} 1 / (1 - a q^{n+k})
  R aq = a * int_pow(q, n);
  for (int k = 0; k < -n; ++k) {
    R f = R(1.0) - aq;
    if (detail::vanishes(f, aq)) throw DivisionByZero("q_pochhammer: vanishing reciprocal factor");
    r = r / f;
    aq = aq * q;
  }
  return r;
}

double q_pochhammer(double a, double q, int n);

// sum_{k=0}^{n} z^k (q^{-n};q)_k / (q;q)_k prod_i (a_i;q)_k (b_i q^k; q)_{n-k}
template <class R>
R reg_4phi3(int n, const std::array<R, 3>& a, const std::array<R, 3>& b, R q, R z) {
  if (n < 0) throw ParameterError("reg_4phi3: n must be nonnegative");
  R qn = int_pow(q, -n);
  R sum(0.0);
  R head(1.0);  // z^k (q^{-n};q)_k / (q;q)_k prod (a_i;q)_k, built multiplicatively
  R qk(1.0);    // q^k
  for (int k = 0; k <= n; ++k) {
    if (k > 0) {
      R qkm1 = qk;
      qk = qk * q;
      R num = (R(1.0) - qn * qkm1);
      for (int i = 0; i < 3; ++i) num = num * (R(1.0) - a[i] * qkm1);
      R den = R(1.0) - qk;
      head = head * z * num / den;
    }
    R tail(1.0);
    for (int i = 0; i < 3; ++i) tail = tail * q_pochhammer(b[i] * qk, q, n - k);
    sum = sum + head * tail;
  }
  return sum;
}

double reg_4phi3(int n, const std::array<double, 3>& a, const std::array<double, 3>& b, double q, double z);

// Symmetric q-integer [n]_q = (q^n - q^-n) / (q - q^-1); q = 1 returns n.
double q_bracket(int n, double q);
double q_factorial(int n, double q);
double q_binomial(int n, int k, double q);

// Terminating q-binomial identity with nu = q^-I:
// sum_{n=0}^{I} (nu;q)_n/(q;q)_n z^n = prod_{k=0}^{I-1} (1 - nu z q^k).
double q_binomial_sum(int I, double q, double z);
double q_binomial_product(int I, double q, double z);

}  // namespace shs6v
