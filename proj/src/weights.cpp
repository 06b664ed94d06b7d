#include "shs6v/weights.hpp"

#include <sstream>

namespace shs6v {

namespace {

template <class R>
R l_eval(double qd, int I, double alphad, int J, int i1, int j1, int i2, int j2) {
  R q(qd), al(alphad);
  R nu = int_pow(q, -I);
  // exponent in quarters of q
  int e4 = (2 * j1 - j1 * j1) - (2 * j2 - j2 * j2) + (i2 * i2 + i1 * i1) + 2 * (i2 * (j2 - 1) + i1 * j1);
  R q14 = sqrt(sqrt(q));
  R pre = int_pow(q14, e4) * int_pow(nu, j1 - i2) * int_pow(al, j2 - j1 + i2);
  pre = pre * q_pochhammer(-al / nu, q, j2 - i1);
  R den = q_pochhammer(q, q, i2) * q_pochhammer(-al, q, i2 + j2) * q_pochhammer(int_pow(q, J + 1 - j1), q, j1 - j2);
  if (detail::mag(den) == 0.0) throw DivisionByZero("l_general: vanishing denominator");
  std::array<R, 3> a{int_pow(q, -i1), -al * int_pow(q, J), -q * nu / al};
  std::array<R, 3> b{nu, int_pow(q, 1 + j2 - i1), int_pow(q, J + 1 - i2 - j2)};
  return pre / den * reg_4phi3<R>(i2, a, b, q, q);
}

}  // namespace

double l_general(const ModelParams& p, double alpha, int J, int i1, int j1, int i2, int j2, Precision prec) {
  if (i1 < 0 || i1 > p.I || i2 < 0 || i2 > p.I || j1 < 0 || j1 > J || j2 < 0 || j2 > J)
    throw ParameterError("l_general: index out of range");
  if (i1 + j1 != i2 + j2) return 0.0;
  try {
    if (prec == Precision::DoubleDouble)
      return double(l_eval<dd>(p.q, p.I, alpha, J, i1, j1, i2, j2));
    return l_eval<double>(p.q, p.I, alpha, J, i1, j1, i2, j2);
  } catch (const DivisionByZero&) {
    // removable singularity at alpha = -q^-k: symmetric limit in double-double
    const double d = 1e-7;
    dd lo = l_eval<dd>(p.q, p.I, alpha * (1.0 - d), J, i1, j1, i2, j2);
    dd hi = l_eval<dd>(p.q, p.I, alpha * (1.0 + d), J, i1, j1, i2, j2);
    return double((lo + hi) * dd(0.5));
  }
}

double l_j1(const ModelParams& p, double a, int m, int j1, int i2, int j2) {
  if (m < 0 || m > p.I || j1 < 0 || j1 > 1 || j2 < 0 || j2 > 1 || i2 < 0 || i2 > p.I)
    throw ParameterError("l_j1: index out of range");
  if (m + j1 != i2 + j2) return 0.0;
  double qm = int_pow(p.q, m);
  if (j1 == 0) return j2 == 0 ? (1.0 + a * qm) / (1.0 + a) : a * (1.0 - qm) / (1.0 + a);
  return j2 == 0 ? (1.0 - p.nu * qm) / (1.0 + a) : (a + p.nu * qm) / (1.0 + a);
}

VertexWeightTable build_table(const ModelParams& p, double alpha, int J, bool validate, Precision prec) {
  if (validate) {
    ModelParams chk = p;
    chk.J = J;
    chk.alpha = alpha;
    chk.require_condition1();
  }
  VertexWeightTable t;
  t.params = p;
  t.alpha_used = alpha;
  t.J_used = J;
  t.entries.assign(size_t(p.I + 1) * (J + 1) * (p.I + 1) * (J + 1), 0.0);
  for (int i1 = 0; i1 <= p.I; ++i1)
    for (int j1 = 0; j1 <= J; ++j1) {
      double sum = 0.0;
      double most_negative = 0.0;
      for (int i2 = 0; i2 <= p.I; ++i2) {
        int j2 = i1 + j1 - i2;
        if (j2 < 0 || j2 > J) continue;
        double w = l_general(p, alpha, J, i1, j1, i2, j2, prec);
        t.at(i1, j1, i2, j2) = w;
        sum += w;
        most_negative = std::fmin(most_negative, w);
      }
      double dev = std::fabs(sum - 1.0);
      t.max_row_dev = std::fmax(t.max_row_dev, dev);
      if (!validate) continue;
      if (dev > 1e-8 || most_negative < -1e-8) {
        std::ostringstream os;
        os << "row (i1=" << i1 << ", j1=" << j1 << ") sums to " << sum << ", min entry " << most_negative;
        throw StochasticityError(os.str());
      }
      if (dev > 1e-10 || most_negative < -1e-12) ++t.warned_rows;
      bool touched = false;
      double s2 = 0.0;
      for (int i2 = 0; i2 <= p.I; ++i2) {
        int j2 = i1 + j1 - i2;
        if (j2 < 0 || j2 > J) continue;
        double& w = t.at(i1, j1, i2, j2);
        if (w < 0.0) {
          w = 0.0;
          touched = true;
        }
        s2 += w;
      }
      if (touched || s2 != 1.0) {
        for (int i2 = 0; i2 <= p.I; ++i2) {
          int j2 = i1 + j1 - i2;
          if (j2 >= 0 && j2 <= J) t.at(i1, j1, i2, j2) /= s2;
        }
        if (touched || std::fabs(s2 - 1.0) > 1e-15) ++t.renormalized_rows;
      }
    }
  return t;
}

}  // namespace shs6v
