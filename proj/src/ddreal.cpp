#include "shs6v/ddreal.hpp"

namespace shs6v {

namespace {

inline dd two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double e = (a - (s - bb)) + (b - bb);
  return {s, e};
}

inline dd quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

}  // namespace

dd operator+(dd a, dd b) {
  dd s = two_sum(a.hi, b.hi);
  dd t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

dd operator-(dd a) { return {-a.hi, -a.lo}; }

dd operator-(dd a, dd b) { return a + (-b); }

dd operator*(dd a, dd b) {
  dd p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

dd operator/(dd a, dd b) {
  double q1 = a.hi / b.hi;
  dd r = a - b * dd(q1);
  double q2 = r.hi / b.hi;
  r = r - b * dd(q2);
  double q3 = r.hi / b.hi;
  dd q = quick_two_sum(q1, q2);
  return q + dd(q3);
}

dd sqrt(dd a) {
  if (a.hi <= 0.0) return dd(0.0);
  double x = std::sqrt(a.hi);
  dd y(x);
  // one Newton step doubles the precision
  return y + (a - y * y) / (dd(2.0) * y);
}

dd ipow(dd a, int n) {
  if (n < 0) return dd(1.0) / ipow(a, -n);
  dd r(1.0);
  dd b = a;
  while (n) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

}  // namespace shs6v
