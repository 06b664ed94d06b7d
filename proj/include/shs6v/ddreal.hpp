#pragma once

// Software double-double: value = hi + lo with |lo| <= ulp(hi)/2.
// Only the arithmetic needed by the q-special functions is provided.

#include <cmath>

namespace shs6v {

struct dd {
  double hi = 0.0;
  double lo = 0.0;

  constexpr dd() = default;
  constexpr dd(double x) : hi(x), lo(0.0) {}
  constexpr dd(double h, double l) : hi(h), lo(l) {}

  explicit operator double() const { return hi + lo; }
};

dd operator+(dd a, dd b);
dd operator-(dd a, dd b);
dd operator*(dd a, dd b);
dd operator/(dd a, dd b);
dd operator-(dd a);
inline dd& operator+=(dd& a, dd b) { return a = a + b; }
inline dd& operator-=(dd& a, dd b) { return a = a - b; }
inline dd& operator*=(dd& a, dd b) { return a = a * b; }
inline dd& operator/=(dd& a, dd b) { return a = a / b; }
inline bool operator==(dd a, dd b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool operator<(dd a, dd b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }

dd sqrt(dd a);
dd ipow(dd a, int n);
inline double abs_approx(dd a) { return std::fabs(a.hi + a.lo); }

}  // namespace shs6v
