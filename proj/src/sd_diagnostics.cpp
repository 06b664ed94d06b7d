#include "shs6v/sd_diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shs6v/errors.hpp"

namespace shs6v {

double sd_D_star_abs(int I, int J, double b, cplx z) {
  const double a1 = b * J - (J - 1), a0 = (I + J) * b - (I + J - 1), p0 = I * b - (I - 1);
  return std::pow(std::abs(z), double(J) / I) * std::abs((a1 * z - a0) / (z - p0));
}

cplx sd_p_star(int I, cplx z) { return (double(I + 1) * z - 1.0) / (z + double(I - 1)); }

cplx sd_s_star(int I, cplx z) { return (double(I - 1) * z + 1.0) / (double(I + 1) - z); }

double sd_H_star_abs(int I, int J, double b, cplx z) {
  return sd_D_star_abs(I, J, b, z) * sd_D_star_abs(I, J, b, sd_p_star(I, z));
}

cplx sd_p_eps(const ModelParams& p, double rho, cplx w) {
  const double q = p.q, nu = p.nu, s = std::pow(q, -rho);
  return (w * (q - nu) * s + nu * (1.0 - q)) / ((1.0 - q * nu) * s - (1.0 - q) * s * s * w);
}

double sd_D_star_unit_formula(int I, int J, double b, double theta) {
  const double p0 = I * b - (I - 1);
  const double c = std::cos(theta);
  return 1.0 - 2.0 * J * (1.0 - b) * (1.0 - c) * ((I + J) * b - (I + J - 2)) / (1.0 + p0 * p0 - 2.0 * p0 * c);
}

cplx contour_point(const ContourSpec& c, int I, double theta) {
  const cplx e = std::polar(1.0, theta);
  const double ctr = 1.0 / (I + 1);
  switch (c.kind) {
    case ContourKind::Circle: return c.radius * e;
    case ContourKind::ShiftedCircle: return ctr + c.radius * e;
    case ContourKind::ClippedShifted: {
      const double R = double(I) / (I + 1) + c.u;
      const double ct = std::cos(theta);
      const double ru = -ctr * ct + std::sqrt(ctr * ctr * ct * ct - ctr * ctr + 1.0);
      return ctr + std::min(R, ru) * e;
    }
    case ContourKind::ImplicitProduct:
      return ctr + implicit_radius([I](cplx z) { return sd_p_star(I, z); }, I, theta) * e;
  }
  return 0.0;
}

SdReport sd_diagnostics(int I, int J, double b, const ContourSpec& c, int grid, double theta_min) {
  SdReport r;
  for (int k = 0; k < grid; ++k) {
    double th = -std::numbers::pi + (k + 0.5) * 2.0 * std::numbers::pi / grid;
    if (std::fabs(th) < theta_min) continue;
    cplx z = contour_point(c, I, th);
    r.max_D = std::max(r.max_D, sd_D_star_abs(I, J, b, z));
    r.max_H = std::max(r.max_H, sd_H_star_abs(I, J, b, z));
    r.max_zp_dev = std::max(r.max_zp_dev, std::fabs(std::abs(z * sd_p_star(I, z)) - 1.0));
    ++r.points;
  }
  return r;
}

double implicit_radius(const std::function<cplx(cplx)>& pmap, int I, double theta, double target) {
  const double ctr = 1.0 / (I + 1);
  const cplx e = std::polar(1.0, theta);
  auto f = [&](double r) {
    cplx z = ctr + r * e;
    return std::abs(z * pmap(z)) - target;
  };
  double lo = 1e-9, hi = 0.5;
  if (f(lo) >= 0.0) throw BracketError("implicit_radius: no sign change near the center");
  while (f(hi) < 0.0) {
    lo = hi;
    hi *= 1.25;
    if (hi > 10.0) throw BracketError("implicit_radius: no root below radius 10");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace shs6v
