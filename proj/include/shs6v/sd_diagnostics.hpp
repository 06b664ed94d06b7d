#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "shs6v/kernels.hpp"

namespace shs6v {

// Limit symbols of the weakly asymmetric scaling (moduli only; D* carries the branch z^{J/I}).
double sd_D_star_abs(int I, int J, double b, cplx z);
double sd_H_star_abs(int I, int J, double b, cplx z);
cplx sd_p_star(int I, cplx z);
cplx sd_s_star(int I, cplx z);
// Inverse of the tilted s at finite eps.
cplx sd_p_eps(const ModelParams& p, double rho, cplx w);
// Closed form of |D*(e^{i theta})|^2.
double sd_D_star_unit_formula(int I, int J, double b, double theta);

// Point of the contour at parameter theta: Circle and ShiftedCircle use the given radius (ShiftedCircle about
// 1/(I+1)); ClippedShifted walks the boundary of the enlarged shifted disk intersected with the unit disk,
// radially from 1/(I+1).
cplx contour_point(const ContourSpec& c, int I, double theta);

struct SdReport {
  double max_D = 0.0;
  double max_H = 0.0;
  double max_zp_dev = 0.0;  // max ||z p*(z)| - 1| (meaningful on M)
  int points = 0;
};

SdReport sd_diagnostics(int I, int J, double b, const ContourSpec& c, int grid = 10000, double theta_min = 1e-2);

// Positive r with |z p(z)| = target at z = 1/(I+1) + r e^{i theta}, by bisection.
double implicit_radius(const std::function<cplx(cplx)>& pmap, int I, double theta, double target = 1.0);

// Enlargement used for M(u) throughout.
constexpr double kSdU = 0.05;

}  // namespace shs6v
