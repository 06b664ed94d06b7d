#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shs6v/dynamics.hpp"
#include "shs6v/tilt.hpp"

namespace shs6v {

// Ordered particle positions y1 <= ... <= yk with at most I particles per site.
using LocationVector = std::vector<long>;

double functional_H(const ModelParams& p, const OccupancyWindow& w, const LocationVector& y);
double functional_G(const ModelParams& p, const OccupancyWindow& w, long y1, long y2);
// Same two-branch functional read off an arbitrary height profile: heights(y) = N(y), occ(y) = eta_y.
double functional_Dtilde(const ModelParams& p, long n1, int eta1, long n2, int eta2, bool same_site);
// Tilted D at integer labels Y1 <= Y2 (= y + mu_hat(t)), with Z(t, y) = lambda_hat(t) q^{-(N(Y) - rho Y)}.
double functional_D_tilted(const TiltFrame& f, const OccupancyWindow& w, long t, long Y1, long Y2);
double z_value(const TiltFrame& f, const OccupancyWindow& w, long t, long Y);

// Mirror-image sequential update of the reversed location process; the same Environment drives the
// mirrored site (t, -y) variates.
LocationVector reversed_step(const ModelParams& p, const LocationVector& y, long t, const Environment& env);

enum class DualityMode { H, G, TiltZ, TiltD };
enum class DualityMethod { Exact, MonteCarlo };

struct DualityQuery {
  DualityMode mode = DualityMode::H;
  DualityMethod method = DualityMethod::Exact;
  OccupancyWindow initial;     // LeftFinite window at time t0
  LocationVector x;            // duality points at the final time (integer labels for the tilted modes)
  long t0 = 0;
  int steps = 1;
  double rho = 1.0;            // tilted modes only
  long replicas = 1000000;     // Monte Carlo only
  std::uint64_t seed = 1;
  int tilt_depth = 40;         // tilted modes: sites summed below the window
};

struct DualityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  double tail_mass = 0.0;  // bound on the truncated part of the right side
  double sigma = 0.0;      // Monte Carlo standard error of lhs
  long replicas = 0;
};

DualityReport verify_duality(const ModelParams& p, const DualityQuery& q);

std::string to_string(DualityMode m);
DualityMode parse_duality_mode(const std::string& s);

}  // namespace shs6v
