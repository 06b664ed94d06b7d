#pragma once

#include <cstdint>
#include <vector>

#include "shs6v/qspecial.hpp"
#include "shs6v/rng.hpp"
#include "shs6v/weights.hpp"

namespace shs6v {

enum class Boundary {
  LeftFinite,        // nothing enters from the left; exit on the right is an error
  Truncated,         // nothing enters from the left; particles leave freely on the right
  StationarySource,  // flux Bernoulli(alpha(t) chi / (1 + alpha(t) chi)) enters; free right edge
};

struct OccupancyWindow {
  long x_left = 0;
  std::vector<int> values;
  Boundary mode = Boundary::LeftFinite;
  double chi = 0.0;   // only used by StationarySource
  long base = 0;      // N(t, x_left - 1)
  long exited = 0;    // particles that left through the right edge so far

  long x_right() const { return x_left + long(values.size()) - 1; }
  int at(long x) const {
    if (x < x_left || x > x_right()) return 0;
    return values[size_t(x - x_left)];
  }
  // N(t, x) = base + sum_{x_left <= y <= x} eta_y
  long height(long x) const;
  long particles() const;
};

struct StepRecord {
  OccupancyWindow next;
  std::vector<int> flux;  // K(t, y) = N(t, y) - N(t+1, y) for window sites
  int k_in = 0;
  int k_out = 0;
};

// Deterministic step given the uniform variates; shared by the sequential and recursion forms.
StepRecord step_unfused(const ModelParams& p, const OccupancyWindow& s, long t, const Environment& env);
// Flux recursion K(y) = K(y-1)(B' - B) + B driven by the same variates.
StepRecord step_recursion(const ModelParams& p, const OccupancyWindow& s, long t, const Environment& env);
// Fused step with the L^{(J)} table; t_fused indexes the fused time.
StepRecord step_fused(const VertexWeightTable& table, const OccupancyWindow& s, long t_fused, const Environment& env);

// Sites beyond which the left-cutoff influence is below tol; sup_z (B' - B) = theta q^I per bond.
long certified_offset(const ModelParams& p, double tol);
// Throws TruncationError if the window leaves no certified sites for the requested tolerance.
void require_certified(const ModelParams& p, const OccupancyWindow& s, double tol);

enum class InitialKind { ProductPiRho, Step, Flat, Custom };
// Flat(density): deterministic occupancy pattern with running average density, product: i.i.d. pi_rho,
// Step: pi_rho on sites >= 0 and empty on the left.
OccupancyWindow make_initial(const ModelParams& p, InitialKind kind, long x_left, int width, double density,
                             Boundary mode, std::uint64_t seed, const std::vector<int>& custom = {});

}  // namespace shs6v
