#pragma once

#include <map>
#include <vector>

#include "shs6v/dynamics.hpp"

namespace shs6v {

enum class EdgePolicy {
  Drop,  // outcomes with a line leaving the right edge are discarded, mass recorded as missing
  Keep,  // such outcomes are kept; the exit is counted in OccupancyWindow::exited
};

// Key layout: [base, exited, values...]; x_left, mode and chi are shared by all states.
using StateKey = std::vector<long>;

struct StateDist {
  long x_left = 0;
  Boundary mode = Boundary::LeftFinite;
  double chi = 0.0;
  std::map<StateKey, double> probs;
  double missing_mass = 0.0;

  static StateDist point(const OccupancyWindow& w);
  OccupancyWindow window(const StateKey& k) const;
  double total() const;
};

StateKey key_of(const OccupancyWindow& w);

constexpr size_t kMaxEnumeratedStates = 2000000;

// Exact law after one unfused step at time t.
StateDist enumerate_step(const ModelParams& p, const StateDist& d, long t, EdgePolicy edge);
// Exact law after one fused step.
StateDist enumerate_step_fused(const VertexWeightTable& table, const StateDist& d, EdgePolicy edge);
StateDist enumerate_steps(const ModelParams& p, const StateDist& d, long t0, int steps, EdgePolicy edge);

// K(t, y) for every window site, recovered from two consecutive states.
std::vector<int> flux_between(const OccupancyWindow& before, const OccupancyWindow& after);

double total_variation(const StateDist& a, const StateDist& b);

}  // namespace shs6v
