#include "shs6v/enumerate.hpp"

#include <cmath>

#include "shs6v/stationary.hpp"

namespace shs6v {

StateKey key_of(const OccupancyWindow& w) {
  StateKey k;
  k.reserve(w.values.size() + 2);
  k.push_back(w.base);
  k.push_back(w.exited);
  for (int v : w.values) k.push_back(v);
  return k;
}

StateDist StateDist::point(const OccupancyWindow& w) {
  StateDist d;
  d.x_left = w.x_left;
  d.mode = w.mode;
  d.chi = w.chi;
  d.probs[key_of(w)] = 1.0;
  return d;
}

OccupancyWindow StateDist::window(const StateKey& k) const {
  OccupancyWindow w;
  w.x_left = x_left;
  w.mode = mode;
  w.chi = chi;
  w.base = k[0];
  w.exited = k[1];
  w.values.assign(k.begin() + 2, k.end());
  return w;
}

double StateDist::total() const {
  double s = 0.0;
  for (const auto& [k, v] : probs) s += v;
  return s;
}

namespace {

struct Branch {
  std::vector<long> key;
  int h;
  double prob;
};

template <class Expand>
StateDist expand_all(const StateDist& d, double p_in, EdgePolicy edge, Expand&& site_outcomes) {
  StateDist out;
  out.x_left = d.x_left;
  out.mode = d.mode;
  out.chi = d.chi;
  out.missing_mass = d.missing_mass;
  for (const auto& [key, prob] : d.probs) {
    std::vector<Branch> br;
    if (d.mode == Boundary::StationarySource) {
      if (1.0 - p_in > 0.0) br.push_back({key, 0, prob * (1.0 - p_in)});
      if (p_in > 0.0) br.push_back({key, 1, prob * p_in});
      for (auto& b : br) b.key[0] -= b.h;
    } else {
      br.push_back({key, 0, prob});
    }
    const size_t W = key.size() - 2;
    std::vector<Branch> nb;
    for (size_t i = 0; i < W; ++i) {
      nb.clear();
      for (const auto& b : br) {
        int g = int(b.key[i + 2]);
        site_outcomes(g, b.h, [&](int g2, int h2, double w) {
          if (w <= 0.0) return;
          Branch c{b.key, h2, b.prob * w};
          c.key[i + 2] = g2;
          nb.push_back(std::move(c));
        });
      }
      br.swap(nb);
      if (br.size() > kMaxEnumeratedStates) throw StateSpaceTooLarge("enumeration exceeded state cap");
    }
    for (auto& b : br) {
      if (b.h > 0) {
        if (edge == EdgePolicy::Drop) {
          out.missing_mass += b.prob;
          continue;
        }
        b.key[1] += b.h;
      }
      out.probs[b.key] += b.prob;
    }
    if (out.probs.size() > kMaxEnumeratedStates) throw StateSpaceTooLarge("enumeration exceeded state cap");
  }
  return out;
}

}  // namespace

StateDist enumerate_step(const ModelParams& p, const StateDist& d, long t, EdgePolicy edge) {
  const double a = p.alpha_t(t);
  double p_in = d.mode == Boundary::StationarySource ? flux_mean(p, d.chi, t) : 0.0;
  return expand_all(d, p_in, edge, [&](int g, int h, auto&& emit) {
    if (h == 0) {
      emit(g, 0, l_j1(p, a, g, 0, g, 0));
      if (g > 0) emit(g - 1, 1, l_j1(p, a, g, 0, g - 1, 1));
    } else {
      if (g < p.I) emit(g + 1, 0, l_j1(p, a, g, 1, g + 1, 0));
      emit(g, 1, l_j1(p, a, g, 1, g, 1));
    }
  });
}

StateDist enumerate_step_fused(const VertexWeightTable& tab, const StateDist& d, EdgePolicy edge) {
  if (d.mode == Boundary::StationarySource)
    throw ParameterError("fused enumeration supports LeftFinite and Truncated windows only");
  const int I = tab.params.I, J = tab.J_used;
  return expand_all(d, 0.0, edge, [&](int g, int h, auto&& emit) {
    for (int i2 = 0; i2 <= I; ++i2) {
      int j2 = g + h - i2;
      if (j2 < 0 || j2 > J) continue;
      emit(i2, j2, tab.at(g, h, i2, j2));
    }
  });
}

StateDist enumerate_steps(const ModelParams& p, const StateDist& d, long t0, int steps, EdgePolicy edge) {
  StateDist cur = d;
  for (int k = 0; k < steps; ++k) cur = enumerate_step(p, cur, t0 + k, edge);
  return cur;
}

std::vector<int> flux_between(const OccupancyWindow& before, const OccupancyWindow& after) {
  std::vector<int> k(before.values.size());
  long n0 = before.base, n1 = after.base;
  for (size_t i = 0; i < k.size(); ++i) {
    n0 += before.values[i];
    n1 += after.values[i];
    k[i] = int(n0 - n1);
  }
  return k;
}

double total_variation(const StateDist& a, const StateDist& b) {
  double s = 0.0;
  auto ia = a.probs.begin(), ib = b.probs.begin();
  while (ia != a.probs.end() || ib != b.probs.end()) {
    if (ib == b.probs.end() || (ia != a.probs.end() && ia->first < ib->first)) {
      s += std::fabs(ia->second);
      ++ia;
    } else if (ia == a.probs.end() || ib->first < ia->first) {
      s += std::fabs(ib->second);
      ++ib;
    } else {
      s += std::fabs(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  return 0.5 * s;
}

}  // namespace shs6v
