#include "shs6v/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "shs6v/stationary.hpp"

namespace shs6v {

long OccupancyWindow::height(long x) const {
  long n = base;
  for (long y = x_left; y <= x && y <= x_right(); ++y) n += values[size_t(y - x_left)];
  return n;
}

long OccupancyWindow::particles() const {
  long n = 0;
  for (int v : values) n += v;
  return n;
}

namespace {

int incoming(const ModelParams& p, const OccupancyWindow& s, long t, const Environment& env) {
  if (s.mode != Boundary::StationarySource) return 0;
  return env.source(t) < flux_mean(p, s.chi, t) ? 1 : 0;
}

void finish(StepRecord& r, const OccupancyWindow& s, int h) {
  r.k_out = h;
  r.next.base = s.base - r.k_in;
  r.next.exited = s.exited + h;
  if (h > 0 && s.mode == Boundary::LeftFinite) {
    std::ostringstream os;
    os << "particle left the window through x = " << s.x_right();
    throw WindowOverflow(os.str());
  }
}

}  // namespace

StepRecord step_unfused(const ModelParams& p, const OccupancyWindow& s, long t, const Environment& env) {
  StepRecord r;
  r.next = s;
  r.flux.resize(s.values.size());
  r.k_in = incoming(p, s, t, env);
  const double a = p.alpha_t(t);
  int h = r.k_in;
  for (size_t i = 0; i < s.values.size(); ++i) {
    int g = s.values[i];
    double u = env.site(t, s.x_left + long(i));
    if (h == 0) {
      if (g > 0 && u < l_j1(p, a, g, 0, g - 1, 1)) {
        r.next.values[i] = g - 1;
        h = 1;
      }
    } else {
      if (!(u < l_j1(p, a, g, 1, g, 1))) {
        r.next.values[i] = g + 1;
        h = 0;
      }
    }
    r.flux[i] = h;
  }
  finish(r, s, h);
  return r;
}

StepRecord step_recursion(const ModelParams& p, const OccupancyWindow& s, long t, const Environment& env) {
  StepRecord r;
  r.next = s;
  r.flux.resize(s.values.size());
  r.k_in = incoming(p, s, t, env);
  const double a = p.alpha_t(t);
  int kprev = r.k_in;
  long n_old = s.base, n_new = s.base - r.k_in;
  for (size_t i = 0; i < s.values.size(); ++i) {
    int g = s.values[i];
    double u = env.site(t, s.x_left + long(i));
    double qg = int_pow(p.q, g);
    int B = u < a * (1.0 - qg) / (1.0 + a) ? 1 : 0;
    int Bp = u < (a + p.nu * qg) / (1.0 + a) ? 1 : 0;
    int k = kprev * (Bp - B) + B;
    n_old += g;
    long n_next = n_old - k;
    r.next.values[i] = int(n_next - n_new);
    n_new = n_next;
    r.flux[i] = k;
    kprev = k;
  }
  finish(r, s, kprev);
  return r;
}

StepRecord step_fused(const VertexWeightTable& tab, const OccupancyWindow& s, long t_fused, const Environment& env) {
  if (s.mode == Boundary::StationarySource)
    throw ParameterError("fused steps support LeftFinite and Truncated windows only");
  StepRecord r;
  r.next = s;
  r.flux.resize(s.values.size());
  const int I = tab.params.I, J = tab.J_used;
  int h = 0;
  for (size_t i = 0; i < s.values.size(); ++i) {
    int g = s.values[i];
    double u = env.site(t_fused, s.x_left + long(i));
    double c = 0.0;
    int i2_pick = -1;
    int last = -1;
    for (int i2 = 0; i2 <= I; ++i2) {
      int j2 = g + h - i2;
      if (j2 < 0 || j2 > J) continue;
      double w = tab.at(g, h, i2, j2);
      if (w <= 0.0) continue;
      last = i2;
      c += w;
      if (u < c) {
        i2_pick = i2;
        break;
      }
    }
    if (i2_pick < 0) i2_pick = last;  // rounding guard at the top of the cumulative sum
    int j2 = g + h - i2_pick;
    r.next.values[i] = i2_pick;
    h = j2;
    r.flux[i] = h;
  }
  finish(r, s, h);
  return r;
}

long certified_offset(const ModelParams& p, double tol) {
  double rate = 0.0;
  for (int k = 0; k < p.J; ++k) rate = std::fmax(rate, p.theta_t(k) * int_pow(p.q, p.I));
  if (!(rate < 1.0)) throw TruncationError("no geometric decay: sup theta q^I >= 1");
  return long(std::ceil(std::log(tol) / std::log(rate)));
}

void require_certified(const ModelParams& p, const OccupancyWindow& s, double tol) {
  long off = certified_offset(p, tol);
  if (off >= long(s.values.size())) {
    std::ostringstream os;
    os << "window of " << s.values.size() << " sites has no site certified to " << tol << " (needs offset " << off << ")";
    throw TruncationError(os.str());
  }
}

OccupancyWindow make_initial(const ModelParams& p, InitialKind kind, long x_left, int width, double density,
                             Boundary mode, std::uint64_t seed, const std::vector<int>& custom) {
  OccupancyWindow w;
  w.x_left = x_left;
  w.mode = mode;
  w.values.assign(size_t(width), 0);
  Environment env{seed};
  bool need_pi = kind == InitialKind::ProductPiRho || kind == InitialKind::Step || mode == Boundary::StationarySource;
  StationaryDist pi;
  if (need_pi) {
    pi = stationary_dist(p, density);
    w.chi = pi.chi;
  }
  auto sample = [&](long y) {
    double u = env.init(y), c = 0.0;
    for (int i = 0; i <= p.I; ++i) {
      c += pi.pmf[i];
      if (u < c) return i;
    }
    return p.I;
  };
  for (int i = 0; i < width; ++i) {
    long y = x_left + i;
    switch (kind) {
      case InitialKind::ProductPiRho: w.values[i] = sample(y); break;
      case InitialKind::Step: w.values[i] = y >= 0 ? sample(y) : 0; break;
      case InitialKind::Flat:
        w.values[i] = int(std::floor((i + 1) * density + 1e-12) - std::floor(i * density + 1e-12));
        break;
      case InitialKind::Custom:
        if (custom.size() != size_t(width)) throw ParameterError("custom initial data has wrong width");
        if (custom[i] < 0 || custom[i] > p.I) throw ParameterError("custom occupancy outside 0..I");
        w.values[i] = custom[i];
        break;
    }
  }
  // N(0, x) = N_x - N_0: base is minus the count on sites x_left..0
  long n0 = 0;
  for (long y = x_left; y <= 0 && y <= w.x_right(); ++y) n0 += w.values[size_t(y - x_left)];
  w.base = -n0;
  return w;
}

}  // namespace shs6v
