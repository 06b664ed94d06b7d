#include "shs6v/duality.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "shs6v/enumerate.hpp"
#include "shs6v/errors.hpp"
#include "shs6v/kernels.hpp"
#include "shs6v/weights.hpp"

namespace shs6v {

namespace {

double hb(const ModelParams& p, int n) { return q_bracket(n, std::sqrt(p.q)); }

double bracket_part(const ModelParams& p, int eta1, int eta2, bool same) {
  const int I = p.I;
  if (same) return hb(p, I - eta1) * hb(p, I - 1 - eta1) * std::pow(p.q, eta1);
  return hb(p, I - 1) / hb(p, I) * hb(p, I - eta1) * hb(p, I - eta2) * std::pow(p.q, 0.5 * (eta1 + eta2));
}

double bracket_sup(const ModelParams& p) {
  double m = 0.0;
  for (int a = 0; a <= p.I; ++a) {
    m = std::max(m, std::fabs(bracket_part(p, a, 0, true)));
    for (int b = 0; b <= p.I; ++b) m = std::max(m, std::fabs(bracket_part(p, a, b, false)));
  }
  return m;
}

void check_locations(const ModelParams& p, const LocationVector& y) {
  if (!std::is_sorted(y.begin(), y.end())) throw ParameterError("locations must be ascending");
  for (size_t i = 0; i < y.size();) {
    size_t j = i;
    while (j < y.size() && y[j] == y[i]) ++j;
    if (long(j - i) > p.I) throw ParameterError("location cluster exceeds I");
    i = j;
  }
}

double final_functional(const ModelParams& p, const TiltFrame* f, DualityMode mode, const OccupancyWindow& w,
                        long t, const LocationVector& x) {
  switch (mode) {
    case DualityMode::H: return functional_H(p, w, x);
    case DualityMode::G: return functional_G(p, w, x[0], x[1]);
    case DualityMode::TiltZ: return z_value(*f, w, t, x[0]) * z_value(*f, w, t, x[1]);
    case DualityMode::TiltD: return functional_D_tilted(*f, w, t, x[0], x[1]);
  }
  return 0.0;
}

}  // namespace

double functional_H(const ModelParams& p, const OccupancyWindow& w, const LocationVector& y) {
  check_locations(p, y);
  long n = 0;
  for (long yi : y) n += w.height(yi);
  return std::pow(p.q, -double(n));
}

double functional_Dtilde(const ModelParams& p, long n1, int eta1, long n2, int eta2, bool same_site) {
  if (same_site) return std::pow(p.q, -2.0 * double(n1)) * bracket_part(p, eta1, eta1, true);
  return std::pow(p.q, -double(n1 + n2)) * bracket_part(p, eta1, eta2, false);
}

double functional_G(const ModelParams& p, const OccupancyWindow& w, long y1, long y2) {
  if (y1 > y2) throw ParameterError("functional_G: y1 > y2");
  return functional_Dtilde(p, w.height(y1), w.at(y1), w.height(y2), w.at(y2), y1 == y2);
}

double z_value(const TiltFrame& f, const OccupancyWindow& w, long t, long Y) {
  double e = f.log_lambda_hat(t) - std::log(f.params.q) * (double(w.height(Y)) - f.rho * double(Y));
  return std::exp(e);
}

double functional_D_tilted(const TiltFrame& f, const OccupancyWindow& w, long t, long Y1, long Y2) {
  if (Y1 > Y2) throw ParameterError("functional_D_tilted: y1 > y2");
  const ModelParams& p = f.params;
  return z_value(f, w, t, Y1) * z_value(f, w, t, Y2) * bracket_part(p, w.at(Y1), w.at(Y2), Y1 == Y2);
}

LocationVector reversed_step(const ModelParams& p, const LocationVector& y, long t, const Environment& env) {
  check_locations(p, y);
  if (y.empty()) return y;
  // mirrored occupation, ascending in m = -y
  std::map<long, int> occ;
  for (long yi : y) ++occ[-yi];
  const double a = p.alpha_t(t);
  std::map<long, int> next;
  int h = 0;
  long m = occ.begin()->first;
  const long m_last = occ.rbegin()->first;
  while (m <= m_last || h == 1) {
    auto it = occ.find(m);
    int g = it == occ.end() ? 0 : it->second;
    double u = env.site(t, m);
    int g2 = g;
    if (h == 0) {
      if (g > 0 && u < l_j1(p, a, g, 0, g - 1, 1)) {
        g2 = g - 1;
        h = 1;
      }
    } else if (!(u < l_j1(p, a, g, 1, g, 1))) {
      g2 = g + 1;
      h = 0;
    }
    if (g2 > 0) next[m] = g2;
    ++m;
  }
  LocationVector out;
  for (auto it = next.rbegin(); it != next.rend(); ++it)
    for (int c = 0; c < it->second; ++c) out.push_back(-it->first);
  return out;
}

DualityReport verify_duality(const ModelParams& p, const DualityQuery& q) {
  const DualityMode mode = q.mode;
  const bool tilted = mode == DualityMode::TiltZ || mode == DualityMode::TiltD;
  const long t = q.t0 + q.steps;
  check_locations(p, q.x);
  if (mode != DualityMode::H && q.x.size() != 2) throw ParameterError("G and tilted dualities take two points");
  if ((mode == DualityMode::G || mode == DualityMode::TiltD) && p.I < 2)
    throw ParameterError("two-site duality needs I >= 2");
  if (q.initial.mode == Boundary::StationarySource) throw ParameterError("duality checks need a left-finite window");
  if (q.steps < 0) throw ParameterError("steps must be nonnegative");
  const OccupancyWindow& w0 = q.initial;
  if (!q.x.empty() && q.x.front() < w0.x_left) throw ParameterError("duality points must lie in the window");

  TiltFrame frame;
  if (tilted) frame = TiltFrame::make(p, q.rho);
  const TiltFrame* fp = tilted ? &frame : nullptr;

  DualityReport rep;
  // left side: forward law at time t
  if (q.method == DualityMethod::Exact) {
    StateDist d = enumerate_steps(p, StateDist::point(w0), q.t0, q.steps, EdgePolicy::Keep);
    double s = 0.0;
    for (const auto& [key, prob] : d.probs) s += prob * final_functional(p, fp, mode, d.window(key), t, q.x);
    rep.lhs = s;
  } else {
    const long R = q.replicas;
    std::vector<double> vals(size_t(std::max(0L, R)));
#pragma omp parallel for schedule(static)
    for (long r = 0; r < R; ++r) {
      Environment env{derive_seed(q.seed, std::uint64_t(r))};
      OccupancyWindow w = w0;
      w.mode = Boundary::Truncated;
      for (int k = 0; k < q.steps; ++k) w = step_unfused(p, w, q.t0 + k, env).next;
      vals[size_t(r)] = final_functional(p, fp, mode, w, t, q.x);
    }
    double s = 0.0, s2 = 0.0;
    for (double v : vals) s += v;
    const double mean = R > 0 ? s / double(R) : 0.0;
    for (double v : vals) s2 += (v - mean) * (v - mean);
    rep.lhs = mean;
    rep.replicas = R;
    rep.sigma = R > 1 ? std::sqrt(s2 / double(R - 1) / double(R)) : 0.0;
  }

  // right side: reversed kernel against the initial configuration
  if (!tilted) {
    auto law = reversed_distribution(p, q.x, t, q.t0, w0.x_left);
    double s = 0.0;
    for (const auto& [y, prob] : law) {
      double v = mode == DualityMode::H ? functional_H(p, w0, y) : functional_G(p, w0, y[0], y[1]);
      s += prob * v;
    }
    rep.rhs = s;
    rep.tail_mass = 0.0;
  } else {
    const long X1 = q.x[0], X2 = q.x[1];
    const long lo = w0.x_left - q.tilt_depth;
    const int span = int(X2 - lo);
    TwoParticleKernel V(p, t, q.t0, span, q.rho);
    const double lq = std::log(p.q);
    const double llt = frame.log_lambda_hat(t), lls = frame.log_lambda_hat(q.t0);
    double s = 0.0, mass = 0.0;
    for (long Y1 = lo; Y1 <= X1; ++Y1)
      for (long Y2 = Y1; Y2 <= X2; ++Y2) {
        double v = V(X1, X2, Y1, Y2);
        if (v == 0.0) continue;
        double g = mode == DualityMode::TiltZ ? z_value(frame, w0, q.t0, Y1) * z_value(frame, w0, q.t0, Y2)
                                              : functional_D_tilted(frame, w0, q.t0, Y1, Y2);
        s += v * g;
        mass += v * std::exp(-2.0 * (llt - lls) - q.rho * lq * double(X1 + X2 - Y1 - Y2));
      }
    rep.rhs = s;
    double scale = std::exp(2.0 * llt + lq * (q.rho * double(X1 + X2) - 2.0 * double(w0.base)));
    double bmax = mode == DualityMode::TiltD ? bracket_sup(p) : 1.0;
    rep.tail_mass = std::max(0.0, 1.0 - mass) * scale * bmax;
  }
  rep.gap = std::fabs(rep.lhs - rep.rhs);
  return rep;
}

std::string to_string(DualityMode m) {
  switch (m) {
    case DualityMode::H: return "H";
    case DualityMode::G: return "G";
    case DualityMode::TiltZ: return "tiltZ";
    case DualityMode::TiltD: return "tiltD";
  }
  return "?";
}

DualityMode parse_duality_mode(const std::string& s) {
  if (s == "H") return DualityMode::H;
  if (s == "G") return DualityMode::G;
  if (s == "tiltZ") return DualityMode::TiltZ;
  if (s == "tiltD") return DualityMode::TiltD;
  throw ParameterError("unknown duality mode '" + s + "' (H, G, tiltZ, tiltD)");
}

}  // namespace shs6v
