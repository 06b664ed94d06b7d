#include "shs6v/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "shs6v/enumerate.hpp"

namespace shs6v {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx node(double r, int j, int n) { return std::polar(r, kTwoPi * (j + 0.5) / n); }

cplx step_factor(const ModelParams& p, long k, cplx w) {
  double a = p.alpha_t(k);
  return ((1.0 + a * p.q) * w - (p.nu + a * p.q)) / ((1.0 + a) * w - (p.nu + a));
}

double theta_max(const ModelParams& p) {
  double th = 0.0;
  for (int k = 0; k < p.J; ++k) th = std::fmax(th, std::fabs(p.theta_t(k)));
  return th;
}

// g(w) = D_tilde(w)^{floor((t-s)/J)} R_tilde(w, t, s)
cplx g_untilted(const ModelParams& p, cplx w, long t, long s) {
  long n = (t - s) / p.J;
  cplx r = R_tilde(p, w, t, s);
  if (n > 0) r *= std::pow(D_tilde(p, w), int(n));
  return r;
}

}  // namespace

long integral_exponent(double e, double tol) {
  double r = std::round(e);
  if (std::fabs(e - r) > tol) {
    std::ostringstream os;
    os.precision(17);
    os << "non-integer total exponent " << e << " (query not on the drifting lattice)";
    throw ParameterError(os.str());
  }
  return long(r);
}

OneParticleResult one_particle_kernel(const TiltFrame& f, long t, long s, double x) {
  if (t < s) throw ParameterError("one_particle_kernel: t < s");
  long n = integral_exponent(x + f.mu_hat(t) - f.mu_hat(s));
  if (t == s) return {n == 0 ? 1.0 : 0.0, 0};
  const ModelParams& p = f.params;
  double scale = std::pow(p.q, f.rho);
  double lam = std::exp(f.log_lambda_hat(t) - f.log_lambda_hat(s));
  double R = 2.0 * std::fmax(1.0, scale * theta_max(p));
  auto eval = [&](int N) {
    cplx acc = 0.0;
    for (int j = 0; j < N; ++j) {
      cplx z = node(R, j, N);
      cplx w = z / scale;
      cplx v = 1.0;
      for (long k = s; k < t; ++k) v *= step_factor(p, k, w);
      acc += v * std::pow(z, int(n));
    }
    return lam * acc.real() / N;
  };
  int N = 64;
  double prev = eval(N);
  while (true) {
    N *= 2;
    double cur = eval(N);
    if (std::fabs(cur - prev) < 1e-11) return {cur, N};
    if (N >= (1 << 16)) throw QuadratureNotConverged("one_particle_kernel did not converge within 2^16 nodes");
    prev = cur;
  }
}

std::vector<double> one_particle_convolution(const TiltFrame& f, long t, long s, double tail_tol) {
  std::vector<double> acc{1.0};
  for (long k = s; k < t; ++k) {
    std::vector<double> step = f.tilted_pmf(k, f.tail_cut(k, tail_tol));
    std::vector<double> next(acc.size() + step.size() - 1, 0.0);
    for (size_t i = 0; i < acc.size(); ++i)
      for (size_t j = 0; j < step.size(); ++j) next[i + j] += acc[i] * step[j];
    acc.swap(next);
  }
  return acc;
}

cplx D_tilde(const ModelParams& p, cplx z) {
  double aJ = p.alpha * int_pow(p.q, p.J);
  return ((1.0 + aJ) * z - (p.nu + aJ)) / ((1.0 + p.alpha) * z - (p.nu + p.alpha));
}

cplx R_tilde(const ModelParams& p, cplx z, long t, long s) {
  cplx r = 1.0;
  for (long k = s + p.J * ((t - s) / p.J); k < t; ++k) r *= step_factor(p, k, z);
  return r;
}

cplx F_tilde(const ModelParams& p, cplx z1, cplx z2) {
  double q = p.q, nu = p.nu;
  cplx num = q * nu - nu + (nu - q) * z2 + (1.0 - q * nu) * z1 + (q - 1.0) * z1 * z2;
  cplx den = q * nu - nu + (nu - q) * z1 + (1.0 - q * nu) * z2 + (q - 1.0) * z1 * z2;
  return num / den;
}

cplx s_tilde(const ModelParams& p, cplx z) {
  double q = p.q, nu = p.nu;
  return ((1.0 - q * nu) * z - nu * (1.0 - q)) / ((q - nu) + (1.0 - q) * z);
}

cplx p_tilde(const ModelParams& p, cplx z) {
  double q = p.q, nu = p.nu;
  return (nu * (1.0 - q) + (q - nu) * z) / ((1.0 - q * nu) + (q - 1.0) * z);
}

double c_of(const ModelParams& p, long y1, long y2) {
  if (y1 < y2) return 1.0;
  return (1.0 - p.q * p.nu) / ((1.0 + p.q) * (1.0 - p.nu));
}

cplx residue_F(const ModelParams& p, cplx z2) {
  double q = p.q, nu = p.nu;
  cplx z1 = s_tilde(p, z2);
  cplx num = q * nu - nu + (nu - q) * z2 + (1.0 - q * nu) * z1 + (q - 1.0) * z1 * z2;
  cplx dden = (nu - q) + (q - 1.0) * z2;
  return num / dden;
}

// ---- two particle tables ----

TwoParticleKernel::TwoParticleKernel(const ModelParams& p, long t, long s, int span, double rho, bool parallel)
    : p_(p), t_(t), s_(s), span_(span), rho_(rho) {
  if (p.I < 2) throw ParameterError("two-particle formula requires I >= 2");
  if (t < s) throw ParameterError("two-particle kernel: t < s");
  if (span < 0) throw ParameterError("two-particle kernel: negative span");
  scale_ = std::pow(p.q, rho);
  lam_ = 1.0;
  if (rho != 0.0) {
    TiltFrame f = TiltFrame::make(p, rho);
    lam_ = std::exp(f.log_lambda_hat(t) - f.log_lambda_hat(s));
  }
  // z1 circle about [0, theta], kept away from the pole of p_tilde at s(infinity) = -(1 - q nu)/(q - 1)
  double th = theta_max(p);
  double sinf = std::fabs((1.0 - p.q * p.nu) / (1.0 - p.q));
  double margin = std::fmin(0.15 * th + 0.02, 0.5 * sinf);
  double c1 = 0.5 * th, r1 = 0.5 * th + margin;
  double sup_p = 0.0;
  for (int j = 0; j < 4096; ++j) sup_p = std::fmax(sup_p, std::abs(p_tilde(p, c1 + node(r1, j, 4096))));
  double r2 = 1.1 * std::fmax(th, sup_p);
  c1_ = c1 * scale_;
  r1_ = r1 * scale_;
  r2pos_ = r2 * scale_;
  r2neg_ = std::fmax(r2, 2.0) * scale_;

  if (t == s) {
    nodes_ = 0;
    return;
  }
  int N = 512;
  tab_ = build(N, parallel);
  while (true) {
    Tables next = build(2 * N, parallel);
    double diff = 0.0;
    for (size_t i = 0; i < next.c.size(); ++i)
      diff = std::fmax(diff, std::abs(next.c[i] - tab_.c[i]) / std::fmax(1.0, std::abs(next.c[i])));
    // coupled entries carry a roundoff floor proportional to r1^a r2^b times the integrand size
    const int nb = 2 * span_ + 1;
    for (size_t i = 0; i < next.w.size(); ++i) {
      int a = int(i) / nb, b = int(i) % nb - span_;
      double env = next.gmax1 * next.gmax2 * next.fmax * std::pow(c1_ + r1_, a) * std::pow(b < 0 ? r2neg_ : r2pos_, b);
      double d = std::abs(next.w[i] - tab_.w[i]) - 64.0 * 2.2e-16 * env;
      diff = std::fmax(diff, d / std::fmax(1.0, std::abs(next.w[i])));
    }
    tab_ = std::move(next);
    N *= 2;
    if (diff < 1e-11) break;
    if (N >= 4096) throw QuadratureNotConverged("two-particle tables did not converge within 4096 nodes");
  }
  nodes_ = N;
}

cplx TwoParticleKernel::g(cplx z) const { return lam_ * g_untilted(p_, z / scale_, t_, s_); }

TwoParticleKernel::Tables TwoParticleKernel::build(int N, bool parallel) const {
  const int S = span_;
  const int nb = 2 * S + 1;
  Tables tb;
  tb.c.assign(size_t(S) + 1, 0.0);
  tb.w.assign(size_t(S + 1) * nb, 0.0);

  // dz1 / (2 pi i z1) on the shifted circle: trapezoid weight (z1 - c1) / z1, folded into G1
  std::vector<cplx> z1(N), G1(N);
  for (int j = 0; j < N; ++j) {
    cplx d = node(r1_, j, N);
    z1[j] = c1_ + d;
    G1[j] = g(z1[j]) * d / z1[j];
    tb.gmax1 = std::fmax(tb.gmax1, std::abs(G1[j]));
  }
  for (int m = 0; m <= S; ++m) {
    cplx acc = 0.0;
    for (int j = 0; j < N; ++j) acc += G1[j] * std::pow(z1[j], m);
    tb.c[m] = acc / double(N);
  }

  // inner[j][b] = mean_k F(z1_j, z2_k) g(z2_k) z2_k^b, b in [-S, S]
  std::vector<cplx> inner(size_t(N) * nb, 0.0);
  for (int side = 0; side < 2; ++side) {
    const bool neg = side == 1;
    const double r2 = neg ? r2neg_ : r2pos_;
    const int b_lo = neg ? -S : 0, b_hi = neg ? -1 : S;
    if (b_lo > b_hi) continue;
    std::vector<cplx> z2(N), G2(N);
    for (int k = 0; k < N; ++k) {
      z2[k] = node(r2, k, N);
      G2[k] = g(z2[k]);
      tb.gmax2 = std::fmax(tb.gmax2, std::abs(G2[k]));
    }
    for (int k = 0; k < N; k += 7)
      for (int j = 0; j < N; j += 7) tb.fmax = std::fmax(tb.fmax, std::abs(F_tilde(p_, z1[j] / scale_, z2[k] / scale_)));
    const int nbs = b_hi - b_lo + 1;
    std::vector<cplx> pw(size_t(N) * nbs);
    for (int k = 0; k < N; ++k)
      for (int b = b_lo; b <= b_hi; ++b) pw[size_t(k) * nbs + (b - b_lo)] = G2[k] * std::pow(z2[k], b);
    auto row = [&](int j) {
      std::vector<cplx> acc(nbs, 0.0);
      for (int k = 0; k < N; ++k) {
        cplx F = F_tilde(p_, z1[j] / scale_, z2[k] / scale_);
        const cplx* pk = &pw[size_t(k) * nbs];
        for (int b = 0; b < nbs; ++b) acc[b] += F * pk[b];
      }
      for (int b = 0; b < nbs; ++b) inner[size_t(j) * nb + (b + b_lo + S)] = acc[b] / double(N);
    };
    if (parallel) {
#pragma omp parallel for schedule(static)
      for (int j = 0; j < N; ++j) row(j);
    } else {
      for (int j = 0; j < N; ++j) row(j);
    }
  }
  for (int a = 0; a <= S; ++a) {
    std::vector<cplx> za(N);
    for (int j = 0; j < N; ++j) za[j] = G1[j] * std::pow(z1[j], a);
    // only b <= a is reachable: x1 - y2 <= x2 - y1
    for (int b = 0; b <= a + S; ++b) {
      cplx acc = 0.0;
      for (int j = 0; j < N; ++j) acc += za[j] * inner[size_t(j) * nb + b];
      tb.w[size_t(a) * nb + b] = acc / double(N);
    }
  }
  return tb;
}

double TwoParticleKernel::operator()(long x1, long x2, long y1, long y2) const {
  if (x1 > x2 || y1 > y2) throw ParameterError("two-particle kernel: coordinates must be ordered");
  if (y1 > x1 || y2 > x2) return 0.0;  // reversed particles only move left
  if (t_ == s_) return (x1 == y1 && x2 == y2) ? 1.0 : 0.0;
  long m1 = x1 - y1, m2 = x2 - y2, a = x2 - y1, b = x1 - y2;
  if (a > span_ || m1 > span_ || m2 > span_ || b < -span_ || b > span_)
    throw ParameterError("two-particle kernel: query outside the tabulated span");
  const int nb = 2 * span_ + 1;
  cplx T1 = tab_.c[size_t(m1)] * tab_.c[size_t(m2)];
  cplx T23 = tab_.w[size_t(a) * nb + size_t(b + span_)];
  return c_of(p_, y1, y2) * (T1 - T23).real();
}

double two_particle_reversed(const ModelParams& p, long x1, long x2, long y1, long y2, long t, long s) {
  long lo = std::min({x1, x2, y1, y2}), hi = std::max({x1, x2, y1, y2});
  TwoParticleKernel k(p, t, s, int(hi - lo), 0.0, false);
  return k(x1, x2, y1, y2);
}

double literal_radius(const ModelParams& p) {
  // keep the pole of s_tilde well inside so that s_tilde maps C_R into the disk it bounds
  double spole = std::fabs((p.q - p.nu) / (p.q - 1.0));
  double R = 2.0 * std::max({1.0, theta_max(p), spole});
  for (int it = 0; it < 8; ++it) {
    double sup_s = 0.0;
    for (int j = 0; j < 2048; ++j) sup_s = std::fmax(sup_s, std::abs(s_tilde(p, node(R, j, 2048))));
    if (sup_s < 0.5 * R) return R;
    R *= 2.0;
  }
  throw PoleOnContour("literal_radius: no circle contains its own s_tilde image");
}

double two_particle_reversed_literal(const ModelParams& p, long x1, long x2, long y1, long y2, long t, long s,
                                     int N) {
  if (p.I < 2) throw ParameterError("two-particle formula requires I >= 2");
  if (t == s) return (x1 == y1 && x2 == y2) ? 1.0 : 0.0;
  double R = literal_radius(p);
  std::vector<cplx> z(N), G(N);
  for (int j = 0; j < N; ++j) {
    z[j] = node(R, j, N);
    G[j] = g_untilted(p, z[j], t, s);
  }
  cplx c1 = 0.0, c2 = 0.0, T2 = 0.0, T3 = 0.0;
  for (int j = 0; j < N; ++j) {
    c1 += G[j] * std::pow(z[j], int(x1 - y1));
    c2 += G[j] * std::pow(z[j], int(x2 - y2));
  }
  cplx T1 = c1 * c2 / double(N) / double(N);
  for (int j = 0; j < N; ++j) {
    cplx u = G[j] * std::pow(z[j], int(x2 - y1));
    for (int k = 0; k < N; ++k) T2 += F_tilde(p, z[j], z[k]) * u * G[k] * std::pow(z[k], int(x1 - y2));
  }
  T2 /= double(N) * double(N);
  for (int k = 0; k < N; ++k) {
    cplx z1 = s_tilde(p, z[k]);
    T3 += residue_F(p, z[k]) * g_untilted(p, z1, t, s) * std::pow(z1, int(x2 - y1)) / z1 * G[k] *
          std::pow(z[k], int(x1 - y2));
  }
  T3 /= double(N);
  return c_of(p, y1, y2) * (T1 - T2 + T3).real();
}

double tilted_V(const TiltFrame& f, double x1, double x2, double y1, double y2, long t, long s) {
  double mt = f.mu_hat(t), ms = f.mu_hat(s);
  long X1 = integral_exponent(x1 + mt), X2 = integral_exponent(x2 + mt);
  long Y1 = integral_exponent(y1 + ms), Y2 = integral_exponent(y2 + ms);
  long lo = std::min({X1, X2, Y1, Y2}), hi = std::max({X1, X2, Y1, Y2});
  TwoParticleKernel k(f.params, t, s, int(hi - lo), f.rho, false);
  return k(X1, X2, Y1, Y2);
}

double tilted_V_via_reversed(const TiltFrame& f, double x1, double x2, double y1, double y2, long t, long s) {
  double mt = f.mu_hat(t), ms = f.mu_hat(s);
  long X1 = integral_exponent(x1 + mt), X2 = integral_exponent(x2 + mt);
  long Y1 = integral_exponent(y1 + ms), Y2 = integral_exponent(y2 + ms);
  double lr = f.log_lambda_hat(t) - f.log_lambda_hat(s);
  double factor = std::exp(2.0 * lr + f.rho * std::log(f.params.q) * double(X1 + X2 - Y1 - Y2));
  return factor * two_particle_reversed(f.params, X1, X2, Y1, Y2, t, s);
}

std::map<std::vector<long>, double> reversed_distribution(const ModelParams& p, const std::vector<long>& x, long t,
                                                          long s, long lo) {
  if (x.empty()) return {{{}, 1.0}};
  if (!std::is_sorted(x.begin(), x.end())) throw ParameterError("reversed_distribution: start must be ascending");
  if (x.front() < lo) throw ParameterError("reversed_distribution: start below the absorbing level");
  long top = x.back();
  OccupancyWindow w;
  w.x_left = -top;
  w.mode = Boundary::Truncated;
  w.values.assign(size_t(top - lo + 1), 0);
  for (long xi : x) {
    int& v = w.values[size_t(-xi - w.x_left)];
    if (++v > p.I) throw ParameterError("reversed_distribution: cluster exceeds I");
  }
  StateDist d = enumerate_steps(p, StateDist::point(w), s, int(t - s), EdgePolicy::Keep);
  std::map<std::vector<long>, double> out;
  for (const auto& [key, prob] : d.probs) {
    std::vector<long> pos(size_t(key[1]), lo - 1);
    for (size_t i = 2; i < key.size(); ++i)
      for (long c = 0; c < key[i]; ++c) pos.push_back(-(w.x_left + long(i - 2)));
    std::sort(pos.begin(), pos.end());
    out[pos] += prob;
  }
  return out;
}

}  // namespace shs6v
