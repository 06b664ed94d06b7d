#include "shs6v/hopfcole.hpp"

#include <algorithm>
#include <cmath>

#include "shs6v/enumerate.hpp"
#include "shs6v/errors.hpp"
#include "shs6v/stationary.hpp"

namespace shs6v {

double ZField::log_at(long X) const {
  if (X < x_left) return log_lambda_hat - log_q * (double(base) - rho * double(X));
  if (X > x_right()) throw ParameterError("ZField: label right of the window");
  return log_z[size_t(X - x_left)];
}

double ZField::at(long X) const { return std::exp(log_at(X)); }

ZField z_transform(const OccupancyWindow& w, const TiltFrame& f, long t) {
  ZField z;
  z.t = t;
  z.x_left = w.x_left;
  z.base = w.base;
  z.log_lambda_hat = f.log_lambda_hat(t);
  z.rho = f.rho;
  z.log_q = std::log(f.params.q);
  z.log_z.resize(w.values.size());
  long n = w.base;
  for (size_t i = 0; i < w.values.size(); ++i) {
    n += w.values[i];
    double X = double(w.x_left + long(i));
    z.log_z[i] = z.log_lambda_hat - z.log_q * (double(n) - f.rho * X);
  }
  return z;
}

double heat_ratio(const TiltFrame& f, const OccupancyWindow& w, long t, long X) {
  const ModelParams& p = f.params;
  if (X < w.x_left || X > w.x_right()) throw ParameterError("heat_ratio: label outside the window");
  const long M = X - w.x_left;
  std::vector<double> pmf = jump_pmf(p, t, int(M));
  const long nX = w.height(X);
  double s = 0.0;
  long n_left = nX;
  for (long n = 0; n <= M; ++n) {
    if (n > 0) n_left -= w.at(X - n + 1);
    s += pmf[size_t(n)] * std::pow(p.q, double(nX - n_left));
  }
  const double a = p.alpha_t(t);
  const double th = p.theta_t(t);
  const double tail = a * (1.0 - p.q) / (1.0 + a) * std::pow(th, double(M));
  s += tail * std::pow(p.q, double(nX - w.base));
  return f.lambda_at(t) * s;
}

std::vector<double> expected_flux(const ModelParams& p, const OccupancyWindow& w, long t) {
  const double a = p.alpha_t(t);
  double k = w.mode == Boundary::StationarySource ? flux_mean(p, w.chi, t) : 0.0;
  std::vector<double> out(w.values.size());
  for (size_t i = 0; i < w.values.size(); ++i) {
    double qg = int_pow(p.q, w.values[i]);
    k = k * (p.nu + a) / (1.0 + a) * qg + a * (1.0 - qg) / (1.0 + a);
    out[i] = k;
  }
  return out;
}

MartingaleDecomp she_decompose(const TiltFrame& f, const OccupancyWindow& before, const StepRecord& step, long t) {
  const ModelParams& p = f.params;
  if (before.mode == Boundary::StationarySource)
    throw ParameterError("she_decompose needs a window with an empty left region");
  ZField z0 = z_transform(before, f, t);
  ZField z1 = z_transform(step.next, f, t + 1);
  std::vector<double> ek = expected_flux(p, before, t);
  const double lam = f.lambda_at(t);
  MartingaleDecomp d;
  d.t = t;
  if (p.scaled) d.tau = tau(p, f.rho, t);
  const size_t W = before.values.size();
  d.M_kernel.resize(W);
  d.M_flux.resize(W);
  d.Theta1.resize(W);
  d.Theta2.resize(W);
  for (size_t i = 0; i < W; ++i) {
    long X = before.x_left + long(i);
    double Z = z0.at(X);
    double P = heat_ratio(f, before, t, X);
    d.M_kernel[i] = z1.at(X) - P * Z;
    d.M_flux[i] = lam * (p.q - 1.0) * Z * (double(step.flux[i]) - ek[i]);
    d.Theta1[i] = Z * (p.q * lam - P);
    d.Theta2[i] = Z * (P - lam);
    d.max_rel_gap = std::max(d.max_rel_gap, std::fabs(d.M_kernel[i] - d.M_flux[i]) / Z);
  }
  if (d.max_rel_gap > 1e-8)
    throw KernelMismatch("kernel and flux forms of the martingale increment disagree (relative gap " +
                         std::to_string(d.max_rel_gap) + ")");
  return d;
}

QvReport quadratic_variation_check(const TiltFrame& f, const OccupancyWindow& w, long t, long X1, long X2) {
  const ModelParams& p = f.params;
  if (X1 > X2) std::swap(X1, X2);
  if (X1 < w.x_left || X2 > w.x_right()) throw ParameterError("quadratic_variation_check: labels outside window");
  ZField z0 = z_transform(w, f, t);
  const double lam = f.lambda_at(t);
  const double P1 = heat_ratio(f, w, t, X1), P2 = heat_ratio(f, w, t, X2);
  const double Z1 = z0.at(X1), Z2 = z0.at(X2);

  StateDist d = enumerate_step(p, StateDist::point(w), t, EdgePolicy::Keep);
  QvReport r;
  r.X1 = X1;
  r.X2 = X2;
  for (const auto& [key, prob] : d.probs) {
    ZField z1 = z_transform(d.window(key), f, t + 1);
    double M1 = z1.at(X1) - P1 * Z1;
    double M2 = z1.at(X2) - P2 * Z2;
    r.mean_M1 += prob * M1;
    r.mean_M2 += prob * M2;
    r.lhs += prob * M1 * M2;
  }
  const double th1 = Z1 * (p.q * lam - P1), th2 = Z1 * (P1 - lam);
  r.rhs = std::pow(std::pow(p.q, f.rho) * p.theta_t(t), double(X2 - X1)) * th1 * th2;
  r.gap = std::fabs(r.lhs - r.rhs);
  r.theta_sum_gap = std::fabs(th1 + th2 - lam * (p.q - 1.0) * Z1);
  return r;
}

double tau_limit(int I, double b, double rho, int m) {
  double k = I + 2.0 * m;
  return rho * (I - rho) / double(I * I) * (b * (k + 1.0) - (k - 1.0)) / (b * k - (k - 2.0));
}

double tau(const ModelParams& p, double rho, long s) {
  p.require_scaled();
  return tau_limit(p.I, p.scaled->b, rho, p.mod(s));
}

std::vector<TauTrendRow> tau_trend(int I, int J, double b, double rho, const std::vector<double>& eps, long steps,
                                   int width, std::uint64_t seed) {
  std::vector<TauTrendRow> rows;
  for (double e : eps) {
    ModelParams p = ModelParams::make_scaled(I, J, b, rho, e);
    TiltFrame f = TiltFrame::make(p, rho);
    OccupancyWindow w = make_initial(p, InitialKind::ProductPiRho, 0, width, rho, Boundary::StationarySource, seed);
    Environment env{seed};
    const int stride = 8;
    const long first = width / 2;
    double s = 0.0, s2 = 0.0;
    long n = 0;
    for (long t = 0; t < steps; ++t) {
      const double lam = f.lambda_at(t);
      const double tt = tau(p, rho, t);
      for (long X = first; X < width; X += stride) {
        double P = heat_ratio(f, w, t, X);
        double v = (p.q * lam - P) * (P - lam) / e - tt;
        s += v;
        s2 += v * v;
        ++n;
      }
      w = step_unfused(p, w, t, env).next;
    }
    TauTrendRow r;
    r.epsilon = e;
    r.samples = n;
    r.mean = s / double(n);
    r.stderr_ = std::sqrt(std::max(0.0, s2 / double(n) - r.mean * r.mean) / double(n));
    rows.push_back(r);
  }
  return rows;
}

NearStationaryReport near_stationary_check(const ModelParams& p, double rho, InitialKind kind, int n, double a,
                                           long replicas, std::uint64_t seed, double C_declared,
                                           double u_declared) {
  p.require_scaled();
  const double e = p.scaled->epsilon;
  const long L = long(std::ceil(1.0 / e));
  const int width = int(2 * L + 1);
  const double lq = std::log(p.q);
  std::vector<long> offsets;
  for (long d = 1; d <= L; d *= 2) offsets.push_back(d);

  // moments E|Z(0, x)|^n and E|Z(0, x) - Z(0, x + d)|^n
  std::vector<double> mz(size_t(width), 0.0);
  std::vector<std::vector<double>> md(offsets.size(), std::vector<double>(size_t(width), 0.0));
  std::vector<double> logz(static_cast<size_t>(width));
  for (long r = 0; r < replicas; ++r) {
    OccupancyWindow w = make_initial(p, kind, -L, width, rho, Boundary::Truncated, derive_seed(seed, std::uint64_t(r)));
    long h = w.base;
    for (int i = 0; i < width; ++i) {
      h += w.values[size_t(i)];
      logz[size_t(i)] = -lq * (double(h) - rho * double(-L + i));
    }
    for (int i = 0; i < width; ++i) {
      mz[size_t(i)] += std::exp(n * logz[size_t(i)]);
      for (size_t k = 0; k < offsets.size(); ++k) {
        int j = i + int(offsets[k]);
        if (j >= width) continue;
        md[k][size_t(i)] += std::pow(std::fabs(std::exp(logz[size_t(i)]) - std::exp(logz[size_t(j)])), n);
      }
    }
  }
  NearStationaryReport rep;
  rep.epsilon = e;
  rep.n = n;
  rep.a = a;
  // least squares through the origin-free line log ||Z||_n = log C + u eps |x|
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> nz(static_cast<size_t>(width));
  for (int i = 0; i < width; ++i) {
    nz[size_t(i)] = std::log(mz[size_t(i)] / double(replicas)) / n;
    double x = e * std::fabs(double(-L + i));
    sx += x;
    sy += nz[size_t(i)];
    sxx += x * x;
    sxy += x * nz[size_t(i)];
  }
  double den = width * sxx - sx * sx;
  rep.u_fit = den > 0 ? std::max(0.0, (width * sxy - sx * sy) / den) : 0.0;
  auto envelope_C = [&](double u) {
    double cn = 0.0, ci = 0.0;
    for (int i = 0; i < width; ++i) {
      double x = double(-L + i);
      cn = std::max(cn, std::exp(nz[size_t(i)] - u * e * std::fabs(x)));
      for (size_t k = 0; k < offsets.size(); ++k) {
        int j = i + int(offsets[k]);
        if (j >= width) continue;
        double m = std::pow(md[k][size_t(i)] / double(replicas), 1.0 / n);
        double xp = double(-L + j);
        double env = std::pow(e * double(offsets[k]), a) * std::exp(u * e * (std::fabs(x) + std::fabs(xp)));
        ci = std::max(ci, m / env);
      }
    }
    return std::pair{cn, ci};
  };
  auto [cn, ci] = envelope_C(rep.u_fit);
  rep.C_norm = cn;
  rep.C_incr = ci;
  auto [dn, di] = envelope_C(u_declared);
  rep.pass = dn <= C_declared && di <= C_declared;
  return rep;
}

}  // namespace shs6v
