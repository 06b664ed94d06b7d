#include <cmath>

#include "doctest.h"
#include "shs6v/kernels.hpp"
#include "shs6v/sd_diagnostics.hpp"

using namespace shs6v;

TEST_CASE("tilted walk is normalized and centered") {
  ModelParams p = ModelParams::make_scaled(2, 2, 0.85, 1.0, 0.04);
  TiltFrame f = TiltFrame::make(p, 1.0);
  for (long k = 0; k < 2; ++k) {
    std::vector<double> w = f.tilted_pmf(k, f.tail_cut(k, 1e-18));
    double s = 0.0, m = 0.0;
    for (size_t n = 0; n < w.size(); ++n) {
      s += w[n];
      m += w[n] * (double(n) - f.mu_at(k));
    }
    CHECK(std::fabs(s - 1.0) < 1e-12);
    CHECK(std::fabs(m) < 1e-12);
  }
}

TEST_CASE("tilt asymptotics") {
  const int I = 2;
  const double rho = 1.0;
  for (double e : {1e-4, 1e-6}) {
    ModelParams p = ModelParams::make_scaled(I, 1, 0.8, rho, e);
    StepTilt s = step_tilt(p, rho, 0);
    CHECK(std::fabs(s.mu - 1.0 / I) < 10.0 * std::sqrt(e));
    CHECK(std::fabs(s.lambda - (1.0 - rho * std::sqrt(e) / I)) < 10.0 * e);
  }
}

TEST_CASE("one-particle kernel") {
  ModelParams p = ModelParams::make_scaled(2, 2, 0.85, 1.0, 0.04);
  TiltFrame f = TiltFrame::make(p, 1.0);
  CHECK(one_particle_kernel(f, 3, 3, 0.0).value == 1.0);
  CHECK(one_particle_kernel(f, 3, 3, 1.0).value == 0.0);
  CHECK_THROWS_AS(one_particle_kernel(f, 3, 2, 0.0), ParameterError);
  CHECK_THROWS_AS(one_particle_kernel(f, 1, 0, 0.5), ParameterError);
  for (long t : {1L, 5L}) {
    std::vector<double> conv = one_particle_convolution(f, t, 0);
    const double shift = f.mu_hat(t) - f.mu_hat(0);
    double gap = 0.0, total = 0.0;
    for (size_t n = 0; n < 20; ++n) {
      gap = std::fmax(gap, std::fabs(one_particle_kernel(f, t, 0, double(n) - shift).value - conv[n]));
      total += conv[n];
    }
    CHECK(gap < 1e-10);
    CHECK(total <= 1.0 + 1e-12);
  }
}

TEST_CASE("contour algebra") {
  ModelParams p = ModelParams::make(1.5, 2, 1, -0.3);
  for (cplx z : {cplx(0.3, 0.2), cplx(-1.1, 0.4), cplx(2.0, -1.0)}) {
    CHECK(std::abs(p_tilde(p, s_tilde(p, z)) - z) < 1e-12);
    // numeric residue on a small circle about s(z)
    cplx c = s_tilde(p, z), acc = 0.0;
    const int N = 256;
    for (int j = 0; j < N; ++j) {
      cplx d = std::polar(1e-3, 2.0 * M_PI * (j + 0.5) / N);
      acc += F_tilde(p, c + d, z) * d;
    }
    CHECK(std::abs(acc / double(N) - residue_F(p, z)) < 1e-9);
  }
  CHECK(integral_exponent(3.0 + 1e-12) == 3);
  CHECK_THROWS_AS(integral_exponent(2.5), ParameterError);
  CHECK(c_of(p, 0, 1) == 1.0);
}

TEST_CASE("two-particle kernel against the reversed chain") {
  ModelParams p = ModelParams::make(1.5, 2, 1, -0.3);
  TwoParticleKernel zero(p, 2, 2, 4);
  CHECK(zero(0, 1, 0, 1) == 1.0);
  CHECK(zero(0, 1, -1, 1) == 0.0);
  for (long t : {1L, 3L}) {
    TwoParticleKernel k(p, t, 0, 8);
    TwoParticleKernel ks(p, t, 0, 8, 0.0, false);
    double gap = 0.0, par = 0.0;
    for (long x1 = -4; x1 <= 4; ++x1)
      for (long x2 = x1; x2 <= 4; ++x2) {
        auto d = reversed_distribution(p, {x1, x2}, t, 0, -4);
        double sum = 0.0;
        for (long y1 = -4; y1 <= 4; ++y1)
          for (long y2 = y1; y2 <= 4; ++y2) {
            auto it = d.find({y1, y2});
            double o = it == d.end() ? 0.0 : it->second;
            gap = std::fmax(gap, std::fabs(k(x1, x2, y1, y2) - o));
            par = std::fmax(par, std::fabs(k(x1, x2, y1, y2) - ks(x1, x2, y1, y2)));
            sum += k(x1, x2, y1, y2);
          }
        auto lo = d.lower_bound({-4, -1000000});
        double absorbed = 0.0;
        for (auto it = d.begin(); it != lo; ++it) absorbed += it->second;
        CHECK(sum + absorbed <= 1.0 + 1e-8);
      }
    CHECK(gap < 1e-8);
    CHECK(par < 1e-13);
  }
  CHECK(two_particle_reversed_literal(p, 1, 2, 0, 1, 2, 0, 256) ==
        doctest::Approx(two_particle_reversed(p, 1, 2, 0, 1, 2, 0)).epsilon(1e-9));
}

TEST_CASE("wide tables stay accurate for q near one") {
  ModelParams p = ModelParams::make(1.22, 2, 1, -0.4);
  TwoParticleKernel k(p, 2, 0, 48);
  double gap = 0.0;
  for (long x1 = 0; x1 <= 3; ++x1)
    for (long x2 = x1; x2 <= 3; ++x2) {
      auto d = reversed_distribution(p, {x1, x2}, 2, 0, -44);
      for (long y1 = -44; y1 <= x1; ++y1)
        for (long y2 = y1; y2 <= x2; ++y2) {
          auto it = d.find({y1, y2});
          gap = std::fmax(gap, std::fabs(k(x1, x2, y1, y2) - (it == d.end() ? 0.0 : it->second)));
        }
    }
  CHECK(gap < 1e-12);
}

TEST_CASE("far particle decouples") {
  ModelParams p = ModelParams::make(1.5, 2, 1, -0.3);
  TiltFrame f = TiltFrame::make(p, 0.0);
  TwoParticleKernel k(p, 2, 0, 48);
  const long x1 = 0, x2 = 30;
  const double shift = f.mu_hat(2);
  for (long m = 0; m <= 4; ++m) {
    double marg = 0.0;
    for (long y2 = x2 - 14; y2 <= x2; ++y2) marg += k(x1, x2, x1 - m, y2);
    CHECK(std::fabs(marg - one_particle_kernel(f, 2, 0, double(m) - shift).value) < 1e-7);
  }
}

TEST_CASE("tilted kernel, two evaluation paths") {
  ModelParams p = ModelParams::make_scaled(2, 2, 0.85, 1.0, 0.04);
  TiltFrame f = TiltFrame::make(p, 1.0);
  const long t = 3;
  const double mt = f.mu_hat(t);
  for (auto [X1, X2, Y1, Y2] : {std::array<long, 4>{0, 2, -1, 1}, std::array<long, 4>{1, 1, 0, 1},
                                std::array<long, 4>{2, 5, 0, 3}}) {
    double a = tilted_V(f, double(X1) - mt, double(X2) - mt, double(Y1), double(Y2), t, 0);
    double b = tilted_V_via_reversed(f, double(X1) - mt, double(X2) - mt, double(Y1), double(Y2), t, 0);
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
  }
}

TEST_CASE("steepest-descent symbols") {
  for (auto [I, J, b] : {std::tuple{2, 1, 0.8}, std::tuple{2, 2, 0.85}, std::tuple{3, 2, 0.9}}) {
    ContourSpec m;
    m.kind = ContourKind::ShiftedCircle;
    m.radius = double(I) / (I + 1);
    SdReport r = sd_diagnostics(I, J, b, m, 2000);
    CHECK(r.max_D < 1.0);
    CHECK(r.max_H < 1.0);
    CHECK(r.max_zp_dev < 1e-12);
    ContourSpec mu;
    mu.kind = ContourKind::ClippedShifted;
    mu.u = kSdU;
    SdReport ru = sd_diagnostics(I, J, b, mu, 2000);
    CHECK(ru.max_D < 1.0);
    CHECK(ru.max_H < 1.0);
    for (double th : {-2.5, -0.7, 0.3, 1.9}) {
      double d = sd_D_star_abs(I, J, b, std::polar(1.0, th));
      CHECK(std::fabs(d * d - sd_D_star_unit_formula(I, J, b, th)) < 1e-12);
      double rad = implicit_radius([I](cplx z) { return sd_p_star(I, z); }, I, th);
      CHECK(rad == doctest::Approx(double(I) / (I + 1)).epsilon(1e-12));
    }
  }
  CHECK(std::abs(contour_point({ContourKind::Circle, 2.0}, 2, 0.0) - cplx(2.0, 0.0)) < 1e-15);
}
