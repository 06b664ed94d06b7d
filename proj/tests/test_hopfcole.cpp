#include <cmath>

#include "doctest.h"
#include "shs6v/enumerate.hpp"
#include "shs6v/hopfcole.hpp"

using namespace shs6v;

TEST_CASE("Z transform of a flat profile") {
  ModelParams p = ModelParams::make(2.0, 2, 1, -0.2);
  TiltFrame f = TiltFrame::make(p, 1.0);
  OccupancyWindow w;
  w.values = {1, 1, 1, 1, 1};
  w.base = -1;  // N(X) = X on the window
  ZField z = z_transform(w, f, 3);
  for (long X = 0; X <= 4; ++X) CHECK(z.at(X) == doctest::Approx(f.lambda_hat(3)));
  CHECK_THROWS_AS(z.at(5), ParameterError);
}

TEST_CASE("zero-flux step multiplies Z by lambda") {
  ModelParams p = ModelParams::make_scaled(2, 1, 0.8, 1.0, 0.04);
  TiltFrame f = TiltFrame::make(p, 1.0);
  OccupancyWindow w;
  w.values = {0, 2, 0, 1, 0};
  ZField a = z_transform(w, f, 0), b = z_transform(w, f, 1);
  for (long X = 0; X <= 4; ++X) CHECK(b.at(X) == doctest::Approx(f.lambda_at(0) * a.at(X)));
}

TEST_CASE("martingale has zero conditional mean and both forms agree") {
  ModelParams p = ModelParams::make_scaled(2, 2, 0.85, 1.0, 0.04);
  TiltFrame f = TiltFrame::make(p, 1.0);
  OccupancyWindow w = make_initial(p, InitialKind::ProductPiRho, 0, 5, 1.0, Boundary::LeftFinite, 7);
  w.base = -3;
  for (long t : {0L, 1L}) {
    StateDist d = enumerate_step(p, StateDist::point(w), t, EdgePolicy::Keep);
    std::vector<double> em(5, 0.0);
    for (const auto& [k, pr] : d.probs) {
      StepRecord st;
      st.next = d.window(k);
      st.flux = flux_between(w, st.next);
      MartingaleDecomp m = she_decompose(f, w, st, t);
      CHECK(m.max_rel_gap < 1e-12);
      for (size_t i = 0; i < 5; ++i) em[i] += pr * m.M_kernel[i];
    }
    for (double v : em) CHECK(std::fabs(v) < 1e-11);
  }
}

TEST_CASE("one-step relation along a trajectory") {
  ModelParams p = ModelParams::make_scaled(2, 1, 0.8, 1.0, 0.01);
  TiltFrame f = TiltFrame::make(p, 1.0);
  OccupancyWindow u = make_initial(p, InitialKind::ProductPiRho, 0, 40, 1.0, Boundary::Truncated, 3);
  Environment env{5};
  double worst = 0.0;
  for (long t = 0; t < 10000; ++t) {
    StepRecord st = step_unfused(p, u, t, env);
    if (t % 50 == 0) worst = std::fmax(worst, she_decompose(f, u, st, t).max_rel_gap);
    u = st.next;
  }
  CHECK(worst < 1e-10);
  OccupancyWindow s = make_initial(p, InitialKind::ProductPiRho, 0, 5, 1.0, Boundary::StationarySource, 3);
  CHECK_THROWS_AS(she_decompose(f, s, step_unfused(p, s, 0, env), 0), ParameterError);
}

TEST_CASE("quadratic variation identity") {
  ModelParams p = ModelParams::make_scaled(2, 2, 0.85, 1.0, 0.04);
  TiltFrame f = TiltFrame::make(p, 1.0);
  OccupancyWindow w = make_initial(p, InitialKind::ProductPiRho, 0, 5, 1.0, Boundary::LeftFinite, 7);
  w.base = -3;
  for (long t : {0L, 1L})
    for (auto [a, b] : {std::pair{0L, 0L}, std::pair{1L, 3L}, std::pair{2L, 4L}}) {
      QvReport r = quadratic_variation_check(f, w, t, a, b);
      CHECK(r.gap < 1e-10);
      CHECK(r.theta_sum_gap < 1e-12);
      CHECK(std::fabs(r.mean_M1) < 1e-11);
    }
  OccupancyWindow e;
  e.values = {0, 0, 0, 0, 0};
  QvReport r = quadratic_variation_check(f, e, 0, 2, 2);
  CHECK(r.lhs == doctest::Approx(r.rhs).epsilon(1e-10));
}

TEST_CASE("tau limit and trend") {
  CHECK(tau_limit(2, 0.8, 1.0, 0) == doctest::Approx(0.25 * (0.8 * 3 - 1) / (0.8 * 2)));
  ModelParams p = ModelParams::make_scaled(2, 1, 0.8, 1.0, 0.01);
  CHECK(tau(p, 1.0, 4) == doctest::Approx(tau_limit(2, 0.8, 1.0, 0)));
  std::vector<TauTrendRow> rows = tau_trend(2, 1, 0.8, 1.0, {0.04, 0.01, 0.0025}, 2000, 200, 11);
  REQUIRE(rows.size() == 3);
  CHECK(std::fabs(rows[0].mean) > std::fabs(rows[1].mean));
  CHECK(std::fabs(rows[1].mean) > std::fabs(rows[2].mean));
}

TEST_CASE("near-stationary envelope") {
  ModelParams p = ModelParams::make_scaled(2, 1, 0.8, 1.0, 0.01);
  NearStationaryReport r = near_stationary_check(p, 1.0, InitialKind::ProductPiRho, 4, 0.45, 500, 9, 10.0, 2.0);
  CHECK(r.pass);
  CHECK(r.C_norm > 0.0);
  NearStationaryReport flat = near_stationary_check(p, 1.0, InitialKind::Flat, 2, 0.45, 1, 9, 10.0, 2.0);
  CHECK(flat.u_fit < 1e-12);
  CHECK(flat.C_norm == doctest::Approx(1.0));
}
