#include <cmath>
#include <map>

#include "doctest.h"
#include "shs6v/enumerate.hpp"
#include "shs6v/stationary.hpp"

using namespace shs6v;

namespace {

OccupancyWindow window(std::vector<int> v, Boundary mode = Boundary::LeftFinite, long x_left = 0) {
  OccupancyWindow w;
  w.x_left = x_left;
  w.values = std::move(v);
  w.mode = mode;
  return w;
}

}  // namespace

TEST_CASE("empty window stays empty") {
  ModelParams p = ModelParams::make(2.0, 2, 1, -0.2);
  OccupancyWindow w = window({0, 0, 0, 0});
  StepRecord r = step_unfused(p, w, 0, Environment{3});
  CHECK(r.next.values == w.values);
  CHECK(r.k_out == 0);
  ModelParams p2 = ModelParams::make(2.0, 2, 2, -0.1);
  CHECK(step_fused(build_table(p2, p2.alpha, 2), w, 0, Environment{3}).next.values == w.values);
  StateDist d = enumerate_step(p, StateDist::point(w), 0, EdgePolicy::Drop);
  CHECK(d.probs.size() == 1);
  CHECK(d.total() == doctest::Approx(1.0));
}

TEST_CASE("single particle stays with the closed-form probability") {
  ModelParams p = ModelParams::make(1.5, 2, 1, -0.3);
  OccupancyWindow w = window({0, 1, 0, 0, 0, 0, 0, 0}, Boundary::Truncated);
  const long n = 1000000;
  long stay = 0;
  for (long r = 0; r < n; ++r) stay += step_unfused(p, w, 0, Environment{derive_seed(5, std::uint64_t(r))}).next.values[1];
  const double ps = (1.0 + p.q * p.alpha) / (1.0 + p.alpha);
  const double sigma = std::sqrt(ps * (1.0 - ps) / double(n));
  CHECK(std::fabs(double(stay) / double(n) - ps) < 4.0 * sigma);
}

TEST_CASE("enumerated one-step law matches sampling") {
  ModelParams p = ModelParams::make(2.0, 2, 1, -0.2);
  OccupancyWindow w = window({1, 0, 1, 0}, Boundary::Truncated);
  StateDist d = enumerate_step(p, StateDist::point(w), 0, EdgePolicy::Keep);
  CHECK(d.total() == doctest::Approx(1.0).epsilon(1e-12));
  const long n = 200000;
  std::map<StateKey, long> counts;
  for (long r = 0; r < n; ++r) ++counts[key_of(step_unfused(p, w, 0, Environment{derive_seed(9, std::uint64_t(r))}).next)];
  double chi2 = 0.0;
  int df = -1;
  for (const auto& [k, pr] : d.probs) {
    double e = pr * double(n);
    double o = counts.count(k) ? double(counts[k]) : 0.0;
    chi2 += (o - e) * (o - e) / e;
    ++df;
  }
  for (const auto& [k, c] : counts) CHECK(d.probs.count(k) == 1);
  CHECK(chi2 < df + 5.0 * std::sqrt(2.0 * df));
}

TEST_CASE("fused step law equals J unfused steps") {
  for (int J : {2, 3}) {
    ModelParams p = ModelParams::make_scaled(2, J, 0.9, 1.0, 0.04);
    OccupancyWindow w = window({2, 1, 0, 1, 0});
    VertexWeightTable tab = build_table(p, p.alpha, J);
    StateDist f = enumerate_step_fused(tab, StateDist::point(w), EdgePolicy::Keep);
    StateDist u = enumerate_steps(p, StateDist::point(w), 0, J, EdgePolicy::Keep);
    CHECK(total_variation(f, u) < 1e-9);
  }
}

TEST_CASE("fused and unfused mean height drop agree by sampling") {
  ModelParams p = ModelParams::make_scaled(2, 2, 0.8, 1.0, 0.04);
  VertexWeightTable tab = build_table(p, p.alpha, 2);
  OccupancyWindow w = window({2, 1, 0, 1, 0}, Boundary::Truncated);
  const long n = 200000;
  const long tag = 2;
  double sf = 0, sf2 = 0, su = 0, su2 = 0;
  for (long r = 0; r < n; ++r) {
    Environment e1{derive_seed(21, std::uint64_t(r))}, e2{derive_seed(22, std::uint64_t(r))};
    double df = double(w.height(tag) - step_fused(tab, w, 0, e1).next.height(tag));
    OccupancyWindow u = step_unfused(p, w, 0, e2).next;
    u = step_unfused(p, u, 1, e2).next;
    double du = double(w.height(tag) - u.height(tag));
    sf += df;
    sf2 += df * df;
    su += du;
    su2 += du * du;
  }
  double mf = sf / n, mu = su / n;
  double se = std::sqrt((sf2 / n - mf * mf) / n + (su2 / n - mu * mu) / n);
  CHECK(std::fabs(mf - mu) < 3.0 * se + 1e-12);
}

TEST_CASE("recursion and sequential update agree pathwise") {
  ModelParams p = ModelParams::make(1.5, 2, 1, -0.3);
  for (Boundary mode : {Boundary::Truncated, Boundary::StationarySource}) {
    OccupancyWindow w = make_initial(p, InitialKind::ProductPiRho, 0, 6, 1.0, mode, 4);
    Environment env{17};
    for (long t = 0; t < 10000; ++t) {
      StepRecord a = step_unfused(p, w, t, env);
      StepRecord b = step_recursion(p, w, t, env);
      REQUIRE(a.next.values == b.next.values);
      REQUIRE(a.flux == b.flux);
      REQUIRE(a.next.base == b.next.base);
      for (int k : a.flux) REQUIRE((k == 0 || k == 1));
      w = a.next;
    }
  }
}

TEST_CASE("particle conservation and height monotonicity") {
  ModelParams p = ModelParams::make_scaled(3, 2, 0.9, 1.5, 0.04);
  OccupancyWindow w = make_initial(p, InitialKind::Step, -10, 20, 1.5, Boundary::Truncated, 8);
  Environment env{2};
  for (long t = 0; t < 200; ++t) {
    StepRecord r = step_unfused(p, w, t, env);
    CHECK(r.next.particles() + r.next.exited == w.particles() + w.exited);
    for (long y = w.x_left; y <= w.x_right(); ++y) {
      long d = w.height(y) - r.next.height(y);
      CHECK((d == 0 || d == 1));
      CHECK(d == r.flux[size_t(y - w.x_left)]);
    }
    w = r.next;
  }
}

TEST_CASE("left-finite windows refuse right exits") {
  ModelParams p = ModelParams::make(2.0, 2, 1, -0.2);
  OccupancyWindow w = window({0, 0, 2});
  bool thrown = false;
  for (std::uint64_t s = 0; s < 200 && !thrown; ++s) {
    try {
      step_unfused(p, w, 0, Environment{s});
    } catch (const WindowOverflow&) {
      thrown = true;
    }
  }
  CHECK(thrown);
}

TEST_CASE("truncation certificate") {
  ModelParams p = ModelParams::make_scaled(2, 1, 0.8, 1.0, 0.04);
  long off = certified_offset(p, 1e-12);
  CHECK(off > 0);
  CHECK_THROWS_AS(require_certified(p, window(std::vector<int>(size_t(off), 0), Boundary::Truncated), 1e-12),
                  TruncationError);
  CHECK_NOTHROW(require_certified(p, window(std::vector<int>(size_t(off + 5), 0), Boundary::Truncated), 1e-12));
}

TEST_CASE("initial data") {
  ModelParams p = ModelParams::make(2.0, 2, 1, -0.2);
  OccupancyWindow f0 = make_initial(p, InitialKind::Flat, 0, 10, 0.0, Boundary::LeftFinite, 1);
  CHECK(f0.particles() == 0);
  OccupancyWindow f1 = make_initial(p, InitialKind::Flat, 0, 10, 1.5, Boundary::LeftFinite, 1);
  CHECK(f1.particles() == 15);
  OccupancyWindow st = make_initial(p, InitialKind::Step, -5, 10, 1.0, Boundary::Truncated, 1);
  for (long y = -5; y < 0; ++y) CHECK(st.at(y) == 0);
  CHECK(make_initial(p, InitialKind::Custom, 0, 3, 0.0, Boundary::LeftFinite, 1, {1, 2, 0}).values ==
        std::vector<int>{1, 2, 0});
  CHECK_THROWS_AS(make_initial(p, InitialKind::Custom, 0, 3, 0.0, Boundary::LeftFinite, 1, {1, 3, 0}),
                  ParameterError);

  // product data: chi-square against the stationary pmf
  StationaryDist pi = stationary_dist(p, 1.0);
  OccupancyWindow big = make_initial(p, InitialKind::ProductPiRho, 0, 1000000, 1.0, Boundary::Truncated, 6);
  std::vector<double> c(3, 0.0);
  for (int v : big.values) c[size_t(v)] += 1.0;
  double chi2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    double e = pi.pmf[size_t(i)] * 1e6;
    chi2 += (c[size_t(i)] - e) * (c[size_t(i)] - e) / e;
  }
  CHECK(chi2 < 13.8);  // 0.1% level, 2 dof
}

TEST_CASE("stationary flux law by sampling") {
  ModelParams p = ModelParams::make_scaled(2, 1, 0.8, 1.0, 0.04);
  StationaryDist pi = stationary_dist(p, 1.0);
  const long n = 200000;
  long k = 0;
  for (long r = 0; r < n; ++r) {
    std::uint64_t s = derive_seed(31, std::uint64_t(r));
    OccupancyWindow w = make_initial(p, InitialKind::ProductPiRho, 0, 3, 1.0, Boundary::StationarySource, s);
    k += step_unfused(p, w, 0, Environment{s}).flux[2];
  }
  double m = flux_mean(p, pi.chi, 0);
  CHECK(m == doctest::Approx(p.alpha * pi.chi / (1.0 + p.alpha * pi.chi)));
  CHECK(std::fabs(double(k) / n - m) < 4.0 * std::sqrt(m * (1 - m) / n));
}
