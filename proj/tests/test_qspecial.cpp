#include <cmath>

#include "doctest.h"
#include "shs6v/qspecial.hpp"

using namespace shs6v;

TEST_CASE("q_pochhammer basics") {
  CHECK(q_pochhammer(0.7, 2.0, 0) == doctest::Approx(1.0));
  CHECK(q_pochhammer(2.0, 3.0, 2) == doctest::Approx(5.0));  // (1-2)(1-6)
  CHECK(q_pochhammer(0.5, 2.0, 3) == doctest::Approx(0.0));
}

TEST_CASE("q_pochhammer reciprocity for negative order") {
  for (double a : {0.3, 1.7, -2.5})
    for (int n = 1; n <= 4; ++n) {
      double q = 1.4;
      double lhs = q_pochhammer(a, q, -n);
      double rhs = 1.0 / q_pochhammer(a * std::pow(q, -n), q, n);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
    }
}

TEST_CASE("q_pochhammer vanishing reciprocal throws") {
  CHECK_THROWS_AS(q_pochhammer(2.0, 2.0, -1), DivisionByZero);
}

TEST_CASE("reg_4phi3 at n = 0 is one") {
  CHECK(reg_4phi3(0, {0.1, 0.2, 0.3}, {0.4, 0.5, 0.6}, 1.5, 0.7) == doctest::Approx(1.0));
  CHECK_THROWS_AS(reg_4phi3(-1, {0.1, 0.2, 0.3}, {0.4, 0.5, 0.6}, 1.5, 0.7), ParameterError);
}

TEST_CASE("reg_4phi3 matches the naive sum") {
  const double q = 1.3, z = 0.45;
  const std::array<double, 3> a{0.2, -0.4, 1.1}, b{0.6, 0.35, -0.8};
  for (int n = 0; n <= 5; ++n) {
    double s = 0.0;
    for (int k = 0; k <= n; ++k) {
      double t = std::pow(z, k) * q_pochhammer(std::pow(q, -n), q, k) / q_pochhammer(q, q, k);
      for (int i = 0; i < 3; ++i) t *= q_pochhammer(a[size_t(i)], q, k) * q_pochhammer(b[size_t(i)] * std::pow(q, k), q, n - k);
      s += t;
    }
    CHECK(reg_4phi3(n, a, b, q, z) == doctest::Approx(s).epsilon(1e-12));
  }
}

TEST_CASE("double-double evaluation agrees with double") {
  const double q = 1.3, z = 0.45;
  std::array<dd, 3> a{dd(0.2), dd(-0.4), dd(1.1)}, b{dd(0.6), dd(0.35), dd(-0.8)};
  dd v = reg_4phi3(4, a, b, dd(q), dd(z));
  CHECK(v.hi == doctest::Approx(reg_4phi3(4, {0.2, -0.4, 1.1}, {0.6, 0.35, -0.8}, q, z)).epsilon(1e-13));
}

TEST_CASE("symmetric q-integers") {
  CHECK(q_bracket(2, 2.0) == doctest::Approx(2.5));
  CHECK(q_bracket(0, 2.0) == 0.0);
  CHECK(q_bracket(3, 1.0) == 3.0);
  CHECK(q_factorial(3, 2.0) == doctest::Approx(1.0 * 2.5 * q_bracket(3, 2.0)));
  CHECK(q_binomial(4, 2, 1.7) == doctest::Approx(q_factorial(4, 1.7) / (q_factorial(2, 1.7) * q_factorial(2, 1.7))));
}

TEST_CASE("finite q-binomial identity") {
  for (int I = 1; I <= 5; ++I)
    for (double q : {1.1, 1.5, 2.0})
      for (double z : {-0.7, 0.3, 1.9})
        CHECK(q_binomial_sum(I, q, z) == doctest::Approx(q_binomial_product(I, q, z)).epsilon(1e-12));
}

TEST_CASE("parameter construction") {
  ModelParams p = ModelParams::make(2.0, 2, 1, -0.2);
  CHECK(p.nu == doctest::Approx(0.25));
  CHECK(p.condition1());
  CHECK_THROWS_AS(ModelParams::make(2.0, 2, 1, -2.0).require_condition1(), ParameterError);
  CHECK_THROWS_AS(ModelParams::make(0.5, 2, 1, -0.2).require_condition1(), ParameterError);
  CHECK_THROWS_AS(p.require_scaled(), ParameterError);

  ModelParams s = ModelParams::make_scaled(2, 2, 0.8, 1.0, 0.01);
  CHECK(s.q == doctest::Approx(std::exp(0.1)));
  CHECK((1.0 + s.alpha * s.q) / (1.0 + s.alpha) == doctest::Approx(0.8));
  CHECK(s.alpha_t(1) == doctest::Approx(s.alpha * s.q));
  CHECK(s.alpha_t(2) == doctest::Approx(s.alpha));
  CHECK(s.condition1());
}
