#include <doctest.h>

#include <cmath>
#include <vector>

#include "fpot/error.hpp"
#include "fpot/interpolation.hpp"
#include "fpot/random.hpp"

using namespace fpot;

TEST_CASE("cubic data is reproduced exactly") {
  const auto p = [](double x) { return 0.5 * x * x * x + x + 2; };
  const auto dp = [](double x) { return 1.5 * x * x + 1; };
  std::vector<double> xs{-2, -0.5, 0, 1, 3}, ys, ms;
  for (double x : xs) {
    ys.push_back(p(x));
    ms.push_back(dp(x));
  }
  const MonotoneCubic c(xs, ys, ms);
  for (double x = -2; x <= 3; x += 0.137) {
    CHECK(c(x) == doctest::Approx(p(x)).epsilon(1e-13));
    CHECK(c.derivative(x) == doctest::Approx(dp(x)).epsilon(1e-12));
  }
  CHECK(c.lo() == -2);
  CHECK(c.hi() == 3);
  CHECK(c.size() == 5);
}

TEST_CASE("monotone data gives a monotone interpolant") {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> xs{0}, ys{0}, ms;
    for (int i = 1; i < 12; ++i) {
      xs.push_back(xs.back() + rng.uniform(0.01, 2.0));
      ys.push_back(ys.back() + (rng.uniform() < 0.2 ? 0.0 : rng.uniform(0.0, 5.0)));
    }
    // Deliberately bad slopes: the filter has to repair them.
    for (std::size_t i = 0; i < xs.size(); ++i) ms.push_back(rng.uniform(-3.0, 20.0));
    const MonotoneCubic c(xs, ys, ms);
    double prev = c(xs.front());
    for (double x = xs.front(); x <= xs.back(); x += 0.003) {
      const double v = c(x);
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("hermite segment helpers") {
  CHECK(MonotoneCubic::hermite(0, 1, 0, 1, 2, 0, 0.5) == doctest::Approx(1.5));
  CHECK(MonotoneCubic::hermite_slope(0, 0, 1, 1, 1, 1, 0.3) == doctest::Approx(1.0));
}

TEST_CASE("invalid tables") {
  CHECK_THROWS_AS(MonotoneCubic({0}, {0}, {0}), InputError);
  CHECK_THROWS_AS(MonotoneCubic({0, 0}, {0, 1}, {0, 0}), InputError);
  CHECK_THROWS_AS(MonotoneCubic({0, 1}, {0, 1}, {0}), InputError);
}

TEST_CASE("quintic Hermite reproduces quintic polynomials") {
  const auto p = [](double x) { return Jet2{((((0.3 * x - 1) * x + 2) * x - 0.5) * x + 4) * x - 7,
                                            (((1.5 * x - 4) * x + 6) * x - 1) * x + 4,
                                            ((6 * x - 12) * x + 12) * x - 1}; };
  std::vector<double> xs{-1.0, -0.2, 0.7, 2.0}, ys, ms, cs;
  for (double x : xs) {
    ys.push_back(p(x).value);
    ms.push_back(p(x).d1);
    cs.push_back(p(x).d2);
  }
  const QuinticHermite q(xs, ys, ms, cs);
  for (double x = -1.0; x <= 2.0; x += 0.0625) {
    const Jet2 got = q.jet(x), want = p(x);
    CHECK(got.value == doctest::Approx(want.value).epsilon(1e-12));
    CHECK(got.d1 == doctest::Approx(want.d1).epsilon(1e-11));
    CHECK(got.d2 == doctest::Approx(want.d2).epsilon(1e-10));
  }
  CHECK_THROWS_AS(QuinticHermite({0.0, 1.0}, {0.0, 1.0}, {1.0, 1.0}, {0.0}), InputError);
  CHECK_THROWS_AS(QuinticHermite({1.0, 1.0}, {0.0, 1.0}, {1.0, 1.0}, {0.0, 0.0}), InputError);
}
