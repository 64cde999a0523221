#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <nlohmann/json.hpp>

#include "fpot/error.hpp"
#include "fpot/means.hpp"
#include "fpot/numerics.hpp"
#include "fpot/random.hpp"
#include "fpot/verify.hpp"
#include "oracles.hpp"

using namespace fpot;

namespace {

GeneratorFunction fn(const char* src, double lo, double hi) {
  return GeneratorFunction::from_expression(src, Interval(lo, hi));
}

WeightedDistribution two(double x0, double p0, double x1, double p1) {
  return WeightedDistribution({{x0, p0}, {x1, p1}});
}

std::vector<oracle::Atom> as_oracle(const WeightedDistribution& d) {
  std::vector<oracle::Atom> out;
  for (auto a : d.atoms()) out.push_back({a.x, a.p});
  return out;
}

bool rel_close(double got, double want, double tol) {
  return std::abs(got - want) <= tol * std::max(1.0, std::abs(want));
}

}  // namespace

TEST_CASE("eval_potential examples") {
  CHECK(eval_potential(fn("x", -kInf, kInf), two(2, 0.5, 4, 0.5)) ==
        doctest::Approx(3.0).epsilon(1e-14));
  CHECK(eval_potential(fn("ln(x)", 0, kInf), two(1, 0.5, 4, 0.5)) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(eval_potential(fn("exp(x)", -kInf, kInf), two(0, 0.5, std::log(3.0), 0.5)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("power means and log-sum-exp match closed forms") {
  Rng rng(3);
  struct Case {
    const char* src;
    double r;
  };
  const Case cases[] = {{"x^2", 2},      {"x^3", 3},   {"x^0.5", 0.5},
                        {"x^(-1)", -1}, {"ln(x)", 0}, {"x^(-2)", -2}};
  for (const auto& c : cases) {
    CAPTURE(c.src);
    const auto f = fn(c.src, 0, kInf);
    for (int k = 0; k < 50; ++k) {
      const auto d = random_distribution(rng, 0.05, 20, 1, 8);
      const double want = static_cast<double>(oracle::power_mean(as_oracle(d), c.r));
      CHECK(rel_close(eval_potential(f, d), want, 1e-10));
    }
  }
  const auto e = fn("exp(x)", -kInf, kInf);
  for (int k = 0; k < 50; ++k) {
    const auto d = random_distribution(rng, -20, 20, 1, 8);
    const double want = static_cast<double>(oracle::log_sum_exp(as_oracle(d), 1));
    CHECK(rel_close(eval_potential(e, d), want, 1e-10));
    CHECK(rel_close(cgf(d, 1.0), want, 1e-12));
    const double t = rng.uniform(-3, 3);
    CHECK(rel_close(cgf(d, t), static_cast<double>(oracle::log_sum_exp(as_oracle(d), t)), 1e-12));
  }
}

TEST_CASE("distribution validation") {
  CHECK_THROWS_AS(WeightedDistribution({}), InputError);
  CHECK_THROWS_AS(two(1, 0.5, 2, 0.6), InputError);
  CHECK_THROWS_AS(two(1, -0.5, 2, 1.5), InputError);
  CHECK_THROWS_AS(two(std::nan(""), 0.5, 2, 0.5), InputError);
  CHECK_NOTHROW(two(1, 0.5, 2, 0.5 + 1e-13));
  CHECK_THROWS_AS(eval_potential(fn("ln(x)", 0, kInf), two(-1, 0.5, 2, 0.5)), DomainError);
}

TEST_CASE("inline and json forms") {
  const auto d = WeightedDistribution::parse_inline("1:0.25, 4:0.75");
  REQUIRE(d.size() == 2);
  CHECK(d.atoms()[1].x == 4.0);
  CHECK(d.atoms()[1].p == 0.75);
  const auto back = WeightedDistribution::from_json(d.to_json());
  CHECK(back.to_json() == d.to_json());
  CHECK(d.to_json()[0]["x"] == 1.0);
  CHECK_THROWS_AS(WeightedDistribution::parse_inline("1;0.5"), InputError);
  CHECK_THROWS_AS(WeightedDistribution::from_json(nlohmann::json::parse(R"([{"x":1}])")),
                  InputError);
  CHECK(WeightedDistribution::parse_inline("2:1").is_nondegenerate() == false);
  CHECK(d.is_nondegenerate());
}

TEST_CASE("derivative density") {
  for (double r : derivative_density(fn("x", -kInf, kInf), two(-3, 0.2, 8, 0.8))) {
    CHECK(r == doctest::Approx(1.0));
  }
  const auto d = two(0, 0.5, std::log(3.0), 0.5);
  const auto rho = derivative_density(fn("exp(x)", -kInf, kInf), d);
  CHECK(rho[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rho[1] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(std::abs(0.5 * rho[0] + 0.5 * rho[1] - 1.0) <= 1e-12);
}

TEST_CASE("directional derivative examples") {
  const auto lin = fn("x", -kInf, kInf);
  const std::vector<double> psi{2.0, -1.0};
  const auto dl = directional_derivatives(lin, two(1, 0.3, 5, 0.7), psi);
  CHECK(dl.first == doctest::Approx(0.3 * 2 - 0.7));
  CHECK(std::abs(dl.second) <= 1e-12);

  const std::vector<double> e1{1.0, 0.0};
  const auto de = directional_derivatives(fn("exp(x)", -kInf, kInf), two(1.5, 0.5, 1.5, 0.5), e1);
  CHECK(de.first == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(de.second == doctest::Approx(0.25).epsilon(1e-12));

  const auto dn = directional_derivatives(fn("ln(x)", 0, kInf), two(1, 0.5, 2, 0.5), e1);
  CHECK(dn.second == doctest::Approx(-std::sqrt(2.0) / 4).epsilon(1e-10));
  CHECK_THROWS_AS(directional_derivatives(lin, two(1, 0.5, 2, 0.5), std::vector<double>{1.0}),
                  InputError);
}

TEST_CASE("directional derivatives agree with finite differences of the potential") {
  Rng rng(21);
  const auto f = fn("x^3", 0, kInf);
  for (int k = 0; k < 100; ++k) {
    const auto d = random_distribution(rng, 0.5, 5, 2, 5);
    std::vector<double> psi;
    for (std::size_t i = 0; i < d.size(); ++i) psi.push_back(rng.uniform(-1, 1));
    const ScalarFn path = [&](double t) { return eval_potential(f, d.shifted(psi, t)); };
    const auto dd = directional_derivatives(f, d, psi);
    CHECK(std::abs(differentiate_fd(path, 0.0, 1, 1e-4) - dd.first) <= 1e-6 * std::max(1.0, std::abs(dd.first)));
    CHECK(std::abs(differentiate_fd(path, 0.0, 2, 1e-3) - dd.second) <= 1e-4 * std::max(1.0, std::abs(dd.second)));
    // the cube mean is convex in the atoms, so second >= 0
    CHECK(dd.second >= -1e-12);
  }
}

TEST_CASE("internality, affine invariance and monotonicity") {
  Rng rng(5);
  const auto f = fn("cosh(x)", 0, 5);
  for (int k = 0; k < 200; ++k) {
    const auto d = random_distribution(rng, 0.1, 4.9, 1, 6);
    const double l = eval_potential(f, d);
    CHECK(l >= d.min_value() - 1e-9);
    CHECK(l <= d.max_value() + 1e-9);
    const double A = rng.uniform(-5, 5), B = rng.uniform(-10, 10);
    if (A != 0.0) CHECK(std::abs(eval_potential(f.affine(A, B), d) - l) <= 1e-8);
    std::vector<double> up;
    for (auto a : d.atoms()) up.push_back(std::min(4.95, a.x + rng.uniform(0, 0.5)));
    CHECK(eval_potential(f, d.with_values(up)) >= l - 1e-9);
  }
}

TEST_CASE("cgf") {
  Rng rng(8);
  const auto d = random_distribution(rng, -3, 3, 2, 6);
  CHECK(cgf(d, 0.0) == 0.0);
  CHECK(cgf(WeightedDistribution({{2.5, 1.0}}), 3.0) == doctest::Approx(7.5));
  CHECK(cgf(two(0, 0.5, std::log(3.0), 0.5), 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  // large t must not overflow
  CHECK(std::isfinite(cgf(d, 800.0)));
  for (int k = 0; k < 100; ++k) {
    const double t = rng.uniform(-5, 5), s = rng.uniform(0.01, 1);
    CHECK(cgf(d, t + s) - 2 * cgf(d, t) + cgf(d, t - s) >= -1e-9);
  }
}
