#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "fpot/verify.hpp"
#include "oracles.hpp"

using namespace fpot;

namespace {

GeneratorFunction fn(const std::string& src, double lo, double hi) {
  return GeneratorFunction::from_expression(src, Interval(lo, hi));
}

}  // namespace

TEST_CASE("catalog loads") {
  const auto rows = shipped_table();
  REQUIRE(rows.size() == 13);
  CHECK(rows[0].f_source == "exp(x)");
  CHECK(rows[11].domain.hi() == doctest::Approx(std::numbers::pi / 2));
  CHECK(shipped_neither_catalog().size() == 4);
  CHECK(parse_bound("-inf") == -kInf);
  CHECK(parse_bound("pi/2") == doctest::Approx(std::numbers::pi / 2));
  CHECK_THROWS(parse_bound("x"));
}

TEST_CASE("table passes and is deterministic") {
  const auto a = reproduce_table();
  REQUIRE(a.size() == 13);
  for (const auto& r : a) {
    CAPTURE(r.row.label);
    CHECK(r.pass);
    CHECK(r.h_max_rel_error <= 1e-6);
  }
  const auto b = reproduce_table();
  CHECK(table_report_json(a, 64, {}).dump() == table_report_json(b, 64, {}).dump());
  CHECK(table_report_json(a, 64, {})["passed"] == 13);
  CHECK_FALSE(table_report_json(a, 64, {}).contains("timestamp"));
  CHECK(table_report_json(a, 64, {}, false).contains("timestamp"));
}

TEST_CASE("table h agrees with the hand-written formulas") {
  const auto rows = shipped_table();
  for (int i = 0; i < 13; ++i) {
    const auto f = fn(rows[i].f_source, rows[i].domain.lo(), rows[i].domain.hi());
    const auto [lo, hi] = rows[i].domain.central_range(0.9);
    for (double x : uniform_grid(lo, hi, 17)) {
      const double want = static_cast<double>(oracle::table_h(i + 1, x));
      CHECK(std::abs(compute_h(f, x) - want) <= 1e-8 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("a mislabeled row fails with diagnostics") {
  auto row = shipped_table()[0];
  row.expected_type = PotentialType::c;
  const auto r = check_table_row(row);
  CHECK_FALSE(r.pass);
  CHECK_FALSE(r.diagnostics.empty());
  row = shipped_table()[0];
  row.f_source = "ln(x)";  // evaluation failure on (-10, 10)
  const auto bad = check_table_row(row);
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(bad.report.has_value());
}

TEST_CASE("jensen search examples") {
  const auto e = jensen_search(fn("exp(x)", -5, 5), 10000, 1);
  CHECK_FALSE(e.convexity.has_value());
  CHECK(e.concavity.has_value());
  const auto s = jensen_search(fn("sinh(x)", -1, 1), 10000, 1);
  CHECK(s.convexity.has_value());
  CHECK(s.concavity.has_value());
  const auto lin = jensen_search(fn("x", -3, 3), 2000, 1);
  CHECK_FALSE(lin.convexity.has_value());
  CHECK_FALSE(lin.concavity.has_value());
}

TEST_CASE("records round trip and detect tampering") {
  const auto f = fn("tanh(x)", -1, 1);
  const auto s = jensen_search(f, 10000, 3);
  for (const auto* rec : {&s.convexity, &s.concavity}) {
    REQUIRE(rec->has_value());
    const auto j = (*rec)->to_json();
    const auto back = CounterexampleRecord::from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.reverify(f));
    CHECK(back.to_json() == j);
    auto tampered = j;
    tampered["lhs"] = j["lhs"].get<double>() + 1e-3;
    CHECK_FALSE(CounterexampleRecord::from_json(tampered).reverify(f));
    tampered = j;
    tampered["direction"] = j["direction"] == "violates-convexity" ? "violates-concavity"
                                                                    : "violates-convexity";
    CHECK_FALSE(CounterexampleRecord::from_json(tampered).reverify(f));
  }
  CHECK_THROWS(CounterexampleRecord::from_json(nlohmann::json::parse(R"({"theta":0.5})")));
}

TEST_CASE("search is bit-reproducible") {
  const auto f = fn("arsinh(x)", -1, 1);
  const auto a = jensen_search(f, 3000, 42);
  const auto b = jensen_search(f, 3000, 42);
  REQUIRE(a.convexity.has_value());
  CHECK(a.convexity->to_json().dump() == b.convexity->to_json().dump());
  CHECK(a.concavity->to_json().dump() == b.concavity->to_json().dump());
}

TEST_CASE("suite examples") {
  const auto e = consistency_suite(fn("exp(x)", -5, 5), 200, 7);
  CHECK(e.all_pass());
  CHECK(e.potential_type == PotentialType::a);
  REQUIRE(e.find("gibbs_normalization") != nullptr);
  CHECK(e.find("gibbs_normalization")->worst_residual <= 1e-12);

  const auto l = consistency_suite(fn("ln(x)", 0.01, 100), 200, 7);
  CHECK(l.all_pass());
  CHECK(l.potential_type == PotentialType::d);
  REQUIRE(l.find("second_derivative_sign") != nullptr);
  CHECK_FALSE(l.find("second_derivative_sign")->skipped);

  const auto s = consistency_suite(fn("sinh(x)", -1, 1), 2000, 7);
  CHECK(s.all_pass());
  CHECK(s.potential_type == PotentialType::neither);
  CHECK(s.find("classifier_soundness")->skipped);
  const auto* js = s.find("jensen_search");
  REQUIRE(js != nullptr);
  REQUIRE(js->witness.has_value());
  CHECK(js->witness->contains("violates_convexity"));
  CHECK(js->witness->contains("violates_concavity"));

  CHECK(e.to_json().dump() == consistency_suite(fn("exp(x)", -5, 5), 200, 7).to_json().dump());
  CHECK(e.to_json(false).contains("timestamp"));
}
