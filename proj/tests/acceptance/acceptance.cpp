// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fpot/criteria.hpp"
#include "fpot/generator.hpp"
#include "fpot/verify.hpp"

using namespace fpot;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

GeneratorFunction row_function(const TableRow& row) {
  return GeneratorFunction::from_expression(row.f_source, row.domain);
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

void note(Outcome& o, bool ok, const std::string& what) {
  if (!ok) {
    o.pass = false;
    o.detail += (o.detail.empty() ? "" : "; ") + what;
  }
}

Outcome table_reproduction() {
  Outcome o;
  double worst_h = 0.0;
  int passed = 0;
  for (const auto& r : reproduce_table(64)) {
    worst_h = std::max(worst_h, r.h_max_rel_error);
    note(o, r.pass && r.h_max_rel_error <= 1e-6, r.row.label + " failed");
    passed += r.pass ? 1 : 0;
  }
  if (o.pass) o.detail = std::to_string(passed) + "/13 rows, max h rel error " + sci(worst_h);
  return o;
}

Outcome neither_catalog() {
  Outcome o;
  double smallest = kInf;
  for (const auto& e : shipped_neither_catalog()) {
    const auto f = GeneratorFunction::from_expression(e.f_source, e.domain);
    const auto found = jensen_search(f, 10000, 2024);
    note(o, found.convexity.has_value(), e.label + ": no convexity violation");
    note(o, found.concavity.has_value(), e.label + ": no concavity violation");
    for (const auto* rec : {&found.convexity, &found.concavity}) {
      if (!*rec) continue;
      const auto stored = nlohmann::json::parse((*rec)->to_json().dump());
      note(o, CounterexampleRecord::from_json(stored).reverify(f),
           e.label + ": witness does not re-verify");
      smallest = std::min(smallest, (*rec)->margin());
    }
  }
  if (o.pass) o.detail = "4 generators, both directions, smallest margin " + sci(smallest);
  return o;
}

Outcome derivative_identity() {
  Outcome o;
  double worst = 0.0;
  for (const auto& row : shipped_table()) {
    const double r = derivative_identity_residual(row_function(row), 64);
    worst = std::max(worst, r);
    note(o, r <= 1e-4, row.label + " residual " + sci(r));
  }
  if (o.pass) o.detail = "13 rows, max residual " + sci(worst);
  return o;
}

Outcome duality() {
  Outcome o;
  double worst = 0.0;
  struct Pair {
    const char* f;
    Interval domain;
    PotentialType tf, tg;
  };
  const Pair pairs[] = {{"exp(x)", Interval(-10, 10), PotentialType::a, PotentialType::d},
                        {"x^2", Interval(0.01, 100), PotentialType::a, PotentialType::d},
                        {"1/x", Interval(0.01, 100), PotentialType::c, PotentialType::c}};
  for (const auto& p : pairs) {
    const auto d = dual_classify(GeneratorFunction::from_expression(p.f, p.domain));
    worst = std::max(worst, d.duality_residual);
    note(o, d.type_f == p.tf && d.type_g == p.tg && d.pairing_ok,
         std::string(p.f) + " pairs as (" + to_string(d.type_f) + "," + to_string(d.type_g) + ")");
    note(o, d.duality_residual <= 1e-5, std::string(p.f) + " residual " + sci(d.duality_residual));
  }
  for (const auto& row : shipped_table()) {
    const auto d = dual_classify(row_function(row));
    worst = std::max(worst, d.duality_residual);
    note(o, d.duality_residual <= 1e-5, row.label + " residual " + sci(d.duality_residual));
    note(o, d.pairing_ok, row.label + " pairing");
  }
  if (o.pass) o.detail = "3 pairs + 13 rows, max residual " + sci(worst);
  return o;
}

struct HCase {
  const char* h;
  Interval domain;
  bool positive_concave;  // otherwise negative convex
};

const std::vector<HCase>& h_cases() {
  static const std::vector<HCase> cases{
      {"1", Interval(-2, 2), true},
      {"-x", Interval(0.1, 10), false},
      {"x", Interval(0.1, 10), true},
      {"tanh(x)", Interval(0.1, 3), true},
      {"-sin(2*x)/(3+cos(2*x))", Interval(0.05, 1.52), false},
  };
  return cases;
}

Outcome generator_roundtrip() {
  Outcome o;
  double worst = 0.0;
  for (const auto& c : h_cases()) {
    const auto h = HSpec::from_expression(c.h, c.domain);
    for (double A : {1.0, -1.0}) {
      const auto g = generate_f(h, {std::nullopt, A, 0.0});
      const double err = g.roundtrip_error(64);
      worst = std::max(worst, err);
      note(o, err <= 1e-5, std::string("h=") + c.h + " round trip " + sci(err));
      const auto type = classify_potential(g.function()).potential_type;
      const bool ok = c.positive_concave ? is_convex_type(type) : is_concave_type(type);
      note(o, ok, std::string("h=") + c.h + " generated type " + to_string(type));
    }
  }
  if (o.pass) o.detail = "5 h, both signs of A, max round-trip error " + sci(worst);
  return o;
}

std::vector<std::pair<std::string, GeneratorFunction>> all_generators() {
  std::vector<std::pair<std::string, GeneratorFunction>> out;
  for (const auto& row : shipped_table()) out.emplace_back(row.label, row_function(row));
  for (const auto& c : h_cases()) {
    out.emplace_back(std::string("generated h=") + c.h,
                     generate_f(HSpec::from_expression(c.h, c.domain)).function());
  }
  return out;
}

Outcome derivative_consistency() {
  Outcome o;
  double worst1 = 0.0, worst2 = 0.0, gibbs = 0.0;
  for (const auto& [label, f] : all_generators()) {
    const auto rep = consistency_suite(f, 500, 11);
    for (const char* name : {"derivative_first_fd", "derivative_second_fd", "density_identity",
                             "gibbs_normalization"}) {
      const auto* p = rep.find(name);
      note(o, p && p->pass, label + " " + name + (p ? " " + sci(p->worst_residual) : ""));
    }
    if (const auto* p = rep.find("derivative_first_fd")) worst1 = std::max(worst1, p->worst_residual);
    if (const auto* p = rep.find("derivative_second_fd")) worst2 = std::max(worst2, p->worst_residual);
    if (const auto* p = rep.find("gibbs_normalization")) gibbs = std::max(gibbs, p->worst_residual);
  }
  if (o.pass) {
    o.detail = "18 generators x 500 cases, first " + sci(worst1) + ", second " + sci(worst2) +
               ", Gibbs " + sci(gibbs);
  }
  return o;
}

Outcome functional_invariants() {
  Outcome o;
  double worst = 0.0;
  for (const auto& row : shipped_table()) {
    const auto rep = consistency_suite(row_function(row), 1000, 13);
    for (const char* name : {"internality", "affine_invariance", "monotonicity"}) {
      const auto* p = rep.find(name);
      note(o, p && p->pass, row.label + " " + name);
      if (p) worst = std::max(worst, p->worst_residual);
    }
  }
  if (o.pass) o.detail = "13 rows x 1000 trials, worst residual " + sci(worst);
  return o;
}

Outcome h_inequality() {
  Outcome o;
  double worst = kInf;
  int convex_rows = 0;
  for (const auto& row : shipped_table()) {
    const auto f = row_function(row);
    if (!is_convex_type(classify_potential(f).potential_type)) continue;
    ++convex_rows;
    const auto r = h_superadditivity(f, 1000, 17);
    worst = std::min(worst, r.worst);
    note(o, r.worst >= -1e-7, row.label + " worst " + sci(r.worst));
  }
  note(o, convex_rows == 4, "expected 4 convex rows, found " + std::to_string(convex_rows));
  if (o.pass) o.detail = "4 convex rows x 1000 trials, worst slack " + sci(worst);
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"table reproduction", table_reproduction},
      {"non-classifiable catalog", neither_catalog},
      {"h/H derivative identity", derivative_identity},
      {"inverse-function duality", duality},
      {"generator round trip", generator_roundtrip},
      {"derivative consistency", derivative_consistency},
      {"functional invariants", functional_invariants},
      {"H inequality", h_inequality},
  };
  int failures = 0;
  int index = 1;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", index, name,
                o.detail.c_str(), secs);
    failures += o.pass ? 0 : 1;
    ++index;
  }
  return failures == 0 ? 0 : 1;
}
