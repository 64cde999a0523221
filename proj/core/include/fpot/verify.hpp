#pragma once

// Golden table reproduction, Jensen counterexample search and the cross-module
// consistency suite.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fpot/criteria.hpp"
#include "fpot/function.hpp"
#include "fpot/generator.hpp"
#include "fpot/means.hpp"
#include "fpot/random.hpp"

namespace fpot {

/// Raw text of the shipped catalog (data/table_catalog.json), compiled in.
std::string_view embedded_table_catalog();

/// Accepts a number, "inf", "-inf", "+inf" or a constant expression ("pi/2").
double parse_bound(std::string_view text);

struct TableRow {
  std::string label;
  std::string f_source;
  Interval domain = Interval::real_line();
  PotentialType expected_type = PotentialType::inconclusive;
  std::string h_source;
  Sign expected_h_sign = Sign::positive;
  /// concave for positive h, convex for negative h.
  CurvatureTag expected_h_curvature = CurvatureTag::concave;
  std::string expected_potential;
};

struct CatalogEntry {
  std::string label;
  std::string f_source;
  Interval domain = Interval::real_line();
};

std::vector<TableRow> load_table_rows(const nlohmann::json& catalog);
std::vector<TableRow> shipped_table();
/// Generators whose potentials are neither convex nor concave.
std::vector<CatalogEntry> shipped_neither_catalog();

struct RowResult {
  TableRow row;
  std::optional<ClassificationReport> report;
  double h_max_rel_error = kInf;
  bool pass = false;
  std::vector<std::string> diagnostics;

  nlohmann::json to_json() const;
};

/// Classifies every row and compares type, h, h shape and verdict. Row
/// failures are recorded in the result, never thrown.
RowResult check_table_row(const TableRow& row, std::size_t grid_n = 64, const Tolerance& tol = {});
std::vector<RowResult> reproduce_table(std::size_t grid_n = 64, const Tolerance& tol = {});

enum class ViolationDirection { violates_convexity, violates_concavity };

const char* to_string(ViolationDirection d) noexcept;

/// lhs = lambda(theta phi + (1 - theta) chi) against
/// rhs = theta lambda(phi) + (1 - theta) lambda(chi), where the mixture is
/// taken atomwise over the shared probabilities.
struct CounterexampleRecord {
  WeightedDistribution dist_a;
  WeightedDistribution dist_b;
  double theta = 0.5;
  double lhs = 0.0;
  double rhs = 0.0;
  ViolationDirection direction = ViolationDirection::violates_convexity;

  /// Signed amount by which the claimed inequality is violated (positive).
  double margin() const noexcept {
    return direction == ViolationDirection::violates_convexity ? lhs - rhs : rhs - lhs;
  }

  nlohmann::json to_json() const;
  static CounterexampleRecord from_json(const nlohmann::json& j);

  /// Recomputes both sides: they must match the stored values to 1e-10 and
  /// the violation must exceed 10 abs_tol.
  bool reverify(const GeneratorFunction& f, const Tolerance& tol = {}) const;
};

struct JensenSearchResult {
  std::optional<CounterexampleRecord> convexity;
  std::optional<CounterexampleRecord> concavity;
  std::size_t trials = 0;
};

/// Strongest violation per direction over random pairs of two-atom
/// distributions (p in [0.1, 0.9], values in the central 80% of the working
/// range). Deterministic for a fixed seed.
JensenSearchResult jensen_search(const GeneratorFunction& f, std::size_t trials,
                                 std::uint64_t seed, const Tolerance& tol = {});

struct PropertyResult {
  std::string name;
  bool pass = true;
  bool skipped = false;
  double worst_residual = 0.0;
  std::optional<nlohmann::json> witness;
  std::string note;

  nlohmann::json to_json() const;
};

struct SuiteReport {
  std::string suite;
  std::string function_label;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  Tolerance tolerance;
  PotentialType potential_type = PotentialType::inconclusive;
  std::vector<PropertyResult> properties;

  bool all_pass() const;
  const PropertyResult* find(std::string_view name) const;
  nlohmann::json to_json(bool deterministic = true) const;
};

/// Runs every documented invariant of the means and criteria modules against f.
/// Failures and errors are recorded per property.
SuiteReport consistency_suite(const GeneratorFunction& f, std::size_t trials, std::uint64_t seed,
                              const Tolerance& tol = {}, std::size_t grid_n = 64);

/// Random n-atom distribution with values in [lo, hi] and probabilities
/// bounded away from zero.
WeightedDistribution random_distribution(Rng& rng, double lo, double hi,
                                         std::size_t min_atoms, std::size_t max_atoms);

nlohmann::json table_report_json(const std::vector<RowResult>& rows, std::size_t grid_n,
                                  const Tolerance& tol, bool deterministic = true);

/// UTC ISO-8601 timestamp used in non-deterministic reports.
std::string utc_timestamp();

}  // namespace fpot
