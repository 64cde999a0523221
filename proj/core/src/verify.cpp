#include "fpot/verify.hpp"

#include <algorithm>
#include <cctype>
#include <ctime>
#include <functional>
#include <sstream>

#include "fpot/error.hpp"
#include "fpot/version.hpp"

namespace fpot {

namespace {

constexpr double kRecordMatch = 1e-10;
// Relative slack below which a Jensen defect is treated as rounding noise.
constexpr double kJensenNoise = 1e-9;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

nlohmann::json tolerance_json(const Tolerance& tol) {
  return {{"abs_tol", tol.abs_tol},
          {"rel_tol", tol.rel_tol},
          {"decision_band", tol.decision_band}};
}

nlohmann::json bound_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

PotentialType type_from_string(const std::string& s) {
  for (auto t : {PotentialType::a, PotentialType::b, PotentialType::c, PotentialType::d,
                 PotentialType::linear, PotentialType::neither}) {
    if (s == to_string(t)) return t;
  }
  throw InputError("unknown potential type '" + s + "' in catalog");
}

Interval interval_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw InputError("catalog domain must be a two-element array");
  }
  auto bound = [](const nlohmann::json& b) {
    return b.is_number() ? b.get<double>() : parse_bound(b.get<std::string>());
  };
  return Interval(bound(j[0]), bound(j[1]));
}

nlohmann::json parse_catalog() {
  try {
    return nlohmann::json::parse(embedded_table_catalog());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("embedded catalog is malformed: ") + e.what());
  }
}

}  // namespace

double parse_bound(std::string_view text) {
  std::string t = lower(text);
  t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); }),
          t.end());
  if (t == "inf" || t == "+inf" || t == "infinity" || t == "+infinity") return kInf;
  if (t == "-inf" || t == "-infinity") return -kInf;
  const Expr e = Expr::parse(text);
  if (!e.is_constant()) {
    throw InputError("interval bound '" + std::string(text) + "' must be a constant");
  }
  const double v = e.eval(0.0);
  if (!std::isfinite(v)) {
    throw InputError("interval bound '" + std::string(text) + "' is not finite");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Catalog

std::vector<TableRow> load_table_rows(const nlohmann::json& catalog) {
  std::vector<TableRow> rows;
  try {
    for (const auto& r : catalog.at("rows")) {
      TableRow row;
      row.label = r.at("label").get<std::string>();
      row.f_source = r.at("f").get<std::string>();
      row.domain = interval_from_json(r.at("domain"));
      row.expected_type = type_from_string(r.at("type").get<std::string>());
      row.h_source = r.at("h").get<std::string>();
      const auto shape = r.at("h_shape").get<std::string>();
      if (shape == "+concave") {
        row.expected_h_sign = Sign::positive;
        row.expected_h_curvature = CurvatureTag::concave;
      } else if (shape == "-convex") {
        row.expected_h_sign = Sign::negative;
        row.expected_h_curvature = CurvatureTag::convex;
      } else {
        throw InputError("h_shape must be '+concave' or '-convex', got '" + shape + "'");
      }
      row.expected_potential = r.at("potential").get<std::string>();
      rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed table catalog: ") + e.what());
  }
  return rows;
}

std::vector<TableRow> shipped_table() { return load_table_rows(parse_catalog()); }

std::vector<CatalogEntry> shipped_neither_catalog() {
  const auto catalog = parse_catalog();
  std::vector<CatalogEntry> out;
  for (const auto& r : catalog.at("neither")) {
    out.push_back({r.at("label").get<std::string>(), r.at("f").get<std::string>(),
                   interval_from_json(r.at("domain"))});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Table reproduction

nlohmann::json RowResult::to_json() const {
  nlohmann::json j{
      {"label", row.label},
      {"f", row.f_source},
      {"domain", {bound_json(row.domain.lo()), bound_json(row.domain.hi())}},
      {"expected",
       {{"type", to_string(row.expected_type)},
        {"h", row.h_source},
        {"h_sign", to_string(row.expected_h_sign)},
        {"h_curvature", to_string(row.expected_h_curvature)},
        {"potential", row.expected_potential}}},
      {"pass", pass},
      {"diagnostics", diagnostics},
  };
  j["h_max_rel_error"] = std::isfinite(h_max_rel_error) ? nlohmann::json(h_max_rel_error)
                                                        : nlohmann::json(nullptr);
  if (report) {
    j["observed"] = {{"type", to_string(report->potential_type)},
                     {"f_direction", to_string(report->f_direction)},
                     {"f_curvature", to_string(report->f_curvature.tag)},
                     {"h_sign", to_string(report->h_sign)},
                     {"h_curvature", to_string(report->h_curvature.tag)},
                     {"potential", report->potential_verdict()}};
  }
  return j;
}

RowResult check_table_row(const TableRow& row, std::size_t grid_n, const Tolerance& tol) {
  constexpr double kHTolerance = 1e-6;
  RowResult out;
  out.row = row;
  try {
    const auto f = GeneratorFunction::from_expression(row.f_source, row.domain);
    out.report = classify_potential(f, grid_n, tol);
    const auto& rep = *out.report;

    const Expr h = Expr::parse(row.h_source);
    double worst = 0.0;
    for (double x : rep.grid) {
      const double observed = compute_h(f, x, tol);
      const double expected = h.eval(x);
      worst = std::max(worst, std::abs(observed - expected) / std::abs(expected));
    }
    out.h_max_rel_error = worst;

    if (rep.potential_type != row.expected_type) {
      out.diagnostics.push_back(std::string("type ") + to_string(rep.potential_type) +
                                " != expected " + to_string(row.expected_type));
    }
    if (!(worst <= kHTolerance)) {
      std::ostringstream os;
      os << "h relative error " << worst << " exceeds " << kHTolerance;
      out.diagnostics.push_back(os.str());
    }
    const HSign want_sign =
        row.expected_h_sign == Sign::positive ? HSign::positive : HSign::negative;
    if (rep.h_sign != want_sign) {
      out.diagnostics.push_back(std::string("h sign ") + to_string(rep.h_sign) +
                                " != expected " + to_string(want_sign));
    }
    const bool shape_ok = row.expected_h_curvature == CurvatureTag::concave
                              ? rep.h_curvature.admits_concave()
                              : rep.h_curvature.admits_convex();
    if (!shape_ok) {
      out.diagnostics.push_back(std::string("h curvature ") + to_string(rep.h_curvature.tag) +
                                " is not " + to_string(row.expected_h_curvature));
    }
    if (rep.potential_verdict() != row.expected_potential) {
      out.diagnostics.push_back("potential " + rep.potential_verdict() + " != expected " +
                                row.expected_potential);
    }
  } catch (const std::exception& e) {
    out.diagnostics.push_back(e.what());
  }
  out.pass = out.diagnostics.empty();
  return out;
}

std::vector<RowResult> reproduce_table(std::size_t grid_n, const Tolerance& tol) {
  std::vector<RowResult> out;
  for (const auto& row : shipped_table()) {
    out.push_back(check_table_row(row, grid_n, tol));
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json table_report_json(const std::vector<RowResult>& rows, std::size_t grid_n,
                                 const Tolerance& tol, bool deterministic) {
  nlohmann::json j{{"suite", "table"},
                   {"tool", "fpot"},
                   {"version", kVersion},
                   {"grid_n", grid_n},
                   {"tolerances", tolerance_json(tol)}};
  auto arr = nlohmann::json::array();
  std::size_t passed = 0;
  for (const auto& r : rows) {
    arr.push_back(r.to_json());
    passed += r.pass ? 1 : 0;
  }
  j["rows"] = std::move(arr);
  j["passed"] = passed;
  j["total"] = rows.size();
  if (!deterministic) j["timestamp"] = utc_timestamp();
  return j;
}

// ---------------------------------------------------------------------------
// Jensen counterexamples

const char* to_string(ViolationDirection d) noexcept {
  return d == ViolationDirection::violates_convexity ? "violates-convexity"
                                                     : "violates-concavity";
}

nlohmann::json CounterexampleRecord::to_json() const {
  return {{"dist_a", dist_a.to_json()}, {"dist_b", dist_b.to_json()},
          {"theta", theta},             {"lhs", lhs},
          {"rhs", rhs},                 {"direction", to_string(direction)},
          {"margin", margin()}};
}

CounterexampleRecord CounterexampleRecord::from_json(const nlohmann::json& j) {
  try {
    const auto dir = j.at("direction").get<std::string>();
    ViolationDirection d;
    if (dir == to_string(ViolationDirection::violates_convexity)) {
      d = ViolationDirection::violates_convexity;
    } else if (dir == to_string(ViolationDirection::violates_concavity)) {
      d = ViolationDirection::violates_concavity;
    } else {
      throw InputError("unknown violation direction '" + dir + "'");
    }
    return {WeightedDistribution::from_json(j.at("dist_a")),
            WeightedDistribution::from_json(j.at("dist_b")),
            j.at("theta").get<double>(),
            j.at("lhs").get<double>(),
            j.at("rhs").get<double>(),
            d};
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed counterexample record: ") + e.what());
  }
}

namespace {

struct JensenSides {
  double lhs;
  double rhs;
};

JensenSides jensen_sides(const GeneratorFunction& f, const WeightedDistribution& a,
                         const WeightedDistribution& b, double theta) {
  std::vector<double> mixed;
  mixed.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    mixed.push_back(theta * a.atoms()[i].x + (1.0 - theta) * b.atoms()[i].x);
  }
  const double lhs = eval_potential(f, a.with_values(mixed));
  const double rhs = theta * eval_potential(f, a) + (1.0 - theta) * eval_potential(f, b);
  return {lhs, rhs};
}

double jensen_threshold(const Tolerance& tol, double lhs, double rhs) {
  return std::max(10.0 * tol.abs_tol, kJensenNoise * (1.0 + std::abs(lhs) + std::abs(rhs)));
}

}  // namespace

bool CounterexampleRecord::reverify(const GeneratorFunction& f, const Tolerance& tol) const {
  const auto s = jensen_sides(f, dist_a, dist_b, theta);
  if (std::abs(s.lhs - lhs) > kRecordMatch || std::abs(s.rhs - rhs) > kRecordMatch) {
    return false;
  }
  const double m = direction == ViolationDirection::violates_convexity ? s.lhs - s.rhs
                                                                       : s.rhs - s.lhs;
  return m > 10.0 * tol.abs_tol;
}

JensenSearchResult jensen_search(const GeneratorFunction& f, std::size_t trials,
                                 std::uint64_t seed, const Tolerance& tol) {
  const auto [lo, hi] = f.domain().central_range(0.8);
  Rng rng(seed);
  JensenSearchResult out;
  out.trials = trials;
  for (std::size_t k = 0; k < trials; ++k) {
    const double p = rng.uniform(0.1, 0.9);
    const WeightedDistribution a({{rng.uniform(lo, hi), p}, {rng.uniform(lo, hi), 1.0 - p}});
    const WeightedDistribution b({{rng.uniform(lo, hi), p}, {rng.uniform(lo, hi), 1.0 - p}});
    const double theta = rng.uniform(0.05, 0.95);
    const auto s = jensen_sides(f, a, b, theta);
    const double thr = jensen_threshold(tol, s.lhs, s.rhs);
    const double d = s.lhs - s.rhs;
    if (d > thr && (!out.convexity || d > out.convexity->margin())) {
      out.convexity = CounterexampleRecord{a, b, theta, s.lhs, s.rhs,
                                           ViolationDirection::violates_convexity};
    } else if (-d > thr && (!out.concavity || -d > out.concavity->margin())) {
      out.concavity = CounterexampleRecord{a, b, theta, s.lhs, s.rhs,
                                           ViolationDirection::violates_concavity};
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Consistency suite

WeightedDistribution random_distribution(Rng& rng, double lo, double hi, std::size_t min_atoms,
                                         std::size_t max_atoms) {
  const auto n = static_cast<std::size_t>(rng.integer(min_atoms, max_atoms));
  std::vector<Atom> atoms(n);
  double total = 0.0;
  for (auto& a : atoms) {
    a.x = rng.uniform(lo, hi);
    a.p = rng.uniform(0.05, 1.0);
    total += a.p;
  }
  for (auto& a : atoms) a.p /= total;
  return WeightedDistribution(std::move(atoms));
}

nlohmann::json PropertyResult::to_json() const {
  nlohmann::json j{{"name", name},
                   {"pass", pass},
                   {"skipped", skipped},
                   {"worst_residual", worst_residual}};
  if (witness) j["witness"] = *witness;
  if (!note.empty()) j["note"] = note;
  return j;
}

bool SuiteReport::all_pass() const {
  return std::all_of(properties.begin(), properties.end(),
                     [](const PropertyResult& p) { return p.pass; });
}

const PropertyResult* SuiteReport::find(std::string_view name) const {
  for (const auto& p : properties) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

nlohmann::json SuiteReport::to_json(bool deterministic) const {
  nlohmann::json props = nlohmann::json::array();
  for (const auto& p : properties) props.push_back(p.to_json());
  nlohmann::json j{{"suite", suite},
                   {"tool", "fpot"},
                   {"version", kVersion},
                   {"function", function_label},
                   {"seed", seed},
                   {"trials", trials},
                   {"tolerances", tolerance_json(tolerance)},
                   {"potential_type", to_string(potential_type)},
                   {"pass", all_pass()},
                   {"properties", std::move(props)}};
  if (!deterministic) j["timestamp"] = utc_timestamp();
  return j;
}

namespace {

nlohmann::json values_json(std::span<const double> v) { return std::vector<double>(v.begin(), v.end()); }

// Tracks the worst residual of a property and the witness that produced it.
class Tracker {
 public:
  Tracker(std::string name, double limit) : limit_(limit) { result_.name = std::move(name); }

  void observe(double residual, const std::function<nlohmann::json()>& witness) {
    if (residual > result_.worst_residual || !std::isfinite(residual)) {
      result_.worst_residual = residual;
      if (residual > limit_ || !std::isfinite(residual)) result_.witness = witness();
    }
  }

  PropertyResult finish() {
    result_.pass = result_.worst_residual <= limit_;
    return std::move(result_);
  }

 private:
  PropertyResult result_;
  double limit_ = 0.0;
};

PropertyResult skipped(std::string name, std::string note) {
  PropertyResult r;
  r.name = std::move(name);
  r.skipped = true;
  r.note = std::move(note);
  return r;
}

PropertyResult guarded(const std::string& name, const std::function<PropertyResult()>& body) {
  try {
    return body();
  } catch (const NotApplicableError& e) {
    return skipped(name, e.what());
  } catch (const std::exception& e) {
    PropertyResult r;
    r.name = name;
    r.pass = false;
    r.worst_residual = kInf;
    r.note = e.what();
    return r;
  }
}

PotentialType swapped_direction(PotentialType t) {
  switch (t) {
    case PotentialType::a: return PotentialType::b;
    case PotentialType::b: return PotentialType::a;
    case PotentialType::c: return PotentialType::d;
    case PotentialType::d: return PotentialType::c;
    default: return t;
  }
}

std::vector<double> random_psi(Rng& rng, std::size_t n) {
  std::vector<double> psi(n);
  for (auto& v : psi) v = rng.uniform(-1.0, 1.0);
  return psi;
}

}  // namespace

SuiteReport consistency_suite(const GeneratorFunction& f, std::size_t trials, std::uint64_t seed,
                              const Tolerance& tol, std::size_t grid_n) {
  tol.validate();
  SuiteReport report;
  report.suite = "consistency";
  report.function_label = f.label();
  report.seed = seed;
  report.trials = trials;
  report.tolerance = tol;

  const auto [lo, hi] = f.domain().central_range(0.8);
  auto lambda = [&f](const WeightedDistribution& d) { return eval_potential(f, d); };
  // Each property draws from its own stream so that adding one does not
  // perturb the others.
  std::uint64_t stream = 0;
  auto next_rng = [&] { return Rng(seed * 0x9E3779B97F4A7C15ULL + (++stream)); };

  std::optional<ClassificationReport> cls;
  try {
    cls = classify_potential(f, grid_n, tol);
    report.potential_type = cls->potential_type;
  } catch (const Error&) {
    report.potential_type = PotentialType::inconclusive;
  }
  const PotentialType type = report.potential_type;
  auto& props = report.properties;

  props.push_back(guarded("internality", [&] {
    Rng rng = next_rng();
    Tracker t("internality", 1e-9);
    for (std::size_t k = 0; k < trials; ++k) {
      const auto d = random_distribution(rng, lo, hi, 1, 6);
      const double l = lambda(d);
      t.observe(std::max({0.0, d.min_value() - l, l - d.max_value()}),
                [&] { return nlohmann::json{{"dist", d.to_json()}, {"lambda", l}}; });
    }
    return t.finish();
  }));

  props.push_back(guarded("affine_invariance", [&] {
    Rng rng = next_rng();
    Tracker t("affine_invariance", 1e-8);
    for (std::size_t k = 0; k < trials; ++k) {
      const double A = (rng.uniform() < 0.5 ? -1.0 : 1.0) * std::exp(rng.uniform(-2.0, 2.0));
      const double B = rng.uniform(-10.0, 10.0);
      const auto g = f.affine(A, B);
      const auto d = random_distribution(rng, lo, hi, 2, 6);
      const double l0 = lambda(d);
      const double l1 = eval_potential(g, d);
      t.observe(std::abs(l1 - l0), [&] {
        return nlohmann::json{{"A", A}, {"B", B}, {"dist", d.to_json()}, {"lambda", l0},
                              {"lambda_affine", l1}};
      });
    }
    return t.finish();
  }));

  props.push_back(guarded("monotonicity", [&] {
    Rng rng = next_rng();
    Tracker t("monotonicity", 1e-9);
    for (std::size_t k = 0; k < trials; ++k) {
      const auto d = random_distribution(rng, lo, hi, 2, 6);
      std::vector<double> up;
      for (const Atom& a : d.atoms()) up.push_back(rng.uniform(a.x, hi));
      const auto e = d.with_values(up);
      const double l0 = lambda(d);
      const double l1 = lambda(e);
      t.observe(std::max(0.0, l0 - l1), [&] {
        return nlohmann::json{{"lower", d.to_json()}, {"upper", e.to_json()}};
      });
    }
    return t.finish();
  }));

  {
    // First and second directional derivatives against finite differences,
    // plus the density identity, on shared random cases.
    Rng rng = next_rng();
    Tracker first("derivative_first_fd", 1e-6);
    Tracker second("derivative_second_fd", 1e-4);
    Tracker density("density_identity", 1e-10);
    std::string note;
    try {
      for (std::size_t k = 0; k < trials; ++k) {
        const auto d = random_distribution(rng, lo, hi, 2, 5);
        const auto psi = random_psi(rng, d.size());
        const auto an = directional_derivatives(f, d, psi);
        const ScalarFn path = [&](double s) { return lambda(d.shifted(psi, s)); };
        // Steps relative to the atom magnitudes: lambda carries inversion noise
        // proportional to |x|, which a unit-scale step would amplify.
        double x_scale = 1.0;
        double psi_scale = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
          x_scale = std::max(x_scale, std::abs(d.atoms()[i].x));
          psi_scale = std::max(psi_scale, std::abs(psi[i]));
        }
        const double cap = 0.025 * (hi - lo) / psi_scale;
        const double fd1 = differentiate_fd(
            path, 0.0, 1, std::min(cap, default_fd_step(x_scale, 1) / psi_scale));
        const double fd2 = differentiate_fd(
            path, 0.0, 2, std::min(cap, default_fd_step(x_scale, 2) / psi_scale));
        auto witness = [&] {
          return nlohmann::json{{"dist", d.to_json()},    {"psi", values_json(psi)},
                                {"first", an.first},      {"second", an.second},
                                {"fd_first", fd1},        {"fd_second", fd2}};
        };
        first.observe(std::abs(an.first - fd1) / std::max(1.0, std::abs(an.first)), witness);
        second.observe(std::abs(an.second - fd2) / std::max(1.0, std::abs(an.second)), witness);
        const auto rho = derivative_density(f, d);
        CompensatedSum s;
        for (std::size_t i = 0; i < d.size(); ++i) s.add(d.atoms()[i].p * rho[i] * psi[i]);
        density.observe(std::abs(s.value() - an.first) / std::max(1.0, std::abs(an.first)),
                        witness);
      }
    } catch (const std::exception& e) {
      note = e.what();
    }
    for (Tracker* t : {&first, &second, &density}) {
      auto r = t->finish();
      if (!note.empty()) {
        r.pass = false;
        r.note = note;
      }
      props.push_back(std::move(r));
    }
  }

  props.push_back(guarded("gibbs_normalization", [&] {
    // Independent of f: for exp the density is a probability vector and the
    // potential equals the cumulant generating function at t = 1.
    Rng rng = next_rng();
    Tracker t("gibbs_normalization", 1e-12);
    const auto g = GeneratorFunction::from_expression("exp(x)", Interval(-10.0, 10.0));
    for (std::size_t k = 0; k < trials; ++k) {
      const auto d = random_distribution(rng, -8.0, 8.0, 2, 6);
      const auto rho = derivative_density(g, d);
      CompensatedSum s;
      for (std::size_t i = 0; i < d.size(); ++i) s.add(d.atoms()[i].p * rho[i]);
      const double l = eval_potential(g, d);
      const double gamma = cgf(d, 1.0);
      const double r = std::max(std::abs(s.value() - 1.0),
                                std::abs(l - gamma) / std::max(1.0, std::abs(gamma)));
      t.observe(r, [&] {
        return nlohmann::json{{"dist", d.to_json()}, {"sum_p_rho", s.value()}, {"lambda", l},
                              {"cgf", gamma}};
      });
    }
    return t.finish();
  }));

  props.push_back(guarded("cgf_convexity", [&] {
    Rng rng = next_rng();
    Tracker t("cgf_convexity", 1e-9);
    for (std::size_t k = 0; k < trials; ++k) {
      const auto d = random_distribution(rng, lo, hi, 2, 6);
      const double s = rng.uniform(-2.0, 2.0);
      const double delta = rng.uniform(1e-3, 0.5);
      const double sd = cgf(d, s - delta) + cgf(d, s + delta) - 2.0 * cgf(d, s);
      t.observe(std::max(0.0, -sd), [&] {
        return nlohmann::json{{"dist", d.to_json()}, {"t", s}, {"delta", delta},
                              {"second_difference", sd}};
      });
    }
    return t.finish();
  }));

  const bool convex_type = is_convex_type(type);
  const bool concave_type = is_concave_type(type);
  const std::string no_verdict =
      std::string("potential type is ") + to_string(type) + "; no curvature claim to test";

  if (convex_type || concave_type) {
    props.push_back(guarded("classifier_soundness", [&] {
      Rng rng = next_rng();
      Tracker t("classifier_soundness", 1e-7);
      for (std::size_t k = 0; k < trials; ++k) {
        const auto d = random_distribution(rng, lo, hi, 2, 5);
        std::vector<double> other;
        for (std::size_t i = 0; i < d.size(); ++i) other.push_back(rng.uniform(lo, hi));
        const auto e = d.with_values(other);
        std::vector<double> mid;
        for (std::size_t i = 0; i < d.size(); ++i) mid.push_back(0.5 * (d.atoms()[i].x + other[i]));
        const double lhs = lambda(d.with_values(mid));
        const double rhs = 0.5 * (lambda(d) + lambda(e));
        const double excess = convex_type ? lhs - rhs : rhs - lhs;
        t.observe(std::max(0.0, excess), [&] {
          return nlohmann::json{{"phi", d.to_json()}, {"chi", e.to_json()}, {"lhs", lhs},
                                {"rhs", rhs}};
        });
      }
      return t.finish();
    }));

    props.push_back(guarded("second_derivative_sign", [&] {
      Rng rng = next_rng();
      Tracker t("second_derivative_sign", 1e-8);
      for (std::size_t k = 0; k < trials; ++k) {
        const auto d = random_distribution(rng, lo, hi, 2, 5);
        const auto psi = random_psi(rng, d.size());
        const double s = directional_derivatives(f, d, psi).second;
        t.observe(std::max(0.0, convex_type ? -s : s), [&] {
          return nlohmann::json{{"dist", d.to_json()}, {"psi", values_json(psi)}, {"second", s}};
        });
      }
      return t.finish();
    }));

    props.push_back(guarded("h_superadditivity", [&] {
      Tracker t("h_superadditivity", 1e-7);
      const auto r = h_superadditivity(f, trials, seed + 0x51, tol);
      t.observe(std::max(0.0, -r.worst), [&] {
        return nlohmann::json{{"y0", r.y0}, {"y1", r.y1}, {"p0", r.p0}, {"value", r.worst}};
      });
      return t.finish();
    }));
  } else {
    props.push_back(skipped("classifier_soundness", no_verdict));
    props.push_back(skipped("second_derivative_sign", no_verdict));
    props.push_back(skipped("h_superadditivity", no_verdict));
  }

  props.push_back(guarded("classification_affine_invariance", [&] {
    if (type == PotentialType::inconclusive) {
      return skipped("classification_affine_invariance", "classification is inconclusive");
    }
    Rng rng = next_rng();
    PropertyResult r;
    r.name = "classification_affine_invariance";
    const std::size_t n = std::min<std::size_t>(trials, 4);
    for (std::size_t k = 0; k < n; ++k) {
      const double A = (k % 2 == 0 ? 1.0 : -1.0) * std::exp(rng.uniform(-0.7, 0.7));
      const double B = rng.uniform(-1.0, 1.0);
      const auto got = classify_potential(f.affine(A, B), grid_n, tol).potential_type;
      const auto want = A > 0 ? type : swapped_direction(type);
      if (got != want) {
        r.pass = false;
        r.worst_residual = 1.0;
        r.witness = nlohmann::json{{"A", A}, {"B", B}, {"type", to_string(got)},
                                   {"expected", to_string(want)}};
        break;
      }
    }
    return r;
  }));

  props.push_back(guarded("derivative_identity", [&] {
    if (type == PotentialType::linear) {
      return skipped("derivative_identity", "affine generator");
    }
    Tracker t("derivative_identity", 1e-4);
    t.observe(derivative_identity_residual(f, grid_n, tol), [] { return nlohmann::json{}; });
    return t.finish();
  }));

  props.push_back(guarded("duality", [&] {
    const auto dual = dual_classify(f, grid_n, tol);
    Tracker t("duality", 1e-5);
    t.observe(dual.duality_residual, [] { return nlohmann::json{}; });
    auto r = t.finish();
    r.witness = nlohmann::json{{"type_f", to_string(dual.type_f)},
                               {"type_g", to_string(dual.type_g)},
                               {"pairing_ok", dual.pairing_ok}};
    const bool definite = is_convex_type(dual.type_f) || is_concave_type(dual.type_f) ||
                          dual.type_f == PotentialType::linear;
    if (definite && !dual.inconclusive && !dual.pairing_ok) {
      r.pass = false;
      r.note = "inverse pairing is not admissible";
    }
    if (dual.inconclusive) r.note = "pairing inconclusive";
    return r;
  }));

  props.push_back(guarded("jensen_search", [&] {
    const auto found = jensen_search(f, trials, seed, tol);
    PropertyResult r;
    r.name = "jensen_search";
    nlohmann::json w = nlohmann::json::object();
    if (found.convexity) w["violates_convexity"] = found.convexity->to_json();
    if (found.concavity) w["violates_concavity"] = found.concavity->to_json();
    if (!w.empty()) r.witness = w;
    const bool bad_convex = found.convexity && (convex_type || type == PotentialType::linear);
    const bool bad_concave = found.concavity && (concave_type || type == PotentialType::linear);
    if (bad_convex || bad_concave) {
      r.pass = false;
      r.worst_residual = std::max(bad_convex ? found.convexity->margin() : 0.0,
                                  bad_concave ? found.concavity->margin() : 0.0);
      r.note = "counterexample contradicts the classification";
    }
    for (const auto* rec : {&found.convexity, &found.concavity}) {
      if (*rec && !(*rec)->reverify(f, tol)) {
        r.pass = false;
        r.note = "stored counterexample does not re-verify";
      }
    }
    return r;
  }));

  return report;
}

}  // namespace fpot
