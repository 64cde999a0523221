#include "fpot/criteria.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fpot/error.hpp"
#include "fpot/random.hpp"
#include "fpot/version.hpp"

namespace fpot {

const char* to_string(CurvatureTag t) noexcept {
  switch (t) {
    case CurvatureTag::convex: return "convex";
    case CurvatureTag::concave: return "concave";
    case CurvatureTag::affine: return "affine";
    case CurvatureTag::neither: return "neither";
    case CurvatureTag::inconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(HSign s) noexcept {
  switch (s) {
    case HSign::positive: return "positive";
    case HSign::negative: return "negative";
    case HSign::zero: return "zero";
    case HSign::mixed: return "mixed";
    case HSign::inconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(PotentialType t) noexcept {
  switch (t) {
    case PotentialType::a: return "a";
    case PotentialType::b: return "b";
    case PotentialType::c: return "c";
    case PotentialType::d: return "d";
    case PotentialType::linear: return "linear";
    case PotentialType::neither: return "neither";
    case PotentialType::inconclusive: return "inconclusive";
  }
  return "?";
}

bool is_convex_type(PotentialType t) noexcept {
  return t == PotentialType::a || t == PotentialType::b;
}

bool is_concave_type(PotentialType t) noexcept {
  return t == PotentialType::c || t == PotentialType::d;
}

double jensen_defect(const ScalarFn& fn, double x0, double x1, double theta) {
  const double xm = theta * x0 + (1.0 - theta) * x1;
  return theta * fn(x0) + (1.0 - theta) * fn(x1) - fn(xm);
}

// ---------------------------------------------------------------------------
// Curvature

namespace {

struct DefectSample {
  JensenWitness witness;
  double band = 0.0;
};

double checked(const ScalarFn& fn, double x) {
  const double v = fn(x);
  if (!std::isfinite(v)) {
    throw EvaluationError("function is not finite at x = " + std::to_string(x), x);
  }
  return v;
}

}  // namespace

Curvature curvature_classify(const ScalarFn& fn, const Interval& domain, std::size_t grid_n,
                             const Tolerance& tol, std::uint64_t seed) {
  if (grid_n < 3) {
    throw InputError("curvature test needs at least 3 grid points");
  }
  const auto [a, b] = domain.working_range();
  const auto grid = uniform_grid(a, b, grid_n);
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = checked(fn, grid[i]);
  }

  std::vector<DefectSample> samples;
  samples.reserve(grid_n + 4 * grid_n);
  auto band_for = [&](double f0, double f1, double fm) {
    return tol.decision_band * (std::abs(f0) + std::abs(f1) + std::abs(fm)) + tol.abs_tol;
  };
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double d = 0.5 * values[i - 1] + 0.5 * values[i + 1] - values[i];
    samples.push_back({{grid[i - 1], grid[i + 1], 0.5, d},
                       band_for(values[i - 1], values[i + 1], values[i])});
  }
  Rng rng(seed);
  for (std::size_t k = 0; k < 4 * grid_n; ++k) {
    const double x0 = rng.uniform(a, b);
    const double x1 = rng.uniform(a, b);
    const double theta = rng.uniform(0.01, 0.99);
    const double xm = theta * x0 + (1.0 - theta) * x1;
    const double f0 = checked(fn, x0);
    const double f1 = checked(fn, x1);
    const double fm = checked(fn, xm);
    samples.push_back({{x0, x1, theta, theta * f0 + (1.0 - theta) * f1 - fm},
                       band_for(f0, f1, fm)});
  }

  bool pos_weak = false, pos_strong = false, neg_weak = false, neg_strong = false;
  const DefectSample* most_pos = nullptr;
  const DefectSample* most_neg = nullptr;
  for (const auto& s : samples) {
    const double d = s.witness.defect;
    const double ratio = d / s.band;
    if (ratio > 1.0) {
      pos_weak = true;
      pos_strong = pos_strong || ratio > 4.0;
      if (most_pos == nullptr || ratio > most_pos->witness.defect / most_pos->band) most_pos = &s;
    } else if (ratio < -1.0) {
      neg_weak = true;
      neg_strong = neg_strong || ratio < -4.0;
      if (most_neg == nullptr || ratio < most_neg->witness.defect / most_neg->band) most_neg = &s;
    }
  }

  Curvature out;
  if (pos_strong && neg_strong) {
    out.tag = CurvatureTag::neither;
    out.convexity_violation = most_neg->witness;
    out.concavity_violation = most_pos->witness;
  } else if (pos_strong && !neg_weak) {
    out.tag = CurvatureTag::convex;
  } else if (neg_strong && !pos_weak) {
    out.tag = CurvatureTag::concave;
  } else if (!pos_weak && !neg_weak) {
    out.tag = CurvatureTag::affine;
  } else {
    out.tag = CurvatureTag::inconclusive;
  }
  return out;
}

// ---------------------------------------------------------------------------
// h and H

namespace {

bool second_derivative_negligible(const Jet2& j, double x, const Tolerance& tol) {
  return std::abs(j.d2) <= tol.decision_band * std::abs(j.d1) / std::max(1.0, std::abs(x));
}

Jet2 monotone_jet(const GeneratorFunction& f, double x) {
  const Jet2 j = f.jet(x);
  if (j.d1 == 0.0 || !std::isfinite(j.d1)) {
    std::ostringstream os;
    os << "f'(" << x << ") vanishes; generator is not strictly monotone there";
    throw MonotonicityError(os.str());
  }
  return j;
}

/// f'/f'' without the infinity mapping; +-inf only when f'' is exactly zero.
double raw_h(const GeneratorFunction& f, double x) {
  const Jet2 j = monotone_jet(f, x);
  if (j.d2 == 0.0) return std::copysign(kInf, j.d1);
  return j.d1 / j.d2;
}

double raw_H(const GeneratorFunction& f, double y) {
  const double x = f.inverse_value(y);
  const Jet2 j = monotone_jet(f, x);
  if (j.d2 == 0.0) return std::copysign(kInf, j.d1);
  return j.d1 * j.d1 / j.d2;
}

}  // namespace

double compute_h(const GeneratorFunction& f, double x, const Tolerance& tol) {
  const Jet2 j = monotone_jet(f, x);
  if (second_derivative_negligible(j, x, tol)) {
    return std::copysign(kInf, j.d1);
  }
  return j.d1 / j.d2;
}

double compute_H(const GeneratorFunction& f, double y, const Tolerance& tol) {
  const double x = f.inverse_value(y);
  const Jet2 j = monotone_jet(f, x);
  if (second_derivative_negligible(j, x, tol)) {
    return std::copysign(kInf, j.d1);
  }
  return j.d1 * j.d1 / j.d2;
}

// ---------------------------------------------------------------------------
// Classification

std::string ClassificationReport::potential_verdict() const {
  if (is_convex_type(potential_type)) return "convex";
  if (is_concave_type(potential_type)) return "concave";
  return to_string(potential_type);
}

namespace {

nlohmann::json witness_json(const JensenWitness& w) {
  return {{"x0", w.x0}, {"x1", w.x1}, {"theta", w.theta}, {"defect", w.defect}};
}

nlohmann::json curvature_json(const Curvature& c) {
  nlohmann::json j{{"tag", to_string(c.tag)}};
  if (c.convexity_violation) j["convexity_violation"] = witness_json(*c.convexity_violation);
  if (c.concavity_violation) j["concavity_violation"] = witness_json(*c.concavity_violation);
  return j;
}

nlohmann::json bound_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

nlohmann::json ClassificationReport::to_json() const {
  return {
      {"tool", "fpot"},
      {"version", kVersion},
      {"function", function_label},
      {"domain", {bound_json(domain.lo()), bound_json(domain.hi())}},
      {"tolerances",
       {{"abs_tol", tolerance.abs_tol},
        {"rel_tol", tolerance.rel_tol},
        {"decision_band", tolerance.decision_band}}},
      {"grid_n", grid_n},
      {"f_direction", to_string(f_direction)},
      {"f_curvature", curvature_json(f_curvature)},
      {"h_sign", to_string(h_sign)},
      {"h_curvature", curvature_json(h_curvature)},
      {"potential_type", to_string(potential_type)},
      {"potential", potential_verdict()},
      {"grid", grid},
  };
}

ClassificationReport classify_potential(const GeneratorFunction& f, std::size_t grid_n,
                                        const Tolerance& tol) {
  tol.validate();
  ClassificationReport report;
  report.function_label = f.label();
  report.domain = f.domain();
  report.grid_n = grid_n;
  report.tolerance = tol;
  report.f_direction = f.direction();

  const auto [a, b] = f.working_range();
  report.grid = uniform_grid(a, b, grid_n);

  // Monotonicity of f on the classification grid.
  for (double x : report.grid) {
    const Jet2 j = monotone_jet(f, x);
    if ((j.d1 > 0.0) != f.increasing()) {
      std::ostringstream os;
      os << "f' changes sign on the grid (at x = " << x << ")";
      throw MonotonicityError(os.str());
    }
  }

  const ScalarFn fn = [&f](double x) { return f.value(x); };
  report.f_curvature = curvature_classify(fn, f.domain(), grid_n, tol);

  bool any_pos = false, any_neg = false, any_zero = false;
  for (double x : report.grid) {
    const Jet2 j = f.jet(x);
    if (second_derivative_negligible(j, x, tol)) {
      any_zero = true;
    } else if (j.d1 / j.d2 > 0.0) {
      any_pos = true;
    } else {
      any_neg = true;
    }
  }
  if (any_pos && any_neg) {
    report.h_sign = HSign::mixed;
  } else if (any_zero && !any_pos && !any_neg) {
    report.h_sign = HSign::zero;
  } else if (any_zero) {
    report.h_sign = HSign::inconclusive;
  } else {
    report.h_sign = any_pos ? HSign::positive : HSign::negative;
  }

  if (report.h_sign == HSign::zero) {
    // Identically infinite h: concave and convex in the extended sense.
    report.h_curvature.tag = CurvatureTag::affine;
    report.potential_type = PotentialType::linear;
    return report;
  }

  try {
    const ScalarFn h = [&f](double x) { return raw_h(f, x); };
    report.h_curvature = curvature_classify(h, f.domain(), grid_n, tol);
  } catch (const EvaluationError&) {
    report.h_curvature.tag = CurvatureTag::inconclusive;
  }

  const CurvatureTag hc = report.h_curvature.tag;
  PotentialType type = PotentialType::inconclusive;
  if (report.h_sign == HSign::mixed) {
    type = PotentialType::neither;
  } else if (report.h_sign == HSign::inconclusive || hc == CurvatureTag::inconclusive) {
    type = PotentialType::inconclusive;
  } else if (report.h_sign == HSign::positive) {
    if (report.h_curvature.admits_concave()) {
      type = f.increasing() ? PotentialType::a : PotentialType::b;
    } else {
      type = PotentialType::neither;
    }
  } else {
    if (report.h_curvature.admits_convex()) {
      type = f.increasing() ? PotentialType::d : PotentialType::c;
    } else {
      type = PotentialType::neither;
    }
  }

  // The numerically measured curvature of f must agree with the type.
  if (type == PotentialType::a || type == PotentialType::c) {
    if (report.f_curvature.tag != CurvatureTag::convex) type = PotentialType::inconclusive;
  } else if (type == PotentialType::b || type == PotentialType::d) {
    if (report.f_curvature.tag != CurvatureTag::concave) type = PotentialType::inconclusive;
  }
  report.potential_type = type;
  return report;
}

// ---------------------------------------------------------------------------
// h/H derivative identity

double derivative_identity_residual(const GeneratorFunction& f, std::size_t grid_n,
                                    const Tolerance& tol) {
  const auto [a, b] = f.working_range();
  const auto [ca, cb] = f.domain().central_range(0.9);
  const Interval image = f.image();
  const auto grid = uniform_grid(ca, cb, grid_n);
  for (double x : grid) {
    if (second_derivative_negligible(f.jet(x), x, tol)) {
      throw NotApplicableError("h/H identity is undefined for affine generators (f'' ~ 0 at x = " +
                               std::to_string(x) + ")");
    }
  }
  const ScalarFn h = [&f](double x) { return raw_h(f, x); };
  const ScalarFn H = [&f](double y) { return raw_H(f, y); };
  double worst = 0.0;
  for (double x : grid) {
    const double step_x = std::min(default_fd_step(x, 1), 0.2 * std::min(x - a, b - x));
    const double y = f.value(x);
    const double step_y =
        std::min(default_fd_step(y, 1), 0.2 * std::min(y - image.lo(), image.hi() - y));
    const double dh = differentiate_fd(h, x, 1, step_x);
    const double dH = differentiate_fd(H, y, 1, step_y);
    worst = std::max(worst, std::abs(dH - dh - 1.0));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Inverse duality

bool admissible_dual_pair(PotentialType f, PotentialType g) noexcept {
  using T = PotentialType;
  return (f == T::a && g == T::d) || (f == T::d && g == T::a) || (f == T::b && g == T::b) ||
         (f == T::c && g == T::c) || (f == T::linear && g == T::linear);
}

DualClassification dual_classify(const GeneratorFunction& f, std::size_t grid_n,
                                 const Tolerance& tol) {
  DualClassification out;
  const GeneratorFunction g = f.inverse_function();
  out.type_f = classify_potential(f, grid_n, tol).potential_type;
  out.type_g = classify_potential(g, grid_n, tol).potential_type;
  out.inconclusive = out.type_f == PotentialType::inconclusive ||
                     out.type_g == PotentialType::inconclusive;
  out.pairing_ok = !out.inconclusive && admissible_dual_pair(out.type_f, out.type_g);

  if (out.type_f != PotentialType::linear) {
    const auto [ca, cb] = f.domain().central_range(0.9);
    for (double x : uniform_grid(ca, cb, grid_n)) {
      const double y = f.value(x);
      const double H = compute_H(f, y, tol);
      const Jet2 gj = g.jet(y);
      if (std::isinf(H) || gj.d2 == 0.0) {
        continue;
      }
      out.duality_residual = std::max(out.duality_residual, std::abs(H + gj.d1 / gj.d2));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Two-point Jensen inequality for H

SuperadditivityResult h_superadditivity(const GeneratorFunction& f, std::size_t trials,
                                        std::uint64_t seed, const Tolerance& tol) {
  const ScalarFn fn = [&f](double x) { return f.value(x); };
  const Curvature fc = curvature_classify(fn, f.domain(), 64, tol);
  if (fc.tag != CurvatureTag::convex && fc.tag != CurvatureTag::concave) {
    throw NotApplicableError(std::string("H inequality needs strictly convex or concave f, got ") +
                             to_string(fc.tag));
  }
  const double s = fc.tag == CurvatureTag::convex ? 1.0 : -1.0;
  const auto [ca, cb] = f.domain().central_range(0.8);
  Rng rng(seed);
  SuperadditivityResult out;
  for (std::size_t k = 0; k < trials; ++k) {
    const double y0 = f.value(rng.uniform(ca, cb));
    const double y1 = f.value(rng.uniform(ca, cb));
    const double p0 = rng.uniform(0.01, 0.99);
    const double y = p0 * y0 + (1.0 - p0) * y1;
    const double H = compute_H(f, y, tol);
    const double H0 = compute_H(f, y0, tol);
    const double H1 = compute_H(f, y1, tol);
    if (std::isinf(H) || std::isinf(H0) || std::isinf(H1)) {
      continue;
    }
    const double r = s * (H - p0 * H0 - (1.0 - p0) * H1);
    if (r < out.worst) {
      out = {r, y0, y1, p0};
    }
  }
  return out;
}

}  // namespace fpot
