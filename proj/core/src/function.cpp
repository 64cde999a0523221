#include "fpot/function.hpp"

#include <sstream>

#include "fpot/error.hpp"

namespace fpot {

const char* to_string(Direction d) noexcept {
  return d == Direction::increasing ? "increasing" : "decreasing";
}

namespace {

Direction detect_direction(const GeneratorFunction::JetFn& jet, const Interval& domain,
                           const std::string& label) {
  const auto [a, b] = domain.working_range();
  const auto grid = uniform_grid(a, b, GeneratorFunction::kMonotoneSamples);
  std::vector<double> values;
  values.reserve(grid.size());
  for (double x : grid) {
    const double v = jet(x).value;
    if (!std::isfinite(v)) {
      throw EvaluationError("generator '" + label + "' is not finite at x = " +
                                std::to_string(x),
                            x);
    }
    values.push_back(v);
  }
  if (values.front() == values.back()) {
    throw MonotonicityError("generator '" + label + "' takes equal values at both ends of " +
                            "its working range");
  }
  const bool inc = values.back() > values.front();
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double d = values[i] - values[i - 1];
    // Zero steps are tolerated: saturation at double precision (e.g. tanh far out).
    if ((inc && d < 0.0) || (!inc && d > 0.0)) {
      std::ostringstream os;
      os << "generator '" << label << "' is not monotone between x = " << grid[i - 1]
         << " and x = " << grid[i];
      throw MonotonicityError(os.str());
    }
  }
  return inc ? Direction::increasing : Direction::decreasing;
}

Tolerance exact_tolerance() {
  Tolerance t;
  t.abs_tol = 0.0;
  t.rel_tol = 0.0;
  return t;
}

}  // namespace

GeneratorFunction::GeneratorFunction(JetFn jet, Interval domain, std::string label)
    : jet_(std::move(jet)), domain_(domain), label_(std::move(label)) {
  direction_ = detect_direction(jet_, domain_, label_);
}

GeneratorFunction GeneratorFunction::from_expr(Expr expr, Interval domain) {
  std::string label = expr.source();
  return GeneratorFunction([e = std::move(expr)](double x) { return e.eval_jet(x); }, domain,
                           std::move(label));
}

GeneratorFunction GeneratorFunction::from_expression(std::string_view source, Interval domain) {
  return from_expr(Expr::parse(source), domain);
}

Interval GeneratorFunction::image() const {
  const auto [a, b] = working_range();
  const double fa = value(a);
  const double fb = value(b);
  return Interval(std::min(fa, fb), std::max(fa, fb));
}

double GeneratorFunction::inverse_value(double y) const {
  const ScalarFn fn = [this](double x) { return jet_(x).value; };
  const ScalarFn dfn = [this](double x) { return jet_(x).d1; };
  return invert_monotone(fn, dfn, y, domain_, exact_tolerance());
}

double GeneratorFunction::inverse_value(double y, double a, double b) const {
  const ScalarFn fn = [this](double x) { return jet_(x).value; };
  const ScalarFn dfn = [this](double x) { return jet_(x).d1; };
  return solve_monotone(fn, &dfn, y, a, b, exact_tolerance());
}

GeneratorFunction GeneratorFunction::affine(double scale, double shift) const {
  if (scale == 0.0 || !std::isfinite(scale) || !std::isfinite(shift)) {
    throw InputError("affine transform requires finite A != 0 and finite B");
  }
  auto base = jet_;
  std::ostringstream os;
  os.precision(17);
  os << scale << "*(" << label_ << ")+" << shift;
  const Direction dir =
      (scale > 0.0) == increasing() ? Direction::increasing : Direction::decreasing;
  return GeneratorFunction(
      [base, scale, shift](double x) {
        const Jet2 j = base(x);
        return Jet2{scale * j.value + shift, scale * j.d1, scale * j.d2};
      },
      domain_, os.str(), dir);
}

GeneratorFunction GeneratorFunction::inverse_function() const {
  const auto [a, b] = working_range();
  auto self = std::make_shared<const GeneratorFunction>(*this);
  JetFn g = [self, a, b](double y) {
    const double x = self->inverse_value(y, a, b);
    const Jet2 fj = self->jet(x);
    if (fj.d1 == 0.0) {
      throw DerivativeDegenerateError("f' vanishes at x = " + std::to_string(x) +
                                      "; inverse is not differentiable");
    }
    const double inv = 1.0 / fj.d1;
    return Jet2{x, inv, -fj.d2 * inv * inv * inv};
  };
  return GeneratorFunction(std::move(g), image(), "inverse(" + label_ + ")");
}

}  // namespace fpot
