#include "fpot/generator.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

#include "fpot/error.hpp"

namespace fpot {

const char* to_string(Sign s) noexcept { return s == Sign::positive ? "positive" : "negative"; }

namespace {

std::string str(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double eval_h(const Expr& body, double x) {
  double v = 0.0;
  try {
    v = body.eval(x);
  } catch (const EvaluationError& e) {
    throw SingularHError(std::string("h cannot be evaluated: ") + e.what(), x);
  }
  if (!std::isfinite(v)) {
    throw SingularHError("h is not finite at x = " + str(x), x);
  }
  if (v == 0.0) {
    throw SingularHError("h vanishes at x = " + str(x), x);
  }
  return v;
}

}  // namespace

HSpec::HSpec(Expr body, Interval domain, std::optional<Sign> expected_sign)
    : body_(std::move(body)), domain_(domain) {
  const auto [a, b] = domain_.working_range();
  const auto grid = uniform_grid(a, b, kCheckPoints);
  const double first = eval_h(body_, grid.front());
  sign_ = expected_sign.value_or(first > 0.0 ? Sign::positive : Sign::negative);
  for (double x : grid) {
    (*this)(x);
  }
}

HSpec HSpec::from_expression(std::string_view source, Interval domain,
                             std::optional<Sign> expected_sign) {
  return HSpec(Expr::parse(source), domain, expected_sign);
}

double HSpec::operator()(double x) const {
  const double v = eval_h(body_, x);
  if ((v > 0.0) != (sign_ == Sign::positive)) {
    throw SingularHError("h changes sign near x = " + str(x) + " (expected " +
                             to_string(sign_) + ")",
                         x);
  }
  return v;
}

double default_x0(const Interval& domain) {
  const auto [a, b] = domain.working_range();
  if (domain.is_bounded()) {
    return 0.5 * (a + b);
  }
  return std::clamp(0.0, a, b);
}

namespace {

// Builds a table of y(s) = int slope on [nodes.front(), nodes.back()], zero at
// the first node, with exact slopes at the nodes. Without a curvature function
// the segments are cubic Hermite; with one they are quintic Hermite with exact
// second derivatives too. A segment is accepted when the midpoint value matches
// quadrature and the midpoint slope (and curvature) match the exact ones;
// otherwise it is bisected.
class TableBuilder {
 public:
  TableBuilder(const ScalarFn& slope, const ScalarFn* curvature, const Tolerance& tol,
               const char* what)
      : slope_(slope), curvature_(curvature), tol_(tol), what_(what) {}

  MonotoneCubic build_cubic(const std::vector<double>& seeds) {
    run(seeds);
    return MonotoneCubic(std::move(xs_), std::move(ys_), std::move(ms_));
  }

  QuinticHermite build_quintic(const std::vector<double>& seeds) {
    run(seeds);
    return QuinticHermite(std::move(xs_), std::move(ys_), std::move(ms_), std::move(cs_));
  }

 private:
  static constexpr int kMaxDepth = 60;

  struct Node {
    double x, y, m, c;
  };

  Node node(double x, double y) const {
    return {x, y, slope_(x), curvature_ ? (*curvature_)(x) : 0.0};
  }

  Jet2 interpolate(const Node& l, const Node& r, double x) const {
    if (curvature_) {
      return QuinticHermite::segment_jet(l.x, l.y, l.m, l.c, r.x, r.y, r.m, r.c, x);
    }
    return {MonotoneCubic::hermite(l.x, l.y, l.m, r.x, r.y, r.m, x),
            MonotoneCubic::hermite_slope(l.x, l.y, l.m, r.x, r.y, r.m, x), 0.0};
  }

  void run(const std::vector<double>& seeds) {
    Node left = node(seeds.front(), 0.0);
    push(left);
    for (std::size_t i = 1; i < seeds.size(); ++i) {
      const double r = seeds[i];
      const Node right = node(r, left.y + integrate_adaptive(slope_, left.x, r, tol_));
      refine(left, right, 0);
      left = right;
    }
  }

  void refine(const Node& l, const Node& r, int depth) {
    const double x = 0.5 * (l.x + r.x);
    const Node mid = node(x, l.y + integrate_adaptive(slope_, l.x, x, tol_));
    const Jet2 p = interpolate(l, r, x);
    bool ok = std::abs(p.value - mid.y) <= tol_.bound(mid.y) &&
              std::abs(p.d1 - mid.m) <= 10.0 * tol_.rel_tol * std::abs(mid.m) + tol_.abs_tol;
    if (curvature_) {
      ok = ok && std::abs(p.d2 - mid.c) <= 100.0 * tol_.rel_tol * std::abs(mid.c) + tol_.abs_tol;
    }
    if (ok || depth >= kMaxDepth || !(x > l.x && x < r.x)) {
      push(r);
      return;
    }
    if (xs_.size() >= GeneratedF::kNodeBudget) {
      throw AccuracyError(std::string(what_) + " table exceeded " +
                              std::to_string(GeneratedF::kNodeBudget) + " nodes near x = " +
                              str(x),
                          mid.y);
    }
    refine(l, mid, depth + 1);
    refine(mid, r, depth + 1);
  }

  void push(const Node& n) {
    xs_.push_back(n.x);
    ys_.push_back(n.y);
    ms_.push_back(n.m);
    cs_.push_back(n.c);
  }

  const ScalarFn& slope_;
  const ScalarFn* curvature_;
  Tolerance tol_;
  const char* what_;
  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<double> ms_;
  std::vector<double> cs_;
};

MonotoneCubic rebase(const MonotoneCubic& t, double x0) {
  const double shift = t(x0);
  std::vector<double> xs(t.nodes().begin(), t.nodes().end());
  std::vector<double> ys;
  std::vector<double> ms;
  for (double x : xs) {
    ys.push_back(t(x) - shift);
    ms.push_back(t.derivative(x));
  }
  return MonotoneCubic(std::move(xs), std::move(ys), std::move(ms));
}

QuinticHermite rebase(const QuinticHermite& t, double x0) {
  const double shift = t(x0);
  std::vector<double> xs(t.nodes().begin(), t.nodes().end());
  std::vector<double> ys;
  std::vector<double> ms;
  std::vector<double> cs;
  for (double x : xs) {
    const Jet2 j = t.jet(x);
    ys.push_back(j.value - shift);
    ms.push_back(j.d1);
    cs.push_back(j.d2);
  }
  return QuinticHermite(std::move(xs), std::move(ys), std::move(ms), std::move(cs));
}

// x0 must be a node. Inserting it right next to a grid node would leave a
// segment whose secant is rounding noise, and the monotone filter would then
// clobber the exact slopes on both sides; a nearby interior node is moved instead.
std::vector<double> seed_nodes(double a, double b, double x0) {
  auto nodes = uniform_grid(a, b, 33);
  const double spacing = (b - a) / 32.0;
  const auto it = std::lower_bound(nodes.begin(), nodes.end(), x0);
  if (it != nodes.end() && *it == x0) {
    return nodes;
  }
  for (auto near : {it - 1, it}) {
    const bool interior = near > nodes.begin() && near < nodes.end() - 1;
    if (interior && std::abs(*near - x0) < 0.25 * spacing) {
      *near = x0;
      return nodes;
    }
  }
  nodes.insert(it, x0);
  return nodes;
}

}  // namespace

GeneratedF generate_f(const HSpec& h, const GeneratorParams& params, const Tolerance& tol) {
  tol.validate();
  if (params.A == 0.0 || !std::isfinite(params.A) || !std::isfinite(params.B)) {
    throw InputError("A must be finite and nonzero, B finite");
  }
  const auto [a, b] = h.domain().working_range();
  const double x0 = params.x0.value_or(default_x0(h.domain()));
  if (!(x0 >= a && x0 <= b)) {
    throw InputError("x0 = " + str(x0) + " is outside the domain");
  }

  const ScalarFn inv_h = [&h](double s) { return 1.0 / h(s); };
  MonotoneCubic inner =
      TableBuilder(inv_h, nullptr, tol, "inner").build_cubic(seed_nodes(a, b, x0));
  inner = rebase(inner, x0);

  const ScalarFn exp_inner = [&inner](double s) {
    const double v = std::exp(inner(s));
    if (!std::isfinite(v)) {
      throw EvaluationError("exp of the inner integral overflows at s = " + str(s), s);
    }
    return v;
  };
  // f'' = f'/h. Matching it at the outer nodes keeps the second derivative of
  // the value table continuous and close to the exact one.
  const ScalarFn exp_inner_over_h = [&](double s) { return exp_inner(s) / h(s); };
  // The inner interpolant has second-derivative jumps at its nodes; seeding the
  // outer table with them keeps every outer segment smooth.
  const std::vector<double> outer_seeds(inner.nodes().begin(), inner.nodes().end());
  QuinticHermite outer = TableBuilder(exp_inner, &exp_inner_over_h, tol, "outer")
                             .build_quintic(outer_seeds);
  outer = rebase(outer, x0);

  auto state = std::make_shared<const GeneratedF::State>(GeneratedF::State{
      h, x0, params.A, params.B, a, b, std::move(inner), std::move(outer)});
  return GeneratedF(std::move(state));
}

Jet2 GeneratedF::jet(double x) const {
  const State& s = *state_;
  if (!(x >= s.lo && x <= s.hi)) {
    throw DomainError("x = " + str(x) + " is outside the generated range [" + str(s.lo) + ", " +
                          str(s.hi) + "]",
                      x);
  }
  const double d1 = s.A * std::exp(s.inner(x));
  return {s.A * s.outer(x) + s.B, d1, d1 / s.h(x)};
}

GeneratorFunction GeneratedF::function() const {
  GeneratedF self = *this;
  return GeneratorFunction([self](double x) { return self.jet(x); }, table_range(),
                           "generated from h = " + state_->h.body().source());
}

double GeneratedF::roundtrip_error(std::size_t grid_n) const {
  const auto [ca, cb] = table_range().central_range(0.95);
  const ScalarFn f = [this](double x) { return value(x); };
  const ScalarFn df = [this](double x) { return jet(x).d1; };
  double worst = 0.0;
  for (double x : uniform_grid(ca, cb, grid_n)) {
    const double step = std::min(default_fd_step(x, 1),
                                 0.2 * std::min(x - state_->lo, state_->hi - x));
    const double d1 = differentiate_fd(f, x, 1, step);
    const double d2 = differentiate_fd(df, x, 1, step);
    const double hx = state_->h(x);
    worst = std::max(worst, std::abs(d1 / d2 - hx) / std::abs(hx));
  }
  return worst;
}

double roundtrip_h(const HSpec& h, const GeneratorParams& params, std::size_t grid_n,
                   const Tolerance& tol) {
  return generate_f(h, params, tol).roundtrip_error(grid_n);
}

}  // namespace fpot
