#include "fpot/numerics.hpp"

#include <algorithm>
#include <array>
#include <queue>
#include <sstream>

#include "fpot/error.hpp"

namespace fpot {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::input: return "input";
    case ErrorKind::parse: return "parse";
    case ErrorKind::domain: return "domain";
    case ErrorKind::evaluation: return "evaluation";
    case ErrorKind::accuracy: return "accuracy";
    case ErrorKind::out_of_range: return "out_of_range";
    case ErrorKind::monotonicity: return "monotonicity";
    case ErrorKind::derivative_degenerate: return "derivative_degenerate";
    case ErrorKind::singular_h: return "singular_h";
    case ErrorKind::not_applicable: return "not_applicable";
  }
  return "unknown";
}

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double endpoint_margin(double endpoint) noexcept {
  return std::max(1e-9, 1e-9 * std::abs(endpoint));
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (std::isnan(lo) || std::isnan(hi) || !(lo < hi)) {
    throw InputError("interval requires lo < hi, got (" + format_double(lo) + ", " +
                     format_double(hi) + ")");
  }
  if (lo == kInf || hi == -kInf) {
    throw InputError("interval endpoints must not be +inf on the left or -inf on the right");
  }
}

std::pair<double, double> Interval::working_range(SweepWindow window) const {
  const double width = window.hi - window.lo;
  double a = 0.0;
  double b = 0.0;
  if (std::isfinite(lo_)) {
    a = lo_ + endpoint_margin(lo_);
  } else {
    a = std::isfinite(hi_) && hi_ <= window.lo ? hi_ - width : window.lo;
  }
  if (std::isfinite(hi_)) {
    b = hi_ - endpoint_margin(hi_);
  } else {
    b = std::isfinite(lo_) && lo_ >= window.hi ? lo_ + width : window.hi;
  }
  if (!(a < b)) {
    // Interval narrower than two margins: fall back to its midpoint region.
    const double mid = 0.5 * (lo_ + hi_);
    const double half = 0.25 * (hi_ - lo_);
    a = mid - half;
    b = mid + half;
  }
  return {a, b};
}

std::pair<double, double> Interval::central_range(double fraction, SweepWindow window) const {
  const auto [a, b] = working_range(window);
  const double trim = 0.5 * (1.0 - fraction) * (b - a);
  return {a + trim, b - trim};
}

void Tolerance::validate() const {
  const auto ok = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (!ok(abs_tol) || !ok(rel_tol) || !ok(decision_band) || decision_band <= 0.0) {
    throw InputError("tolerances must be finite and nonnegative, decision_band > 0");
  }
  if (!(decision_band > abs_tol)) {
    throw InputError("decision_band must exceed abs_tol");
  }
}

// ---------------------------------------------------------------------------
// Quadrature

namespace {

// 10-point Gauss-Legendre nodes (positive half) and weights on [-1, 1].
constexpr std::array<double, 5> kGLNodes = {
    0.1488743389816312108848260, 0.4333953941292471907992659, 0.6794095682990244062343274,
    0.8650633666889845107320967, 0.9739065285171717200779640};
constexpr std::array<double, 5> kGLWeights = {
    0.2955242247147528701738930, 0.2692667193099963550912269, 0.2190863625159820439955349,
    0.1494513491505805931457763, 0.0666713443086881375935688};

double sample(const ScalarFn& fn, double x) {
  const double v = fn(x);
  if (!std::isfinite(v)) {
    throw EvaluationError("integrand is not finite at x = " + format_double(x), x);
  }
  return v;
}

double gauss_panel(const ScalarFn& fn, double a, double b) {
  const double c = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < kGLNodes.size(); ++i) {
    const double dx = r * kGLNodes[i];
    s += kGLWeights[i] * (sample(fn, c - dx) + sample(fn, c + dx));
  }
  return s * r;
}

struct Panel {
  double a;
  double b;
  double left;   // estimate on [a, mid]
  double right;  // estimate on [mid, b]
  double error;

  double value() const { return left + right; }
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel make_panel(const ScalarFn& fn, double a, double b) {
  const double m = 0.5 * (a + b);
  const double whole = gauss_panel(fn, a, b);
  const double left = gauss_panel(fn, a, m);
  const double right = gauss_panel(fn, m, b);
  return Panel{a, b, left, right, std::abs(whole - (left + right))};
}

}  // namespace

QuadratureResult integrate_adaptive_detailed(const ScalarFn& fn, double a, double b,
                                             const Tolerance& tol, std::size_t max_panels) {
  if (a == b) {
    return {};
  }
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw InputError("integration limits must be finite");
  }
  if (b < a) {
    QuadratureResult r = integrate_adaptive_detailed(fn, b, a, tol, max_panels);
    r.value = -r.value;
    return r;
  }

  std::priority_queue<Panel> heap;
  heap.push(make_panel(fn, a, b));
  CompensatedSum total_value;
  double total_error = heap.top().error;
  double running = heap.top().value();

  for (;;) {
    if (total_error <= tol.bound(running)) {
      break;
    }
    const Panel worst = heap.top();
    const double m = 0.5 * (worst.a + worst.b);
    if (heap.size() >= max_panels || !(worst.a < m && m < worst.b)) {
      std::vector<Panel> rest;
      CompensatedSum s;
      while (!heap.empty()) {
        s.add(heap.top().value());
        heap.pop();
      }
      throw AccuracyError("quadrature did not converge within " + std::to_string(max_panels) +
                              " panels (error estimate " + format_double(total_error) + ")",
                          s.value());
    }
    heap.pop();
    const Panel l = make_panel(fn, worst.a, m);
    const Panel r = make_panel(fn, m, worst.b);
    total_error += l.error + r.error - worst.error;
    running += l.value() + r.value() - worst.value();
    heap.push(l);
    heap.push(r);
    // Re-sum periodically so drift in the running totals cannot stall convergence.
    if (heap.size() % 64 == 0) {
      auto copy = heap;
      double e = 0.0;
      CompensatedSum v;
      while (!copy.empty()) {
        e += copy.top().error;
        v.add(copy.top().value());
        copy.pop();
      }
      total_error = e;
      running = v.value();
    }
  }

  QuadratureResult result;
  result.panels = heap.size();
  double err = 0.0;
  while (!heap.empty()) {
    total_value.add(heap.top().value());
    err += heap.top().error;
    heap.pop();
  }
  result.value = total_value.value();
  result.error_estimate = err;
  return result;
}

double integrate_adaptive(const ScalarFn& fn, double a, double b, const Tolerance& tol) {
  return integrate_adaptive_detailed(fn, a, b, tol).value;
}

// ---------------------------------------------------------------------------
// Finite differences

double default_fd_step(double x, int order) noexcept {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double scale = std::max(1.0, std::abs(x));
  return (order == 1 ? std::cbrt(eps) : std::sqrt(std::sqrt(eps))) * scale;
}

double differentiate_fd(const ScalarFn& fn, double x, int order, double step) {
  if (order != 1 && order != 2) {
    throw InputError("differentiate_fd supports order 1 or 2");
  }
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw InputError("finite-difference step must be positive");
  }
  auto f = [&](double t) {
    const double v = fn(t);
    if (!std::isfinite(v)) {
      throw EvaluationError("non-finite sample at x = " + format_double(t), t);
    }
    return v;
  };
  // Make the steps exactly representable offsets from x.
  const double h = (x + step) - x;
  const double h2 = (x + 2.0 * step) - x;
  if (order == 1) {
    const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
    const double d2 = (f(x + h2) - f(x - h2)) / (2.0 * h2);
    return (4.0 * d1 - d2) / 3.0;
  }
  const double f0 = f(x);
  const double s1 = (f(x + h) - 2.0 * f0 + f(x - h)) / (h * h);
  const double s2 = (f(x + h2) - 2.0 * f0 + f(x - h2)) / (h2 * h2);
  return (4.0 * s1 - s2) / 3.0;
}

double differentiate_fd(const ScalarFn& fn, double x, int order) {
  return differentiate_fd(fn, x, order, default_fd_step(x, order));
}

// ---------------------------------------------------------------------------
// Monotone inversion

namespace {

double finite_eval(const ScalarFn& fn, double x) {
  const double v = fn(x);
  if (std::isnan(v)) {
    throw EvaluationError("function is NaN at x = " + format_double(x), x);
  }
  return v;
}

bool bracket_collapsed(double lo, double hi) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  return hi - lo <= 4.0 * eps * std::max(std::abs(lo), std::abs(hi)) ||
         std::nextafter(lo, hi) >= hi;
}

}  // namespace

double solve_monotone(const ScalarFn& fn, const ScalarFn* derivative, double y, double a,
                      double b, const Tolerance& tol) {
  if (a > b) {
    std::swap(a, b);
  }
  const double fa = finite_eval(fn, a);
  const double fb = finite_eval(fn, b);
  const double slack = tol.bound(y);
  if (a == b) {
    if (std::abs(fa - y) <= slack) {
      return a;
    }
    throw OutOfRangeError("target " + format_double(y) + " not attained on degenerate bracket");
  }
  if (fa == fb) {
    throw MonotonicityError("function takes equal values " + format_double(fa) +
                            " at both bracket ends");
  }
  const bool increasing = fb > fa;
  const double fmin = std::min(fa, fb);
  const double fmax = std::max(fa, fb);
  if (y < fmin - slack || y > fmax + slack) {
    throw OutOfRangeError("target " + format_double(y) + " outside range [" +
                          format_double(fmin) + ", " + format_double(fmax) + "]");
  }
  if (y <= fmin) {
    return increasing ? a : b;
  }
  if (y >= fmax) {
    return increasing ? b : a;
  }

  // Bracket invariant: s(lo) < 0 < s(hi) with s(x) = sign * (fn(x) - y).
  const double sign = increasing ? 1.0 : -1.0;
  double lo = a;
  double hi = b;
  double best_x = std::abs(fa - y) <= std::abs(fb - y) ? a : b;
  double best_r = std::min(std::abs(fa - y), std::abs(fb - y));
  double x = 0.5 * (lo + hi);
  double last_step = hi - lo;
  double step = last_step;

  for (int iter = 0; iter < 400; ++iter) {
    const double fx = finite_eval(fn, x);
    const double r = fx - y;
    if (std::abs(r) < best_r) {
      best_r = std::abs(r);
      best_x = x;
    }
    if (fx < fmin - slack || fx > fmax + slack) {
      throw MonotonicityError("value " + format_double(fx) + " at x = " + format_double(x) +
                              " leaves the bracket range; function is not monotone");
    }
    if (r == 0.0 || (std::abs(r) <= slack && slack > 0.0)) {
      return x;
    }
    if (sign * r < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (bracket_collapsed(lo, hi)) {
      return best_x;
    }

    double next = 0.5 * (lo + hi);
    bool newton_ok = false;
    if (derivative != nullptr) {
      const double d = (*derivative)(x);
      if (std::isfinite(d) && d != 0.0) {
        const double candidate = x - r / d;
        // Safeguard: stay inside the bracket and shrink at least as fast as bisection.
        if (candidate > lo && candidate < hi && std::abs(2.0 * r) <= std::abs(last_step * d)) {
          newton_ok = true;
          next = candidate;
        }
      }
    }
    last_step = step;
    step = next - x;
    if (newton_ok) {
      constexpr double eps = std::numeric_limits<double>::epsilon();
      if (std::abs(step) <= 2.0 * eps * std::abs(x) || step == 0.0) {
        const double fn_next = finite_eval(fn, next);
        return std::abs(fn_next - y) < best_r ? next : best_x;
      }
    }
    x = next;
  }
  if (hi - lo <= 1e-12 * std::max(1.0, std::abs(best_x))) {
    return best_x;
  }
  throw AccuracyError("monotone inversion did not converge", best_x);
}

namespace {

double invert_impl(const ScalarFn& fn, const ScalarFn* derivative, double y,
                   const Interval& domain, const Tolerance& tol) {
  auto [a, b] = domain.working_range();
  const double slack = tol.bound(y);
  double fa = finite_eval(fn, a);
  double fb = finite_eval(fn, b);
  if (fa == fb) {
    throw MonotonicityError("function takes equal values at both ends of the search range");
  }
  const bool increasing = fb > fa;

  // Expand infinite sides until y is bracketed.
  auto below = [&](double v) { return v < y - slack; };
  auto above = [&](double v) { return v > y + slack; };
  constexpr double kLimit = 1e300;
  for (int i = 0; i < 2048; ++i) {
    const double f_low_side = increasing ? fa : fb;   // value at the end with smaller f
    const double f_high_side = increasing ? fb : fa;
    bool changed = false;
    if (above(f_low_side)) {
      // need smaller f: move the end that has smaller f outward
      const bool move_a = increasing;
      if (move_a && !std::isfinite(domain.lo()) && a > -kLimit) {
        a = std::max(-kLimit, a - std::max(1.0, std::abs(a)));
        fa = finite_eval(fn, a);
        changed = true;
      } else if (!move_a && !std::isfinite(domain.hi()) && b < kLimit) {
        b = std::min(kLimit, b + std::max(1.0, std::abs(b)));
        fb = finite_eval(fn, b);
        changed = true;
      }
    } else if (below(f_high_side)) {
      const bool move_b = increasing;
      if (move_b && !std::isfinite(domain.hi()) && b < kLimit) {
        b = std::min(kLimit, b + std::max(1.0, std::abs(b)));
        fb = finite_eval(fn, b);
        changed = true;
      } else if (!move_b && !std::isfinite(domain.lo()) && a > -kLimit) {
        a = std::max(-kLimit, a - std::max(1.0, std::abs(a)));
        fa = finite_eval(fn, a);
        changed = true;
      }
    }
    if (!changed) {
      break;
    }
    if ((fb > fa) != increasing || std::isinf(fa) || std::isinf(fb)) {
      break;
    }
  }
  return solve_monotone(fn, derivative, y, a, b, tol);
}

}  // namespace

double invert_monotone(const ScalarFn& fn, double y, const Interval& domain,
                       const Tolerance& tol) {
  return invert_impl(fn, nullptr, y, domain, tol);
}

double invert_monotone(const ScalarFn& fn, const ScalarFn& derivative, double y,
                       const Interval& domain, const Tolerance& tol) {
  return invert_impl(fn, &derivative, y, domain, tol);
}

std::vector<double> uniform_grid(double a, double b, std::size_t n) {
  if (n < 2) {
    throw InputError("grid needs at least two points");
  }
  std::vector<double> grid(n);
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = a + h * static_cast<double>(i);
  }
  grid.back() = b;
  return grid;
}

}  // namespace fpot
