#pragma once

// Numerical foundation: open intervals, tolerances, adaptive Gauss-Legendre
// quadrature, Richardson-extrapolated central differences and safeguarded
// inversion of monotone functions.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace fpot {

using ScalarFn = std::function<double(double)>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Finite range used in place of an infinite end during grid sweeps.
struct SweepWindow {
  double lo = -50.0;
  double hi = 50.0;
};

/// Distance kept from a finite open endpoint: max(1e-9, 1e-9 * |endpoint|).
double endpoint_margin(double endpoint) noexcept;

/// Open interval (lo, hi); either end may be infinite.
class Interval {
 public:
  Interval(double lo, double hi);

  static Interval real_line() { return Interval(-kInf, kInf); }

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  bool contains(double x) const noexcept { return x > lo_ && x < hi_; }
  bool is_bounded() const noexcept { return std::isfinite(lo_) && std::isfinite(hi_); }

  /// Closed range [a, b] inside the interval used for evaluation sweeps:
  /// infinite ends are truncated to the window, finite ends pulled in by the
  /// endpoint margin.
  std::pair<double, double> working_range(SweepWindow window = {}) const;

  /// Sub-range keeping the central `fraction` of the working range.
  std::pair<double, double> central_range(double fraction, SweepWindow window = {}) const;

  bool operator==(const Interval&) const = default;

 private:
  double lo_;
  double hi_;
};

struct Tolerance {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  /// Dead zone for three-valued sign and curvature decisions.
  double decision_band = 1e-7;

  /// Throws InputError unless all fields are finite, nonnegative and
  /// decision_band > abs_tol.
  void validate() const;

  double bound(double magnitude) const noexcept {
    return std::max(abs_tol, rel_tol * std::abs(magnitude));
  }
};

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      carry_ += (sum_ - t) + v;
    } else {
      carry_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t panels = 0;
};

/// Globally adaptive quadrature on [a, b] using 10-point Gauss-Legendre panels.
/// Each panel's error is estimated by comparing it against the sum over its two
/// halves; the worst panel is split until the summed estimate drops below
/// max(abs_tol, rel_tol * |result|).
///
/// Throws EvaluationError (with the abscissa) on a non-finite sample and
/// AccuracyError (with the best estimate) when the panel budget runs out.
QuadratureResult integrate_adaptive_detailed(const ScalarFn& fn, double a, double b,
                                             const Tolerance& tol = {},
                                             std::size_t max_panels = 4096);

double integrate_adaptive(const ScalarFn& fn, double a, double b, const Tolerance& tol = {});

/// eps^(1/3) * max(1, |x|) for order 1; eps^(1/4) * max(1, |x|) for order 2.
double default_fd_step(double x, int order) noexcept;

/// Central difference of the given order (1 or 2) with one Richardson step,
/// sampling fn on [x - 2 step, x + 2 step].
double differentiate_fd(const ScalarFn& fn, double x, int order, double step);
double differentiate_fd(const ScalarFn& fn, double x, int order);

/// Solves fn(x) = y on the closed bracket [a, b]. fn must be strictly monotone
/// there and y must lie between fn(a) and fn(b) up to tol. Uses bisection,
/// refined by Newton steps when `derivative` is provided. With zero tolerances
/// iteration continues until the bracket collapses to a few ulps.
double solve_monotone(const ScalarFn& fn, const ScalarFn* derivative, double y, double a,
                      double b, const Tolerance& tol);

/// Inverts a strictly monotone fn over an open domain. Finite ends are clamped
/// by the endpoint margin; infinite ends are searched by geometric expansion.
double invert_monotone(const ScalarFn& fn, double y, const Interval& domain,
                       const Tolerance& tol = {});
double invert_monotone(const ScalarFn& fn, const ScalarFn& derivative, double y,
                       const Interval& domain, const Tolerance& tol = {});

/// n equally spaced points covering [a, b] inclusive (n >= 2).
std::vector<double> uniform_grid(double a, double b, std::size_t n);

}  // namespace fpot
