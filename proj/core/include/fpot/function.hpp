#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "fpot/expr.hpp"
#include "fpot/jet.hpp"
#include "fpot/numerics.hpp"

namespace fpot {

enum class Direction { increasing, decreasing };

const char* to_string(Direction d) noexcept;

/// Continuous strictly monotone f on an open interval I, evaluable together
/// with its first two derivatives. Monotonicity is sampled at construction.
class GeneratorFunction {
 public:
  using JetFn = std::function<Jet2(double)>;

  static constexpr std::size_t kMonotoneSamples = 64;

  /// Throws MonotonicityError if the sampled values are not monotone and
  /// EvaluationError if f is not finite on the working range.
  GeneratorFunction(JetFn jet, Interval domain, std::string label = {});

  static GeneratorFunction from_expr(Expr expr, Interval domain);
  static GeneratorFunction from_expression(std::string_view source, Interval domain);

  Jet2 jet(double x) const { return jet_(x); }
  double value(double x) const { return jet_(x).value; }
  double operator()(double x) const { return value(x); }

  const Interval& domain() const noexcept { return domain_; }
  Direction direction() const noexcept { return direction_; }
  bool increasing() const noexcept { return direction_ == Direction::increasing; }
  const std::string& label() const noexcept { return label_; }

  /// Closed sweep range inside I (see Interval::working_range).
  std::pair<double, double> working_range() const { return domain_.working_range(); }

  /// Open image of the working range, J = f([a, b]).
  Interval image() const;

  /// Solves f(x) = y over the whole domain to machine precision.
  double inverse_value(double y) const;

  /// Solves f(x) = y on the closed bracket [a, b].
  double inverse_value(double y, double a, double b) const;

  /// A f + B (A != 0).
  GeneratorFunction affine(double scale, double shift) const;

  /// g = f^{-1} on image(), with g' = 1/f'(g) and g'' = -f''(g)/f'(g)^3.
  GeneratorFunction inverse_function() const;

 private:
  GeneratorFunction(JetFn jet, Interval domain, std::string label, Direction direction)
      : jet_(std::move(jet)), domain_(domain), label_(std::move(label)), direction_(direction) {}

  JetFn jet_;
  Interval domain_;
  std::string label_;
  Direction direction_ = Direction::increasing;
};

}  // namespace fpot
