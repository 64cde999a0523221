#pragma once

// Reconstruction of a generator from a prescribed h = f'/f'':
//
//   f(x) = A * int_{x0}^{x} exp( int_{x0}^{s} du / h(u) ) ds + B
//
// Both integrals are tabulated once on adaptive nodes and interpolated with
// exact-slope monotone cubics, so evaluation costs a table lookup.

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "fpot/expr.hpp"
#include "fpot/function.hpp"
#include "fpot/interpolation.hpp"
#include "fpot/numerics.hpp"

namespace fpot {

enum class Sign { positive, negative };

const char* to_string(Sign s) noexcept;

/// Nonvanishing h on an interval. The sign is checked on a 257-point grid of
/// the working range; a zero, a non-finite value or a sign change throws
/// SingularHError with the offending abscissa.
class HSpec {
 public:
  static constexpr std::size_t kCheckPoints = 257;

  HSpec(Expr body, Interval domain, std::optional<Sign> expected_sign = std::nullopt);

  static HSpec from_expression(std::string_view source, Interval domain,
                               std::optional<Sign> expected_sign = std::nullopt);

  /// Throws SingularHError if h vanishes, is not finite or has the wrong sign at x.
  double operator()(double x) const;

  const Expr& body() const noexcept { return body_; }
  const Interval& domain() const noexcept { return domain_; }
  Sign sign() const noexcept { return sign_; }

 private:
  Expr body_;
  Interval domain_;
  Sign sign_ = Sign::positive;
};

/// Midpoint of the working range for bounded domains, otherwise 0 clamped into it.
double default_x0(const Interval& domain);

struct GeneratorParams {
  std::optional<double> x0;
  double A = 1.0;
  double B = 0.0;
};

class GeneratedF {
 public:
  static constexpr std::size_t kNodeBudget = 100000;

  const HSpec& h() const noexcept { return state_->h; }
  double x0() const noexcept { return state_->x0; }
  double A() const noexcept { return state_->A; }
  double B() const noexcept { return state_->B; }

  /// Range actually tabulated: the h domain pulled in by the endpoint margin.
  Interval table_range() const { return Interval(state_->lo, state_->hi); }
  std::size_t inner_nodes() const noexcept { return state_->inner.size(); }
  std::size_t outer_nodes() const noexcept { return state_->outer.size(); }

  /// f, f' = A exp(I(x)), f'' = f'/h. Throws DomainError outside table_range().
  Jet2 jet(double x) const;
  double value(double x) const { return jet(x).value; }

  /// The generated f as a GeneratorFunction on table_range().
  GeneratorFunction function() const;

  /// max |r(x) - h(x)| / |h(x)| over grid_n points of the central 95% of the
  /// table range, where r = f'/f'' with f' a central difference of the f
  /// values and f'' a central difference of f'.
  double roundtrip_error(std::size_t grid_n = 64) const;

 private:
  struct State {
    HSpec h;
    double x0;
    double A;
    double B;
    double lo;
    double hi;
    MonotoneCubic inner;  // I(s) = int_{x0}^{s} du / h(u)
    QuinticHermite outer;  // F(x) = int_{x0}^{x} exp(I(s)) ds
  };

  explicit GeneratedF(std::shared_ptr<const State> state) : state_(std::move(state)) {}

  friend GeneratedF generate_f(const HSpec& h, const GeneratorParams& params,
                               const Tolerance& tol);

  std::shared_ptr<const State> state_;
};

/// Throws InputError for A == 0 or x0 outside the domain, SingularHError if h
/// vanishes or changes sign, AccuracyError if the tables exceed the node budget.
GeneratedF generate_f(const HSpec& h, const GeneratorParams& params = {},
                      const Tolerance& tol = {});

double roundtrip_h(const HSpec& h, const GeneratorParams& params = {}, std::size_t grid_n = 64,
                   const Tolerance& tol = {});

}  // namespace fpot
