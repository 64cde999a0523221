#pragma once

// f-potentials (weighted quasi-arithmetic means) over finite distributions:
//
//   lambda_f(phi) = f^{-1}( sum_i p_i f(x_i) )
//
// together with their directional derivatives along simple functions psi, the
// density of the derivative measure, and the cumulant generating function.

#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fpot/function.hpp"

namespace fpot {

struct Atom {
  double x = 0.0;
  double p = 0.0;
};

/// Finite list of (value, probability) pairs; probabilities positive and
/// summing to one within 1e-12.
class WeightedDistribution {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit WeightedDistribution(std::vector<Atom> atoms);

  /// "x:p,x:p,..."
  static WeightedDistribution parse_inline(std::string_view text);
  /// JSON array of {"x": number, "p": number}.
  static WeightedDistribution from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  std::span<const Atom> atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  double min_value() const;
  double max_value() const;
  /// At least two distinct atom values.
  bool is_nondegenerate() const;

  /// Same probabilities, new values (one per atom).
  WeightedDistribution with_values(std::span<const double> values) const;
  /// Atomwise x_i + t * psi_i.
  WeightedDistribution shifted(std::span<const double> psi, double t) const;

 private:
  std::vector<Atom> atoms_;
};

/// lambda_f(phi). The result lies in [min x_i, max x_i].
/// Throws DomainError if an atom is outside the domain of f.
double eval_potential(const GeneratorFunction& f, const WeightedDistribution& dist);

/// rho_i = f'(x_i) / f'(lambda_f(phi)).
std::vector<double> derivative_density(const GeneratorFunction& f,
                                       const WeightedDistribution& dist);

struct DirectionalDerivatives {
  double first = 0.0;
  double second = 0.0;
};

/// First and second derivatives of t -> lambda_f(phi + t psi) at t = 0:
///   first  = sum p_i f'(x_i) psi_i / f'(L)
///   second = sum p_i f''(x_i) psi_i^2 / f'(L) - f''(L) (sum p_i f'(x_i) psi_i)^2 / f'(L)^3
/// with L = lambda_f(phi).
DirectionalDerivatives directional_derivatives(const GeneratorFunction& f,
                                               const WeightedDistribution& dist,
                                               std::span<const double> psi);

/// Gamma(t) = ln sum p_i exp(t x_i), evaluated with the largest exponent shifted out.
double cgf(const WeightedDistribution& dist, double t);

}  // namespace fpot
