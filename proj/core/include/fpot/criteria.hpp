#pragma once

// Convexity criteria for f-potentials.
//
//   h(x) = f'(x) / f''(x)              on I
//   H(f(x)) = f'(x)^2 / f''(x)         on J = f(I)
//
// lambda_f is convex iff h is positive and concave, concave iff h is negative
// and convex. Combined with the monotonicity of f this gives four types:
//   a: f increasing, convex, h concave  -> lambda convex
//   b: f decreasing, concave, h concave -> lambda convex
//   c: f decreasing, convex, h convex   -> lambda concave
//   d: f increasing, concave, h convex  -> lambda concave

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fpot/function.hpp"
#include "fpot/numerics.hpp"

namespace fpot {

enum class CurvatureTag { convex, concave, affine, neither, inconclusive };
enum class HSign { positive, negative, zero, mixed, inconclusive };
enum class PotentialType { a, b, c, d, linear, neither, inconclusive };

const char* to_string(CurvatureTag t) noexcept;
const char* to_string(HSign s) noexcept;
const char* to_string(PotentialType t) noexcept;

bool is_convex_type(PotentialType t) noexcept;   // a, b
bool is_concave_type(PotentialType t) noexcept;  // c, d

/// theta fn(x0) + (1 - theta) fn(x1) - fn(theta x0 + (1 - theta) x1).
/// Negative values refute convexity, positive values refute concavity.
struct JensenWitness {
  double x0 = 0.0;
  double x1 = 0.0;
  double theta = 0.5;
  double defect = 0.0;
};

double jensen_defect(const ScalarFn& fn, double x0, double x1, double theta);

struct Curvature {
  CurvatureTag tag = CurvatureTag::inconclusive;
  std::optional<JensenWitness> convexity_violation;
  std::optional<JensenWitness> concavity_violation;

  bool admits_convex() const noexcept {
    return tag == CurvatureTag::convex || tag == CurvatureTag::affine;
  }
  bool admits_concave() const noexcept {
    return tag == CurvatureTag::concave || tag == CurvatureTag::affine;
  }
};

/// Grid second differences on grid_n points plus 4 grid_n random Jensen
/// triples. A defect counts when it exceeds the band
/// decision_band * (|f(x0)| + |f(x1)| + |f(xm)|) + abs_tol; verdicts need a
/// defect beyond four bands, while defects between one and four bands in the
/// forbidden direction make the verdict inconclusive.
Curvature curvature_classify(const ScalarFn& fn, const Interval& domain, std::size_t grid_n,
                             const Tolerance& tol = {}, std::uint64_t seed = 0x5eed);

/// f'/f''; +-inf (sign of f') when |f''| <= decision_band |f'| / max(1, |x|).
/// Throws MonotonicityError when f'(x) vanishes.
double compute_h(const GeneratorFunction& f, double x, const Tolerance& tol = {});

/// H(y) = f'(x)^2 / f''(x) at x = f^{-1}(y), infinities as for compute_h.
/// Throws OutOfRangeError when y is not attained.
double compute_H(const GeneratorFunction& f, double y, const Tolerance& tol = {});

struct ClassificationReport {
  std::string function_label;
  Interval domain = Interval::real_line();
  Direction f_direction = Direction::increasing;
  Curvature f_curvature;
  HSign h_sign = HSign::inconclusive;
  Curvature h_curvature;
  PotentialType potential_type = PotentialType::inconclusive;
  std::vector<double> grid;
  std::size_t grid_n = 0;
  Tolerance tolerance;

  /// "convex", "concave", "linear", "neither" or "inconclusive".
  std::string potential_verdict() const;
  nlohmann::json to_json() const;
};

ClassificationReport classify_potential(const GeneratorFunction& f, std::size_t grid_n = 64,
                                        const Tolerance& tol = {});

/// max |H'(f(x)) - h'(x) - 1| over grid_n points of the central 90% of the
/// working range, both derivatives by central differences.
/// Throws NotApplicableError for affine generators.
double derivative_identity_residual(const GeneratorFunction& f, std::size_t grid_n = 64,
                                    const Tolerance& tol = {});

struct DualClassification {
  PotentialType type_f = PotentialType::inconclusive;
  PotentialType type_g = PotentialType::inconclusive;
  bool inconclusive = false;
  bool pairing_ok = false;
  /// max |H_f(y) + g'(y)/g''(y)| over the image grid (0 for affine f).
  double duality_residual = 0.0;
};

/// Classifies lambda_f and lambda_g for g = f^{-1}. Admissible pairs:
/// (a,d), (d,a), (b,b), (c,c), (linear,linear).
DualClassification dual_classify(const GeneratorFunction& f, std::size_t grid_n = 64,
                                 const Tolerance& tol = {});

bool admissible_dual_pair(PotentialType f, PotentialType g) noexcept;

struct SuperadditivityResult {
  /// min over trials of s (H(y) - p0 H(y0) - p1 H(y1)), s = +1 for convex f
  /// (H concave) and -1 for concave f (H convex).
  double worst = kInf;
  double y0 = 0.0;
  double y1 = 0.0;
  double p0 = 0.0;
};

/// Two-point Jensen check of H on random (y0, y1, p0) with y_i images of the
/// central 80% of the working range. Throws NotApplicableError if f is affine
/// or has no definite curvature.
SuperadditivityResult h_superadditivity(const GeneratorFunction& f, std::size_t trials,
                                        std::uint64_t seed, const Tolerance& tol = {});

}  // namespace fpot
