#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fpot/jet.hpp"

namespace fpot {

/// Piecewise cubic Hermite interpolant through (x_i, y_i) with prescribed
/// node slopes, filtered by the Fritsch-Carlson conditions so that monotone
/// data yield a monotone interpolant.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  /// xs strictly increasing, at least two nodes.
  MonotoneCubic(std::vector<double> xs, std::vector<double> ys, std::vector<double> slopes);

  double operator()(double x) const;
  double derivative(double x) const;

  double lo() const noexcept { return xs_.front(); }
  double hi() const noexcept { return xs_.back(); }
  std::size_t size() const noexcept { return xs_.size(); }
  std::span<const double> nodes() const noexcept { return xs_; }

  /// Unfiltered Hermite value on one segment, used by adaptive table builders.
  static double hermite(double x0, double y0, double m0, double x1, double y1, double m1,
                        double x);
  static double hermite_slope(double x0, double y0, double m0, double x1, double y1,
                              double m1, double x);

 private:
  std::size_t segment(double x) const;

  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<double> ms_;
};

/// Piecewise quintic Hermite interpolant matching value, slope and second
/// derivative at every node, so the second derivative is continuous.
class QuinticHermite {
 public:
  QuinticHermite() = default;
  /// xs strictly increasing, at least two nodes.
  QuinticHermite(std::vector<double> xs, std::vector<double> ys, std::vector<double> slopes,
                 std::vector<double> curvatures);

  Jet2 jet(double x) const;
  double operator()(double x) const { return jet(x).value; }

  std::size_t size() const noexcept { return xs_.size(); }
  std::span<const double> nodes() const noexcept { return xs_; }

  /// Value, slope and second derivative of one segment at x.
  static Jet2 segment_jet(double x0, double y0, double m0, double c0, double x1, double y1,
                          double m1, double c1, double x);

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<double> ms_;
  std::vector<double> cs_;
};

}  // namespace fpot
