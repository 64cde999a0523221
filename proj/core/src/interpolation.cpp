#include "fpot/interpolation.hpp"

#include <algorithm>
#include <cmath>

#include "fpot/error.hpp"

namespace fpot {

MonotoneCubic::MonotoneCubic(std::vector<double> xs, std::vector<double> ys,
                             std::vector<double> slopes)
    : xs_(std::move(xs)), ys_(std::move(ys)), ms_(std::move(slopes)) {
  const std::size_t n = xs_.size();
  if (n < 2 || ys_.size() != n || ms_.size() != n) {
    throw InputError("interpolation table needs >= 2 nodes with matching values and slopes");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(xs_[i] > xs_[i - 1])) {
      throw InputError("interpolation nodes must be strictly increasing");
    }
  }
  // Fritsch-Carlson filter.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double delta = (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);
    if (delta == 0.0) {
      ms_[i] = 0.0;
      ms_[i + 1] = 0.0;
      continue;
    }
    if (ms_[i] / delta < 0.0) {
      ms_[i] = 0.0;
    }
    if (ms_[i + 1] / delta < 0.0) {
      ms_[i + 1] = 0.0;
    }
    const double alpha = ms_[i] / delta;
    const double beta = ms_[i + 1] / delta;
    const double r = alpha * alpha + beta * beta;
    if (r > 9.0) {
      const double tau = 3.0 / std::sqrt(r);
      ms_[i] = tau * alpha * delta;
      ms_[i + 1] = tau * beta * delta;
    }
  }
}

std::size_t MonotoneCubic::segment(double x) const {
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  if (it == xs_.begin()) {
    return 0;
  }
  const auto idx = static_cast<std::size_t>(it - xs_.begin()) - 1;
  return std::min(idx, xs_.size() - 2);
}

double MonotoneCubic::hermite(double x0, double y0, double m0, double x1, double y1,
                              double m1, double x) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1;
}

double MonotoneCubic::hermite_slope(double x0, double y0, double m0, double x1, double y1,
                                    double m1, double x) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t;
  const double d00 = (6 * t2 - 6 * t) / h;
  const double d10 = 3 * t2 - 4 * t + 1;
  const double d01 = (-6 * t2 + 6 * t) / h;
  const double d11 = 3 * t2 - 2 * t;
  return d00 * y0 + d10 * m0 + d01 * y1 + d11 * m1;
}

double MonotoneCubic::operator()(double x) const {
  const std::size_t i = segment(x);
  return hermite(xs_[i], ys_[i], ms_[i], xs_[i + 1], ys_[i + 1], ms_[i + 1], x);
}

double MonotoneCubic::derivative(double x) const {
  const std::size_t i = segment(x);
  return hermite_slope(xs_[i], ys_[i], ms_[i], xs_[i + 1], ys_[i + 1], ms_[i + 1], x);
}

QuinticHermite::QuinticHermite(std::vector<double> xs, std::vector<double> ys,
                               std::vector<double> slopes, std::vector<double> curvatures)
    : xs_(std::move(xs)), ys_(std::move(ys)), ms_(std::move(slopes)), cs_(std::move(curvatures)) {
  const std::size_t n = xs_.size();
  if (n < 2 || ys_.size() != n || ms_.size() != n || cs_.size() != n) {
    throw InputError("interpolation table needs >= 2 nodes with matching derivative data");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(xs_[i] > xs_[i - 1])) {
      throw InputError("interpolation nodes must be strictly increasing");
    }
  }
}

Jet2 QuinticHermite::segment_jet(double x0, double y0, double m0, double c0, double x1,
                                 double y1, double m1, double c1, double x) {
  // p(t) = sum a_k t^k on t = (x - x0) / w, fixed by the six end conditions.
  const double w = x1 - x0;
  const double t = (x - x0) / w;
  const double a0 = y0;
  const double a1 = w * m0;
  const double a2 = 0.5 * w * w * c0;
  const double Y = y1 - (a0 + a1 + a2);
  const double M = w * m1 - (a1 + 2.0 * a2);
  const double C = w * w * c1 - 2.0 * a2;
  const double a3 = 10.0 * Y - 4.0 * M + 0.5 * C;
  const double a4 = -15.0 * Y + 7.0 * M - C;
  const double a5 = 6.0 * Y - 3.0 * M + 0.5 * C;
  const double v = a0 + t * (a1 + t * (a2 + t * (a3 + t * (a4 + t * a5))));
  const double d = a1 + t * (2.0 * a2 + t * (3.0 * a3 + t * (4.0 * a4 + t * 5.0 * a5)));
  const double dd = 2.0 * a2 + t * (6.0 * a3 + t * (12.0 * a4 + t * 20.0 * a5));
  return {v, d / w, dd / (w * w)};
}

Jet2 QuinticHermite::jet(double x) const {
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t i = it == xs_.begin() ? 0 : static_cast<std::size_t>(it - xs_.begin()) - 1;
  i = std::min(i, xs_.size() - 2);
  return segment_jet(xs_[i], ys_[i], ms_[i], cs_[i], xs_[i + 1], ys_[i + 1], ms_[i + 1],
                     cs_[i + 1], x);
}

}  // namespace fpot
