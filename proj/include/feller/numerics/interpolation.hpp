#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "feller/core/error.hpp"

namespace feller {

// Piecewise cubic Hermite interpolant on a uniform grid. Nodal slopes come
// from fourth-order finite differences, so the interpolant is C^1 with an
// O(h^4) error for smooth data.
class UniformCubic {
 public:
  UniformCubic() = default;

  UniformCubic(double s0, double s1, std::vector<double> values)
      : s0_(s0), s1_(s1), y_(std::move(values)) {
    require(y_.size() >= 5, ErrorKind::invalid_argument, "cubic interpolation needs at least 5 nodes");
    h_ = (s1_ - s0_) / static_cast<double>(y_.size() - 1);
    slopes();
  }

  double operator()(double s) const {
    const std::size_t n = y_.size() - 1;
    double t = (s - s0_) / h_;
    t = std::clamp(t, 0.0, static_cast<double>(n));
    std::size_t i = static_cast<std::size_t>(std::floor(t));
    if (i >= n) i = n - 1;
    const double u = t - static_cast<double>(i);
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    const double h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u);
    const double h11 = u * u * (u - 1);
    return h00 * y_[i] + h10 * h_ * d_[i] + h01 * y_[i + 1] + h11 * h_ * d_[i + 1];
  }

  const std::vector<double>& values() const { return y_; }

 private:
  void slopes() {
    const std::size_t n = y_.size();
    d_.assign(n, 0.0);
    const double c = 1.0 / (12.0 * h_);
    auto& y = y_;
    d_[0] = c * (-25 * y[0] + 48 * y[1] - 36 * y[2] + 16 * y[3] - 3 * y[4]);
    d_[1] = c * (-3 * y[0] - 10 * y[1] + 18 * y[2] - 6 * y[3] + y[4]);
    for (std::size_t i = 2; i + 2 < n; ++i) d_[i] = c * (y[i - 2] - 8 * y[i - 1] + 8 * y[i + 1] - y[i + 2]);
    d_[n - 2] = c * (3 * y[n - 1] + 10 * y[n - 2] - 18 * y[n - 3] + 6 * y[n - 4] - y[n - 5]);
    d_[n - 1] = c * (25 * y[n - 1] - 48 * y[n - 2] + 36 * y[n - 3] - 16 * y[n - 4] + 3 * y[n - 5]);
  }

  double s0_ = 0.0, s1_ = 1.0, h_ = 1.0;
  std::vector<double> y_, d_;
};

}  // namespace feller
