#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "feller/core/error.hpp"

namespace feller {

struct Extrapolated {
  double value = 0.0;
  double error_estimate = 0.0;
};

// Richardson elimination for samples v[m] = f(h_m), h_m = h_0 * ratio^m with
// 0 < ratio < 1, under the model f(h) = L + sum_i c_i h^{e_i}. Each exponent
// in turn is eliminated across neighbouring rows of the tableau.
inline Extrapolated richardson(const std::vector<double>& v, double ratio,
                               const std::vector<double>& exponents) {
  require(ratio > 0.0 && ratio < 1.0, ErrorKind::invalid_argument, "richardson: ratio must lie in (0,1)");
  require(v.size() > exponents.size() + 1, ErrorKind::invalid_argument,
          "richardson: need more samples than exponents + 1");
  std::vector<double> col = v;
  for (double e : exponents) {
    const double w = std::pow(ratio, e);
    std::vector<double> next(col.size() - 1);
    for (std::size_t m = 1; m < col.size(); ++m) next[m - 1] = (col[m] - w * col[m - 1]) / (1.0 - w);
    col = std::move(next);
  }
  Extrapolated out;
  out.value = col.back();
  out.error_estimate = std::abs(col.back() - col[col.size() - 2]);
  return out;
}

// Default rule for lambda -> 0+ limits: lambda_m = 2^-m, m = 6..16.
inline const std::vector<double>& small_lambda_exponents() {
  static const std::vector<double> e{0.5, 1.0, 1.5};
  return e;
}

inline Extrapolated limit_at_zero(const std::function<double(double)>& f, int m_first = 6,
                                  int m_last = 16,
                                  const std::vector<double>& exponents = small_lambda_exponents()) {
  std::vector<double> v;
  for (int m = m_first; m <= m_last; ++m) v.push_back(f(std::ldexp(1.0, -m)));
  return richardson(v, 0.5, exponents);
}

}  // namespace feller
