#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "feller/core/error.hpp"

namespace feller {

// Stehfest weights V_1..V_{2N}.
inline std::vector<double> stehfest_weights(int order) {
  require(order >= 1, ErrorKind::invalid_argument, "Gaver-Stehfest order must be positive");
  require(order <= 9, ErrorKind::invalid_argument,
          "Gaver-Stehfest order > 9 loses all accuracy in double precision");
  auto fact = [](int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  const int N = order;
  std::vector<double> V(2 * N);
  for (int k = 1; k <= 2 * N; ++k) {
    double s = 0.0;
    for (int j = (k + 1) / 2; j <= std::min(k, N); ++j)
      s += std::pow(double(j), N) * fact(2 * j) / (fact(N - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k));
    V[k - 1] = ((k + N) % 2 == 0 ? 1.0 : -1.0) * s;
  }
  return V;
}

// f(t) ~ (ln 2 / t) sum_k V_k F(k ln 2 / t). Accurate to roughly 1e-6 for
// smooth completely monotone transforms known to about 1e-14.
inline double invert_laplace(const std::function<double(double)>& F, double t, int order = 7) {
  require(t > 0, ErrorKind::invalid_argument, "Laplace inversion needs t > 0");
  const std::vector<double> V = stehfest_weights(order);
  const double a = std::log(2.0) / t;
  double s = 0.0;
  for (std::size_t k = 0; k < V.size(); ++k) s += V[k] * F(double(k + 1) * a);
  return a * s;
}

}  // namespace feller
