#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include "feller/numerics/quadrature.hpp"

// Exponential convolutions on a segment [a, b]. The substitution
// u = exp(-k |x - y|) turns e^{-k|x-y|} dy into du / k, so constants are
// integrated exactly and large k does not produce a narrow peak.
namespace feller::detail {

using ScalarFunction = std::function<double(double)>;

// int_a^x e^{-k(x-y)} g(y) dy
inline double left_convolution(const ScalarFunction& g, double k, double a, double x,
                               const QuadratureOptions& opt) {
  if (x <= a) return 0.0;
  const double u0 = std::exp(-k * (x - a));
  QuadratureOptions o = opt;
  o.tol = opt.tol * k;
  auto f = [&](double u) { return g(u <= 0.0 ? a : std::max(a, x + std::log(u) / k)); };
  return integrate(f, u0, 1.0, o) / k;
}

// int_x^b e^{-k(y-x)} g(y) dy, b may be +infinity
inline double right_convolution(const ScalarFunction& g, double k, double x, double b,
                                const QuadratureOptions& opt) {
  if (x >= b) return 0.0;
  const double u0 = std::isinf(b) ? 0.0 : std::exp(-k * (b - x));
  QuadratureOptions o = opt;
  o.tol = opt.tol * k;
  auto f = [&](double u) { return g(u <= 0.0 ? b : std::min(b, x - std::log(u) / k)); };
  return integrate(f, u0, 1.0, o) / k;
}

// (1/k) int_a^b e^{-k|x-y|} g(y) dy, the free-space Green's function of lambda - d^2/2dx^2
inline double free_green(const ScalarFunction& g, double k, double a, double b, double x,
                         const QuadratureOptions& opt) {
  return (left_convolution(g, k, a, x, opt) + right_convolution(g, k, x, b, opt)) / k;
}

}  // namespace feller::detail
