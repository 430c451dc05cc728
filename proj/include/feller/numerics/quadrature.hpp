#pragma once

#include <cmath>
#include <cstddef>
#include <sstream>

#include "feller/core/error.hpp"

namespace feller {

struct QuadratureOptions {
  double tol = 1e-10;  // absolute
  int max_depth = 48;
  int min_depth = 3;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;   // sum of |S2 - S1| / 15 over leaves that hit max_depth
  std::size_t evaluations = 0;
  bool converged = true;
};

namespace detail {

struct SimpsonState {
  double unresolved = 0.0;
  std::size_t evaluations = 0;
};

template <class F>
double simpson_step(F& f, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth, const QuadratureOptions& opt, SimpsonState& st) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  st.evaluations += 2;
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth >= opt.min_depth && std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth >= opt.max_depth || !(lm > a && m > lm && rm > m && b > rm)) {
    st.unresolved += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, opt, st) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, opt, st);
}

}  // namespace detail

template <class F>
QuadratureResult adaptive_simpson(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
  QuadratureResult res;
  if (a == b) return res;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  detail::SimpsonState st;
  st.evaluations = 3;
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  res.value = detail::simpson_step(f, a, b, fa, fm, fb, whole, opt.tol, 0, opt, st);
  res.error_estimate = st.unresolved;
  res.evaluations = st.evaluations;
  res.converged = st.unresolved <= opt.tol;
  return res;
}

// Throwing front end used by the closed forms.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
  QuadratureResult r = adaptive_simpson(f, a, b, opt);
  if (!r.converged || !std::isfinite(r.value)) {
    std::ostringstream os;
    os << "adaptive Simpson did not reach tol " << opt.tol << " on [" << a << ", " << b
       << "]; achieved error estimate " << r.error_estimate << " after " << r.evaluations
       << " evaluations";
    throw Error(ErrorKind::quadrature, os.str());
  }
  return r.value;
}

}  // namespace feller
