#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "feller/averaging/families.hpp"
#include "feller/components/interval.hpp"
#include "feller/numerics/extrapolation.hpp"

namespace feller::testing {

struct LimitCase {
  std::string name;
  double numeric;
  double closed;
};

// Limits of the interval determinants, extrapolated numerically and paired
// with their closed forms. Small-rate limits use the default sqrt-rate
// exponents; eps-limits are power series in eps.
inline std::vector<LimitCase> determinant_limit_cases() {
  const WentzelIntervalParams p{0.3, 0.6, 1.2, 0.7, 1.5};
  const double x = 0.4, lam = 0.8;
  const std::vector<double> eps_exponents{1.0, 2.0, 3.0};
  auto lim0 = [](auto f) { return limit_at_zero(f).value; };
  auto lim_eps = [&](auto f) { return limit_at_zero(f, 6, 16, eps_exponents).value; };
  auto scaled = [&](double e) {
    WentzelIntervalParams s = p;
    s.c *= e;
    s.d *= e;
    return s;
  };
  const double k = std::sqrt(2 * lam);
  const double M = detail::interval_m(p);

  std::vector<LimitCase> out;
  out.push_back({"-W/sqrt(2l), l->0",
                 lim0([&](double l) { return -interval_coefficients(p, l).W / std::sqrt(2 * l); }),
                 2 * p.c * p.d * p.r + 2 * (1 - p.q) * p.c + 2 * (1 - p.p) * p.d});
  out.push_back({"-W1/sqrt(2l), l->0",
                 lim0([&](double l) { return -interval_minors(p, l, x).W1 / std::sqrt(2 * l); }),
                 2 * p.d * (p.r - x) + 2 * (1 - p.q)});
  out.push_back({"-W2/sqrt(2l), l->0",
                 lim0([&](double l) { return -interval_minors(p, l, x).W2 / std::sqrt(2 * l); }),
                 2 * p.c * x + 2 * (1 - p.p)});
  out.push_back({"W/eps^1.5, eps->0",
                 lim_eps([&](double e) { return interval_coefficients(scaled(e), e * lam).W / std::pow(e, 1.5); }),
                 -2 * k * (2 * lam * M + p.c * (1 - p.q) + p.d * (1 - p.p))});
  out.push_back({"W1/eps^0.5, eps->0",
                 lim_eps([&](double e) { return interval_minors(scaled(e), e * lam, x).W1 / std::sqrt(e); }),
                 -2 * k * (1 - p.q)});
  out.push_back({"W2/eps^0.5, eps->0",
                 lim_eps([&](double e) { return interval_minors(scaled(e), e * lam, x).W2 / std::sqrt(e); }),
                 -2 * k * (1 - p.p)});
  WentzelIntervalParams reflecting = p;
  reflecting.d = 0;
  out.push_back({"(a21+a22)/(4l), d=0, l->0",
                 lim0([&](double l) {
                   const auto a = interval_coefficients(reflecting, l);
                   return (a.a21 + a.a22) / (4 * l);
                 }),
                 p.q + (1 - p.q) * p.r});
  out.push_back({"(a21+a22)/(2eps), eps->0",
                 lim_eps([&](double e) {
                   const auto a = interval_coefficients(scaled(e), e * lam);
                   return (a.a21 + a.a22) / (2 * e);
                 }),
                 2 * lam * p.q + p.d + 2 * lam * (1 - p.q) * p.r});
  return out;
}

}  // namespace feller::testing
