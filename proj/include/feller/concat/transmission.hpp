#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "feller/components/interval.hpp"
#include "feller/concat/system.hpp"

namespace feller {

struct TransmissionRow {
  std::size_t component = 0;
  std::string end;        // "left" or "right"
  double functional = 0;  // F(R^co g) by one-sided differences
  double target = 0;      // c * int R^co g dp (0 at closed ends)
  double relative_residual = 0;
};

struct TransmissionReport {
  std::vector<TransmissionRow> rows;
  double max_relative_residual = 0.0;
};

// Evaluates the boundary functionals of every interval component on R^co g
// with second-order one-sided stencils of step r / n and compares them with
// the non-local right-hand sides carried by the routing measures.
inline TransmissionReport check_transmission_conditions(const ConcatSystem& sys, const SiteFunction& g, double lambda,
                                                        std::size_t n = 256) {
  for (std::size_t i = 0; i < sys.component_count(); ++i) {
    const ComponentProcess& c = sys.component(i);
    if (c.kind() != ComponentKind::interval && c.gate_count() > 0)
      throw Error(ErrorKind::unsupported, "transmission check is defined for interval components only; got " + c.describe());
  }
  const ConcatSolution sol = sys.solve(g, lambda);
  TransmissionReport rep;
  for (std::size_t i = 0; i < sys.component_count(); ++i) {
    const ComponentProcess& c = sys.component(i);
    if (c.kind() != ComponentKind::interval) continue;
    const auto& iv = static_cast<const WentzelInterval&>(c);
    const WentzelIntervalParams& p = iv.params();
    const double h = p.r / double(n);
    for (auto end : {WentzelInterval::End::left, WentzelInterval::End::right}) {
      const bool left = end == WentzelInterval::End::left;
      std::vector<Point> xs;
      for (int m = 0; m < 4; ++m) xs.push_back({0, left ? m * h : p.r - m * h});
      const std::vector<double> f = sol.values(i, xs);
      // derivative towards the interior; the right end flips sign
      const double d1 = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h);
      const double d2 = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / (h * h);
      const double w = left ? p.p : p.q;
      const double coef = left ? p.c : p.d;
      const double F = left ? w * d2 - (1 - w) * d1 + coef * f[0] : w * d2 + (1 - w) * (-d1) + coef * f[0];
      double target = 0.0;
      const std::size_t gate = iv.gate_at(end);
      if (gate < iv.gate_count()) {
        const RoutingMeasure& m = sys.measure(sys.gate_index({i, gate}));
        target = coef * m.integrate([&](const Site& s) { return sol.value(s); });
      }
      const double scale =
          std::max({std::abs(target), std::abs(coef * f[0]), std::abs((1 - w) * d1), std::abs(w * d2), 1e-300});
      TransmissionRow row{i, left ? "left" : "right", F, target, std::abs(F - target) / scale};
      rep.max_relative_residual = std::max(rep.max_relative_residual, row.relative_residual);
      rep.rows.push_back(row);
    }
  }
  return rep;
}

}  // namespace feller
