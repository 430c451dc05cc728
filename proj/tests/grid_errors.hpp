#pragma once

#include <algorithm>
#include <cmath>

#include "feller/oracle/grid.hpp"
#include "test_support.hpp"

namespace feller::testing {

struct GridErrors {
  double resolvent = 0, exit_law = 0, excessive = 0;
};

// Relative sup-norm errors of the grid model against the closed forms at the
// grid nodes. Nodes at infinity are skipped for the excessive function.
inline GridErrors grid_errors(const ComponentProcess& c, std::size_t n, double lambda) {
  const oracle::GridModel m = oracle::discretize_component(c, n);
  const SiteFunction g = feller::testing::smooth_g();
  const Eigen::VectorXd R = oracle::matrix_resolvent(m, m.sample(g), lambda);
  std::vector<Point> pts;
  for (const Site& s : m.nodes) pts.push_back(s.point);
  const std::vector<double> cf = c.resolvent(restrict_to(g, 0), lambda, pts);
  GridErrors e;
  double sR = 0, sL = 0, sP = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    e.resolvent = std::max(e.resolvent, std::abs(cf[i] - R(Eigen::Index(i))));
    sR = std::max(sR, std::abs(cf[i]));
  }
  for (std::size_t j = 0; j < c.gate_count(); ++j) {
    const Eigen::VectorXd L = oracle::discrete_exit_law(m, j, lambda);
    const Eigen::VectorXd P = oracle::discrete_excessive(m, j);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double l = c.exit_law(j, lambda, pts[i]);
      e.exit_law = std::max(e.exit_law, std::abs(l - L(Eigen::Index(i))));
      sL = std::max(sL, std::abs(l));
      if (std::isinf(pts[i].x)) continue;
      const double phi = c.excessive(j, pts[i]);
      e.excessive = std::max(e.excessive, std::abs(phi - P(Eigen::Index(i))));
      sP = std::max(sP, std::abs(phi));
    }
  }
  e.resolvent /= sR;
  if (sL > 0) e.exit_law /= sL;
  if (sP > 0) e.excessive /= sP;
  return e;
}

}  // namespace feller::testing
