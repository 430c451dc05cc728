#pragma once

#include <sstream>

#include "feller/components/component.hpp"

namespace feller {

// Finitely many points, each a trap: R_lambda g = g / lambda.
class AbsorbingPoints final : public ComponentProcess {
 public:
  explicit AbsorbingPoints(std::size_t n = 2) : space_(StateSpace::absorbing_points(n)) {}

  ComponentKind kind() const override { return ComponentKind::absorbing_points; }
  std::string describe() const override {
    std::ostringstream os;
    os << "absorbing(points=" << space_.edge_count() << ")";
    return os.str();
  }
  const StateSpace& space() const override { return space_; }
  std::size_t gate_count() const override { return 0; }

  std::vector<double> resolvent(const PointFunction& g, double lambda, const std::vector<Point>& xs) const override {
    check_lambda(lambda);
    std::vector<double> out;
    out.reserve(xs.size());
    for (const Point& x : xs) {
      space_.require_contains(x);
      out.push_back(g(x) / lambda);
    }
    return out;
  }

  double exit_law(std::size_t gate, double, const Point&) const override {
    check_gate(gate);
    return 0.0;
  }
  double excessive(std::size_t gate, const Point&) const override {
    check_gate(gate);
    return 0.0;
  }

 private:
  StateSpace space_;
};

}  // namespace feller
