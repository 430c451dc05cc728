#pragma once

#include <cmath>
#include <sstream>

#include "feller/components/component.hpp"
#include "feller/components/kernels.hpp"

namespace feller {

// Boundary condition a f''(0) - b f'(0) + c f(0) = 0 at the origin of the
// compactified half line [0, inf]; the point at infinity is absorbing.
struct HalfLineParams {
  double a = 0.0;
  double b = 1.0;
  double c = 0.0;
};

class HalfLine final : public ComponentProcess {
 public:
  explicit HalfLine(HalfLineParams p, QuadratureOptions opt = {})
      : p_(p), opt_(opt), space_(StateSpace::half_line()) {
    require(p.a >= 0 && p.b >= 0 && p.c >= 0, ErrorKind::invalid_argument, "half line: a, b, c must be nonnegative");
    // a = b = 0 with c > 0 is the Dirichlet condition f(0) = 0 (killing at the
    // first visit to 0); only a = b = c = 0 leaves the origin unspecified.
    require(p.a + p.b > 0 || p.c > 0, ErrorKind::invalid_argument,
            "half line: a + b must be positive unless c > 0 (Dirichlet condition)");
  }

  const HalfLineParams& params() const { return p_; }

  ComponentKind kind() const override { return ComponentKind::half_line; }
  std::string describe() const override {
    std::ostringstream os;
    os << "half_line(a=" << p_.a << ", b=" << p_.b << ", c=" << p_.c << ")";
    return os.str();
  }
  const StateSpace& space() const override { return space_; }
  std::size_t gate_count() const override { return p_.c > 0 ? 1 : 0; }
  std::string gate_label(std::size_t) const override { return "origin"; }

  std::vector<double> resolvent(const PointFunction& g, double lambda, const std::vector<Point>& xs) const override {
    check_lambda(lambda);
    const double k = std::sqrt(2 * lambda);
    auto gs = [&](double y) { return g(Point{0, y}); };
    const double g0 = g(Point{0, 0.0});
    const double h0 = detail::right_convolution(gs, k, 0.0, kInf, opt_) / k;
    const double D = ((p_.b * k - 2 * p_.a * lambda - p_.c) * h0 + 2 * p_.a * g0) /
                     (2 * p_.a * lambda + p_.b * k + p_.c);
    std::vector<double> out;
    out.reserve(xs.size());
    for (const Point& x : xs) {
      space_.require_contains(x);
      if (std::isinf(x.x)) {
        out.push_back(g(Point{0, kInf}) / lambda);
        continue;
      }
      out.push_back(detail::free_green(gs, k, 0.0, kInf, x.x, opt_) + D * std::exp(-k * x.x));
    }
    return out;
  }

  double exit_law(std::size_t gate, double lambda, const Point& x) const override {
    check_gate(gate);
    check_lambda(lambda);
    space_.require_contains(x);
    const double k = std::sqrt(2 * lambda);
    if (std::isinf(x.x)) return 0.0;
    return p_.c / (2 * p_.a * lambda + p_.b * k + p_.c) * std::exp(-k * x.x);
  }

  // The single exit is certain from every finite point. At x = inf the
  // pointwise lambda -> 0 limit of the exit law is 0, but 1_S is the excessive
  // function that reproduces the exit law.
  double excessive(std::size_t gate, const Point& x) const override {
    check_gate(gate);
    space_.require_contains(x);
    return 1.0;
  }

 private:
  HalfLineParams p_;
  QuadratureOptions opt_;
  StateSpace space_;
};

}  // namespace feller
