#pragma once

#include <cmath>
#include <sstream>

#include "feller/components/component.hpp"
#include "feller/components/kernels.hpp"

namespace feller {

// Unit-speed motion to the right on [0, 1]; at x = 1 the particle waits an
// exponential time with rate alpha and is then killed.
class Transport final : public ComponentProcess {
 public:
  explicit Transport(double alpha, QuadratureOptions opt = {})
      : alpha_(alpha), opt_(opt), space_(StateSpace::transport()) {
    require(alpha >= 0 && std::isfinite(alpha), ErrorKind::invalid_argument, "transport: alpha must be nonnegative");
  }

  double alpha() const { return alpha_; }

  ComponentKind kind() const override { return ComponentKind::transport; }
  std::string describe() const override {
    std::ostringstream os;
    os << "transport(alpha=" << alpha_ << ")";
    return os.str();
  }
  const StateSpace& space() const override { return space_; }
  std::size_t gate_count() const override { return alpha_ > 0 ? 1 : 0; }
  std::string gate_label(std::size_t) const override { return "right end"; }

  std::vector<double> resolvent(const PointFunction& g, double lambda, const std::vector<Point>& xs) const override {
    check_lambda(lambda);
    auto gs = [&](double y) { return g(Point{0, y}); };
    const double g1 = g(Point{0, 1.0});
    std::vector<double> out;
    out.reserve(xs.size());
    for (const Point& x : xs) {
      space_.require_contains(x);
      out.push_back(detail::right_convolution(gs, lambda, x.x, 1.0, opt_) +
                    std::exp(lambda * (x.x - 1)) * g1 / (lambda + alpha_));
    }
    return out;
  }

  double exit_law(std::size_t gate, double lambda, const Point& x) const override {
    check_gate(gate);
    check_lambda(lambda);
    space_.require_contains(x);
    return std::exp(lambda * (x.x - 1)) * alpha_ / (lambda + alpha_);
  }

  double excessive(std::size_t gate, const Point& x) const override {
    check_gate(gate);
    space_.require_contains(x);
    return 1.0;
  }

 private:
  double alpha_;
  QuadratureOptions opt_;
  StateSpace space_;
};

}  // namespace feller
