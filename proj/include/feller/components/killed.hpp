#pragma once

#include <sstream>

#include "feller/components/component.hpp"

namespace feller {

// A conservative process killed at constant rate alpha: generator A - alpha.
class Killed final : public ComponentProcess {
 public:
  Killed(ComponentPtr base, double alpha) : base_(std::move(base)), alpha_(alpha) {
    require(base_ != nullptr, ErrorKind::invalid_argument, "killed: base component missing");
    require(base_->conservative(), ErrorKind::conservative_component,
            "killed wrapper needs a conservative base, got " + base_->describe());
    require(alpha > 0 && std::isfinite(alpha), ErrorKind::invalid_argument, "killed: alpha must be positive");
  }

  const ComponentProcess& base() const { return *base_; }
  const ComponentPtr& base_ptr() const { return base_; }
  double alpha() const { return alpha_; }

  ComponentKind kind() const override { return ComponentKind::killed; }
  std::string describe() const override {
    std::ostringstream os;
    os << "killed(alpha=" << alpha_ << ", " << base_->describe() << ")";
    return os.str();
  }
  const StateSpace& space() const override { return base_->space(); }
  std::size_t gate_count() const override { return 1; }
  std::string gate_label(std::size_t) const override { return "killing"; }

  std::vector<double> resolvent(const PointFunction& g, double lambda, const std::vector<Point>& xs) const override {
    check_lambda(lambda);
    return base_->resolvent(g, lambda + alpha_, xs);
  }

  double exit_law(std::size_t gate, double lambda, const Point& x) const override {
    check_gate(gate);
    check_lambda(lambda);
    space().require_contains(x);
    return alpha_ / (lambda + alpha_);
  }

  double excessive(std::size_t gate, const Point& x) const override {
    check_gate(gate);
    space().require_contains(x);
    return 1.0;
  }

 private:
  ComponentPtr base_;
  double alpha_;
};

}  // namespace feller
