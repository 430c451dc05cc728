#pragma once

#include <sstream>

#include "feller/components/component.hpp"

namespace feller {

// Time-accelerated component: generator eps^{-1} A_base, where the base is
// already built with eps-scaled boundary coefficients. Its resolvent is
// eps R^base_{eps lambda} and its exit laws are those of the base at
// eps lambda.
class Accelerated final : public ComponentProcess {
 public:
  Accelerated(ComponentPtr base, double eps) : base_(std::move(base)), eps_(eps) {
    require(base_ != nullptr, ErrorKind::invalid_argument, "accelerated: base component missing");
    require(eps > 0 && eps <= 1, ErrorKind::invalid_argument, "accelerated: eps must lie in (0, 1]");
  }

  const ComponentProcess& base() const { return *base_; }
  double eps() const { return eps_; }

  ComponentKind kind() const override { return ComponentKind::accelerated; }
  std::string describe() const override {
    std::ostringstream os;
    os << "accelerated(eps=" << eps_ << ", " << base_->describe() << ")";
    return os.str();
  }
  const StateSpace& space() const override { return base_->space(); }
  std::size_t gate_count() const override { return base_->gate_count(); }
  std::string gate_label(std::size_t j) const override { return base_->gate_label(j); }
  bool non_unique_representation() const override { return base_->non_unique_representation(); }

  std::vector<double> resolvent(const PointFunction& g, double lambda, const std::vector<Point>& xs) const override {
    check_lambda(lambda);
    std::vector<double> v = base_->resolvent(g, eps_ * lambda, xs);
    for (double& x : v) x *= eps_;
    return v;
  }
  double exit_law(std::size_t gate, double lambda, const Point& x) const override {
    check_lambda(lambda);
    return base_->exit_law(gate, eps_ * lambda, x);
  }
  double excessive(std::size_t gate, const Point& x) const override { return base_->excessive(gate, x); }

 private:
  ComponentPtr base_;
  double eps_;
};

}  // namespace feller
