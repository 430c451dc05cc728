#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "feller/concat/system.hpp"

namespace feller {

// Forwards everything to a base component except one exit law, which is
// replaced by min(1, (1 + eps) l). The result is no longer an exit law of the
// base resolvent.
class PerturbedExitLaw final : public ComponentProcess {
 public:
  PerturbedExitLaw(ComponentPtr base, std::size_t gate, double eps) : base_(std::move(base)), gate_(gate), eps_(eps) {
    require(gate_ < base_->gate_count(), ErrorKind::no_gate, "perturbed gate does not exist");
  }

  ComponentKind kind() const override { return ComponentKind::perturbed; }
  std::string describe() const override { return "perturbed(" + base_->describe() + ")"; }
  const StateSpace& space() const override { return base_->space(); }
  std::size_t gate_count() const override { return base_->gate_count(); }
  std::vector<double> resolvent(const PointFunction& g, double lambda, const std::vector<Point>& xs) const override {
    return base_->resolvent(g, lambda, xs);
  }
  double exit_law(std::size_t gate, double lambda, const Point& x) const override {
    const double l = base_->exit_law(gate, lambda, x);
    return gate == gate_ ? std::clamp((1 + eps_) * l, 0.0, 1.0) : l;
  }
  double excessive(std::size_t gate, const Point& x) const override { return base_->excessive(gate, x); }

 private:
  ComponentPtr base_;
  std::size_t gate_;
  double eps_;
};

// Sup over grid(n) of |(lambda - mu) R_mu R_lambda g - (R_mu g - R_lambda g)|.
inline double concat_hilbert_residual(const ConcatSystem& sys, const SiteFunction& g, double lambda, double mu,
                                      std::size_t n) {
  const std::vector<Site> grid = sys.grid(n);
  const std::vector<double> rl = sys.solve(g, lambda).values(grid);
  const std::vector<double> rm = sys.solve(g, mu).values(grid);
  const SiteFunction lifted = sys.interpolate(n, rl);
  const std::vector<double> rmrl = sys.solve(lifted, mu).values(grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    worst = std::max(worst, std::abs((lambda - mu) * rmrl[i] - (rm[i] - rl[i])));
  return worst;
}

// Hilbert residual of the family obtained by perturbing the exit law of
// `which` by the factor (1 + eps), clipped to [0, 1].
inline double perturbed_law_negative_test(const ConcatSystem& sys, double lambda, double mu, double eps,
                                          GateRef which, const SiteFunction& g, std::size_t n = 64) {
  ComponentPtr base = sys.components().at(which.component);
  ConcatSystem perturbed =
      sys.with_component(which.component, std::make_shared<PerturbedExitLaw>(base, which.gate, eps));
  return concat_hilbert_residual(perturbed, g, lambda, mu, n);
}

}  // namespace feller
