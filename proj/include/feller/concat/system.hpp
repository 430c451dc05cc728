#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>
#include <vector>

#include "feller/components/component.hpp"
#include "feller/concat/routing.hpp"

namespace feller {

class ConcatSolution;

// N components joined by routing measures. Immutable after construction.
class ConcatSystem {
 public:
  ConcatSystem(std::vector<ComponentPtr> components, std::vector<RoutingMeasure> measures)
      : components_(std::move(components)) {
    require(!components_.empty(), ErrorKind::invalid_argument, "concatenation needs at least one component");
    for (std::size_t i = 0; i < components_.size(); ++i)
      require(components_[i] != nullptr, ErrorKind::invalid_argument, "null component");

    // Non-conservative components first, stable in user order.
    for (std::size_t i = 0; i < components_.size(); ++i)
      if (!components_[i]->conservative()) order_.push_back(i);
    for (std::size_t i = 0; i < components_.size(); ++i)
      if (components_[i]->conservative()) order_.push_back(i);
    for (std::size_t i : order_)
      for (std::size_t j = 0; j < components_[i]->gate_count(); ++j) gates_.push_back({i, j});

    measures_.resize(gates_.size());
    for (std::size_t a = 0; a < gates_.size(); ++a) measures_[a] = RoutingMeasure(gates_[a], {});
    std::vector<bool> seen(gates_.size(), false);
    for (RoutingMeasure& m : measures) {
      const GateRef& s = m.source();
      if (s.component >= components_.size() || s.gate >= components_[s.component]->gate_count()) {
        std::ostringstream os;
        os << "routing source (" << s.component << ", " << s.gate << ") is not a gate of the system";
        throw Error(ErrorKind::invalid_argument, os.str());
      }
      const std::size_t a = gate_index(s);
      require(!seen[a], ErrorKind::invalid_argument, "two routing measures for the same gate");
      seen[a] = true;
      for (const Atom& at : m.atoms()) {
        require(at.component < components_.size(), ErrorKind::invalid_argument, "routing atom targets a missing component");
        components_[at.component]->space().require_contains(at.point);
      }
      measures_[a] = std::move(m);
    }
  }

  std::size_t component_count() const { return components_.size(); }
  const ComponentProcess& component(std::size_t i) const { return *components_.at(i); }
  const std::vector<ComponentPtr>& components() const { return components_; }
  const std::vector<std::size_t>& ordering() const { return order_; }

  std::size_t gate_count() const { return gates_.size(); }
  const std::vector<GateRef>& gates() const { return gates_; }
  const RoutingMeasure& measure(std::size_t a) const { return measures_.at(a); }
  const std::vector<RoutingMeasure>& measures() const { return measures_; }

  std::size_t gate_index(const GateRef& g) const {
    for (std::size_t a = 0; a < gates_.size(); ++a)
      if (gates_[a] == g) return a;
    throw Error(ErrorKind::invalid_argument, "unknown gate");
  }

  bool all_probability() const {
    return std::all_of(measures_.begin(), measures_.end(), [](const RoutingMeasure& m) { return m.is_probability(); });
  }

  // Replaces one component, keeping the routing. Used for negative controls.
  ConcatSystem with_component(std::size_t i, ComponentPtr c) const {
    std::vector<ComponentPtr> comps = components_;
    require(c->gate_count() == comps.at(i)->gate_count(), ErrorKind::invalid_argument,
            "replacement component must keep the gate count");
    comps[i] = std::move(c);
    return ConcatSystem(std::move(comps), measures_);
  }

  std::vector<Site> grid(std::size_t n) const {
    std::vector<Site> s;
    for (std::size_t i = 0; i < components_.size(); ++i)
      for (const Point& p : components_[i]->space().grid(n)) s.push_back({i, p});
    return s;
  }

  // Continuous function from values on grid(n).
  SiteFunction interpolate(std::size_t n, const std::vector<double>& values) const {
    auto parts = std::make_shared<std::vector<PointFunction>>();
    std::size_t off = 0;
    for (const ComponentPtr& c : components_) {
      const std::size_t m = c->space().grid_size(n);
      parts->push_back(c->space().interpolate(n, std::vector<double>(values.begin() + off, values.begin() + off + m)));
      off += m;
    }
    require(off == values.size(), ErrorKind::invalid_argument, "interpolate: value count does not match grid");
    return [parts](const Site& s) { return (*parts)[s.component](s.point); };
  }

  // R^du_lambda g at points of one component.
  std::vector<double> disjoint_union_resolvent(const SiteFunction& g, double lambda, std::size_t component,
                                               const std::vector<Point>& xs) const {
    require(component < components_.size(), ErrorKind::invalid_argument, "point outside all components");
    return components_[component]->resolvent(restrict_to(g, component), lambda, xs);
  }

  double disjoint_union_resolvent(const SiteFunction& g, double lambda, const Site& s) const {
    return disjoint_union_resolvent(g, lambda, s.component, {s.point}).front();
  }

  // Entries int l^{k,l}_lambda dp_{i,j}.
  Eigen::MatrixXd gate_matrix(double lambda) const {
    check_lambda(lambda);
    const std::size_t K = gates_.size();
    Eigen::MatrixXd N = Eigen::MatrixXd::Zero(K, K);
    for (std::size_t a = 0; a < K; ++a)
      for (const Atom& at : measures_[a].atoms())
        for (std::size_t b = 0; b < K; ++b)
          if (gates_[b].component == at.component)
            N(a, b) += at.weight * components_[at.component]->exit_law(gates_[b].gate, lambda, at.point);
    if (K > 0) {
      const double norm = N.rowwise().sum().maxCoeff();
      if (!(norm < 1.0)) {
        std::ostringstream os;
        os << "gate matrix norm " << norm << " >= 1 at lambda = " << lambda << "; some exit law is broken";
        throw Error(ErrorKind::internal, os.str());
      }
    }
    return N;
  }

  // Gates whose routing lands where the lifetime transform exceeds 0.99:
  // near-instant re-exit chains.
  std::vector<std::size_t> ill_conditioned_gates(double lambda, double threshold = 0.99) const {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < gates_.size(); ++a) {
      const double s = measures_[a].integrate(
          [&](const Site& s) { return components_[s.component]->lifetime_transform(lambda, s.point); });
      if (s > threshold) out.push_back(a);
    }
    return out;
  }

  // v_{i,j} = int R^du_lambda g dp_{i,j}, batching atoms per component.
  Eigen::VectorXd du_integrals(const SiteFunction& g, double lambda) const {
    std::map<std::size_t, std::vector<Point>> pts;
    for (const RoutingMeasure& m : measures_)
      for (const Atom& at : m.atoms()) pts[at.component].push_back(at.point);
    std::map<std::size_t, std::vector<double>> vals;
    for (auto& [c, p] : pts) vals[c] = disjoint_union_resolvent(g, lambda, c, p);
    std::map<std::size_t, std::size_t> cursor;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(gates_.size());
    for (std::size_t a = 0; a < gates_.size(); ++a)
      for (const Atom& at : measures_[a].atoms()) v(a) += at.weight * vals[at.component][cursor[at.component]++];
    return v;
  }

  ConcatSolution solve(const SiteFunction& g, double lambda) const;

 private:
  std::vector<ComponentPtr> components_;
  std::vector<std::size_t> order_;
  std::vector<GateRef> gates_;
  std::vector<RoutingMeasure> measures_;
};

// R^co_lambda g for one (g, lambda): the gate integrals u solve (I - N)u = v
// and R^co g = R^du g + sum u_{i,j} l^{i,j}_lambda.
class ConcatSolution {
 public:
  ConcatSolution(const ConcatSystem& sys, SiteFunction g, double lambda)
      : sys_(std::make_shared<const ConcatSystem>(sys)), g_(std::move(g)), lambda_(lambda) {
    N_ = sys_->gate_matrix(lambda);
    v_ = sys_->du_integrals(g_, lambda);
    const std::size_t K = sys_->gate_count();
    if (K == 0) {
      u_ = Eigen::VectorXd::Zero(0);
      return;
    }
    const Eigen::MatrixXd M = Eigen::MatrixXd::Identity(K, K) - N_;
    u_ = M.partialPivLu().solve(v_);
    residual_ = (u_ - v_ - N_ * u_).cwiseAbs().maxCoeff();
    if (!std::isfinite(residual_) || residual_ > 1e-12 * (1.0 + u_.cwiseAbs().maxCoeff())) {
      std::ostringstream os;
      os << "consistency solve residual " << residual_ << " too large";
      throw Error(ErrorKind::internal, os.str());
    }
  }

  double lambda() const { return lambda_; }
  const Eigen::MatrixXd& gate_matrix() const { return N_; }
  const Eigen::VectorXd& u() const { return u_; }
  const Eigen::VectorXd& v() const { return v_; }
  double residual() const { return residual_; }
  double gate_matrix_norm() const { return N_.size() ? N_.rowwise().sum().maxCoeff() : 0.0; }
  const ConcatSystem& system() const { return *sys_; }

  std::vector<double> values(std::size_t component, const std::vector<Point>& xs) const {
    std::vector<double> out = sys_->disjoint_union_resolvent(g_, lambda_, component, xs);
    const ComponentProcess& c = sys_->component(component);
    for (std::size_t a = 0; a < sys_->gate_count(); ++a) {
      const GateRef& gr = sys_->gates()[a];
      if (gr.component != component || u_(a) == 0.0) continue;
      for (std::size_t i = 0; i < xs.size(); ++i) out[i] += u_(a) * c.exit_law(gr.gate, lambda_, xs[i]);
    }
    return out;
  }

  double value(const Site& s) const { return values(s.component, {s.point}).front(); }

  std::vector<double> values(const std::vector<Site>& sites) const {
    std::map<std::size_t, std::vector<std::size_t>> by_comp;
    for (std::size_t i = 0; i < sites.size(); ++i) by_comp[sites[i].component].push_back(i);
    std::vector<double> out(sites.size());
    for (auto& [c, idx] : by_comp) {
      std::vector<Point> pts;
      for (std::size_t i : idx) pts.push_back(sites[i].point);
      std::vector<double> v = values(c, pts);
      for (std::size_t t = 0; t < idx.size(); ++t) out[idx[t]] = v[t];
    }
    return out;
  }

  // Largest |int R^co g dp_{i,j} - u_{i,j}| recomputed from the output.
  double consistency_defect() const {
    double worst = 0.0;
    for (std::size_t a = 0; a < sys_->gate_count(); ++a) {
      const double s = sys_->measure(a).integrate([&](const Site& st) { return value(st); });
      worst = std::max(worst, std::abs(s - u_(a)));
    }
    return worst;
  }

 private:
  std::shared_ptr<const ConcatSystem> sys_;
  SiteFunction g_;
  double lambda_;
  Eigen::MatrixXd N_;
  Eigen::VectorXd v_, u_;
  double residual_ = 0.0;
};

inline ConcatSolution ConcatSystem::solve(const SiteFunction& g, double lambda) const {
  return ConcatSolution(*this, g, lambda);
}

inline double concat_resolvent(const ConcatSystem& sys, const SiteFunction& g, double lambda, const Site& s) {
  return sys.solve(g, lambda).value(s);
}

}  // namespace feller
