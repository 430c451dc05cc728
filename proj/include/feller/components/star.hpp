#pragma once

#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "feller/components/component.hpp"
#include "feller/components/kernels.hpp"

namespace feller {

// Walsh-type Brownian motion on k edges of length r glued at a centre with
//   beta f''(0) = sum_j alpha_j f_j'(0),
// and q f_j''(r) + (1-q) f_j'(r) + d f_j(r) = 0 at every outer end.
struct StarGraphParams {
  std::size_t k = 2;
  double r = 1.0;
  double beta = 0.0;
  std::vector<double> alpha{0.5, 0.5};
  double q = 0.0;
  double d = 1.0;
};

class StarGraph final : public ComponentProcess {
 public:
  explicit StarGraph(StarGraphParams p, QuadratureOptions opt = {})
      : p_(std::move(p)), opt_(opt), space_(StateSpace::star_graph(p_.k, p_.r)) {
    require(p_.beta != 1.0, ErrorKind::invalid_argument,
            "star graph with beta = 1: the centre is sticky forever, so the generator has a nontrivial "
            "kernel and no regular exit decomposition exists; beta must be < 1");
    require(p_.beta >= 0 && p_.beta < 1, ErrorKind::invalid_argument, "star graph: beta must lie in [0, 1)");
    require(p_.alpha.size() == p_.k, ErrorKind::invalid_argument, "star graph: need one alpha per edge");
    for (double a : p_.alpha) require(a >= 0, ErrorKind::invalid_argument, "star graph: alpha_j must be nonnegative");
    const double total = p_.beta + std::accumulate(p_.alpha.begin(), p_.alpha.end(), 0.0);
    require(std::abs(total - 1.0) <= 1e-12, ErrorKind::invalid_argument, "star graph: beta + sum alpha must equal 1");
    require(p_.q >= 0 && p_.q <= 1, ErrorKind::invalid_argument, "star graph: q must lie in [0, 1]");
    require(p_.d >= 0, ErrorKind::invalid_argument, "star graph: d must be nonnegative");
  }

  const StarGraphParams& params() const { return p_; }

  ComponentKind kind() const override { return ComponentKind::star_graph; }
  std::string describe() const override {
    std::ostringstream os;
    os << "star(k=" << p_.k << ", r=" << p_.r << ", beta=" << p_.beta << ", q=" << p_.q << ", d=" << p_.d << ")";
    return os.str();
  }
  const StateSpace& space() const override { return space_; }
  std::size_t gate_count() const override { return p_.d > 0 ? p_.k : 0; }
  std::string gate_label(std::size_t j) const override { return "end of edge " + std::to_string(j); }

  std::vector<double> resolvent(const PointFunction& g, double lambda, const std::vector<Point>& xs) const override {
    const Scaled s = scaled(lambda);
    const double k = s.k, r = p_.r;
    const std::size_t K = p_.k;
    std::vector<double> p0(K), pr(K), Fh(K);
    const double g0 = g(Point{0, 0.0});
    double sum = 0.0;
    for (std::size_t j = 0; j < K; ++j) {
      auto gj = [&](double y) { return g(Point{j, y}); };
      p0[j] = detail::right_convolution(gj, k, 0.0, r, opt_) / k;
      pr[j] = detail::left_convolution(gj, k, 0.0, r, opt_) / k;
      sum += p_.alpha[j] * p0[j];
    }
    // h_j = p_j + (c0 - p_j(0)) e^{-kx} is continuous at the centre and
    // satisfies the centre condition.
    const double c0 = (2 * p_.beta * g0 + 2 * k * sum) / (2 * p_.beta * lambda + k * (1 - p_.beta));
    for (std::size_t j = 0; j < K; ++j) {
      const double hr = pr[j] + (c0 - p0[j]) * s.er;
      const double dhr = -k * pr[j] - k * (c0 - p0[j]) * s.er;
      const double d2hr = 2 * lambda * hr - 2 * g(Point{j, r});
      Fh[j] = p_.q * d2hr + (1 - p_.q) * dhr + p_.d * hr;
    }
    std::vector<double> out;
    out.reserve(xs.size());
    for (const Point& x : xs) {
      space_.require_contains(x);
      const std::size_t m = x.x == 0.0 ? 0 : x.edge;
      auto gm = [&](double y) { return g(Point{m, y}); };
      double v = detail::free_green(gm, k, 0.0, r, x.x, opt_) + (c0 - p0[m]) * std::exp(-k * x.x);
      for (std::size_t j = 0; j < K; ++j) v -= Fh[j] * unit_exit_law(s, j, m, x.x);
      out.push_back(v);
    }
    return out;
  }

  // Value at the centre from the centre formula alone.
  double center_value(const PointFunction& g, double lambda) const {
    return resolvent(g, lambda, {Point{0, 0.0}}).front();
  }

  double exit_law(std::size_t gate, double lambda, const Point& x) const override {
    check_gate(gate);
    space_.require_contains(x);
    const Scaled s = scaled(lambda);
    return p_.d * unit_exit_law(s, gate, x.edge, x.x);
  }

  double excessive(std::size_t gate, const Point& x) const override {
    check_gate(gate);
    space_.require_contains(x);
    const double d = p_.d, r = p_.r, q = p_.q;
    const double den = r * d + 1 - q;
    const double own = (x.edge == gate && x.x > 0) ? d * x.x / den : 0.0;
    return own + (d * (r - x.x) + 1 - q) / den * p_.alpha[gate] / (1 - p_.beta);
  }

  // m_lambda of the centre equation, exposed for the splitting limit checks.
  double m_lambda(double lambda) const {
    const Scaled s = scaled(lambda);
    return s.m;
  }

 private:
  struct Scaled {
    double k, Q, v, er, Delta, Sigma, m;
  };

  // With E = e^{-2kr}: Delta = (a21 - a22) e^{-kr}, Sigma = (a21 + a22) e^{-kr}.
  Scaled scaled(double lambda) const {
    check_lambda(lambda);
    Scaled s{};
    s.k = std::sqrt(2 * lambda);
    s.Q = 2 * lambda * p_.q + p_.d;
    s.v = s.k * (1 - p_.q);
    s.er = std::exp(-s.k * p_.r);
    const double om = -std::expm1(-2 * s.k * p_.r);
    s.Delta = s.Q * om + s.v * (2 - om);
    s.Sigma = s.Q * (2 - om) + s.v * om;
    s.m = 2 * p_.beta * lambda + s.k * (1 - p_.beta) * s.Sigma / s.Delta;
    return s;
  }

  // Exit law of gate j divided by d, on edge m at distance x from the centre.
  double unit_exit_law(const Scaled& s, std::size_t j, std::size_t m, double x) const {
    const double k = s.k, r = p_.r;
    double own = 0.0;
    if (m == j && x > 0) own = -std::exp(k * (x - r)) * std::expm1(-2 * k * x) / s.Delta;
    const double ex = -std::expm1(-2 * k * (r - x));
    const double psi = std::exp(-k * x) * (s.Q * ex + s.v * (2 - ex));
    return own + 2 * k * p_.alpha[j] * s.er * psi / (s.m * s.Delta * s.Delta);
  }

  StarGraphParams p_;
  QuadratureOptions opt_;
  StateSpace space_;
};

}  // namespace feller
