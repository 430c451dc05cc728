#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "feller/averaging/families.hpp"
#include "feller/concat/system.hpp"
#include "feller/numerics/extrapolation.hpp"
#include "feller/verify/laplace.hpp"

namespace feller {

// Constant limits rho^j gamma / (lambda + gamma) of the exit laws.
inline std::vector<double> limit_exit_laws(const SplittableFamily& f, double lambda) {
  check_lambda(lambda);
  const SplittingData& d = f.data();
  std::vector<double> out;
  for (double r : d.rho) out.push_back(r * d.gamma / (lambda + d.gamma));
  return out;
}

struct LimitChain {
  Eigen::MatrixXd Q;
  std::vector<ProjectionFunctional> P;

  std::size_t size() const { return P.size(); }
  Eigen::VectorXd project(const SiteFunction& g) const {
    Eigen::VectorXd v(P.size());
    for (std::size_t i = 0; i < P.size(); ++i) v[i] = P[i](restrict_to(g, i));
    return v;
  }
  std::string text() const {
    std::ostringstream os;
    os.setf(std::ios::scientific);
    os.precision(6);
    for (Eigen::Index i = 0; i < Q.rows(); ++i) {
      for (Eigen::Index k = 0; k < Q.cols(); ++k) {
        os.width(15);
        os << Q(i, k);
      }
      os << '\n';
    }
    return os.str();
  }
};

// q_ii = -gamma_i and q_ik = gamma_i sum_j rho^{i,j} p_{i,j}(S_k).
inline LimitChain build_q_matrix(const std::vector<FamilyPtr>& families, const std::vector<RoutingMeasure>& measures) {
  const std::size_t N = families.size();
  require(N >= 1, ErrorKind::invalid_argument, "limit chain needs at least one family");
  LimitChain ch;
  ch.Q = Eigen::MatrixXd::Zero(N, N);
  for (std::size_t i = 0; i < N; ++i) {
    ch.Q(i, i) = -families[i]->data().gamma;
    ch.P.push_back(families[i]->data().projection);
  }
  for (const RoutingMeasure& m : measures) {
    const GateRef& src = m.source();
    require(src.component < N, ErrorKind::invalid_argument, "routing measure refers to a missing component");
    const SplittableFamily& f = *families[src.component];
    require(src.gate < f.gate_count(), ErrorKind::no_gate, "routing measure refers to a missing gate");
    for (const Atom& a : m.atoms()) {
      require(a.component < N, ErrorKind::invalid_argument, "routing atom refers to a missing component");
      if (a.component == src.component) {
        std::ostringstream os;
        os << "routing measure of gate (" << src.component << ", " << src.gate
           << ") charges its own component; the limit chain needs self-loop-free routing";
        throw Error(ErrorKind::invalid_argument, os.str());
      }
      ch.Q(src.component, a.component) += f.data().gamma * f.data().rho[src.gate] * a.weight;
    }
  }
  return ch;
}

// (lambda - Q)^{-1} P g.
inline Eigen::VectorXd limit_resolvent(const LimitChain& ch, const SiteFunction& g, double lambda) {
  require(lambda > 0, ErrorKind::range, "limit resolvent needs lambda > 0");
  const Eigen::Index N = Eigen::Index(ch.size());
  const Eigen::MatrixXd A = lambda * Eigen::MatrixXd::Identity(N, N) - ch.Q;
  return A.partialPivLu().solve(ch.project(g));
}

// e^{tQ} P g.
inline Eigen::VectorXd limit_semigroup(const LimitChain& ch, const SiteFunction& g, double t) {
  require(t >= 0, ErrorKind::invalid_argument, "time must be nonnegative");
  const Eigen::MatrixXd E = (t * ch.Q).exp();
  return E * ch.project(g);
}

// Concatenation of the eps-members; `accelerated` selects eps^{-1} A_eps
// over A_eps.
inline ConcatSystem scaled_system(const std::vector<FamilyPtr>& families, const std::vector<RoutingMeasure>& measures,
                                  double eps, bool accelerated = true) {
  std::vector<ComponentPtr> cs;
  for (const FamilyPtr& f : families) cs.push_back(accelerated ? f->at(eps) : f->base(eps));
  return ConcatSystem(std::move(cs), measures);
}

struct SweepRow {
  double eps = 0.0;
  double lambda = 0.0;
  double error = 0.0;
  double g_norm = 0.0;
};

// e(eps) = sup over the grid of |R^co_{lambda,eps} g - (lambda - Q)^{-1} P g|.
inline std::vector<SweepRow> convergence_sweep(const std::vector<FamilyPtr>& families,
                                               const std::vector<RoutingMeasure>& measures, const SiteFunction& g,
                                               double lambda, const std::vector<double>& eps_list, std::size_t n = 64) {
  require(!eps_list.empty(), ErrorKind::invalid_argument, "sweep needs at least one eps");
  for (std::size_t i = 1; i < eps_list.size(); ++i)
    require(eps_list[i] < eps_list[i - 1], ErrorKind::invalid_argument, "eps list must be strictly decreasing");
  const LimitChain ch = build_q_matrix(families, measures);
  const Eigen::VectorXd f = limit_resolvent(ch, g, lambda);
  std::vector<SweepRow> rows;
  for (double eps : eps_list) {
    const ConcatSystem sys = scaled_system(families, measures, eps);
    const std::vector<Site> grid = sys.grid(n);
    const std::vector<double> v = sys.solve(g, lambda).values(grid);
    SweepRow row{eps, lambda, 0.0, 0.0};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      row.error = std::max(row.error, std::abs(v[i] - f[Eigen::Index(grid[i].component)]));
      row.g_norm = std::max(row.g_norm, std::abs(g(grid[i])));
    }
    rows.push_back(row);
  }
  return rows;
}

struct TimeDomainRow {
  double eps = 0.0;
  double t = 0.0;
  std::size_t component = 0;
  double value = 0.0;  // Gaver-Stehfest inversion of lambda -> R^co_{lambda,eps} g at the probe site
  double limit = 0.0;  // (e^{tQ} P g)_i
};

// Probe sites are the midpoints of edge 0 of every component.
inline std::vector<TimeDomainRow> time_domain_check(const std::vector<FamilyPtr>& families,
                                                    const std::vector<RoutingMeasure>& measures,
                                                    const SiteFunction& g, double eps,
                                                    const std::vector<double>& ts, int order = 7) {
  const LimitChain ch = build_q_matrix(families, measures);
  const ConcatSystem sys = scaled_system(families, measures, eps);
  std::vector<Site> probes;
  for (std::size_t i = 0; i < sys.component_count(); ++i) {
    const StateSpace& s = sys.component(i).space();
    const double len = std::isfinite(s.length()) ? s.length() : 1.0;
    probes.push_back(Site{i, Point{0, 0.5 * len}});
  }
  std::vector<TimeDomainRow> rows;
  for (double t : ts) {
    require(t > 0, ErrorKind::invalid_argument, "time-domain check needs t > 0");
    const Eigen::VectorXd lim = limit_semigroup(ch, g, t);
    std::vector<double> acc(probes.size(), 0.0);
    const std::vector<double> V = stehfest_weights(order);
    const double a = std::log(2.0) / t;
    for (std::size_t k = 0; k < V.size(); ++k) {
      const std::vector<double> v = sys.solve(g, double(k + 1) * a).values(probes);
      for (std::size_t i = 0; i < probes.size(); ++i) acc[i] += V[k] * v[i];
    }
    for (std::size_t i = 0; i < probes.size(); ++i)
      rows.push_back({eps, t, i, a * acc[i], lim[Eigen::Index(i)]});
  }
  return rows;
}

struct KurtzRow {
  double eps = 0.0;
  double error = 0.0;
};

// sup_x |eps R^{base(eps)}_{eps lambda} g - F_P(g) / (lambda + gamma)| along eps.
inline std::vector<KurtzRow> kurtz_precondition_check(const SplittableFamily& f, const PointFunction& g, double lambda,
                                                      const std::vector<double>& eps_list, std::size_t n = 64) {
  const double target = f.data().projection(g) / (lambda + f.data().gamma);
  std::vector<KurtzRow> rows;
  for (double eps : eps_list) {
    const ComponentPtr c = f.at(eps);
    const std::vector<Point> pts = c->space().grid(n);
    const std::vector<double> v = c->resolvent(g, lambda, pts);
    KurtzRow row{eps, 0.0};
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (!std::isfinite(pts[i].x)) continue;
      row.error = std::max(row.error, std::abs(v[i] - target));
    }
    rows.push_back(row);
  }
  return rows;
}

// Largest deviation over the grid between rho^j and the eps -> 0 limit of
// phi_eps^j, extrapolated from eps = 2^-6 .. 2^-16 (phi is analytic in eps).
inline double rho_consistency(const SplittableFamily& f, std::size_t n = 32) {
  const std::vector<Point> pts = f.base(1.0)->space().grid(n);
  double worst = 0.0;
  for (std::size_t j = 0; j < f.gate_count(); ++j)
    for (const Point& x : pts) {
      if (!std::isfinite(x.x)) continue;
      const Extrapolated e =
          limit_at_zero([&](double eps) { return f.base(eps)->excessive(j, x); }, 6, 16, {1.0, 2.0, 3.0});
      worst = std::max(worst, std::abs(e.value - f.data().rho[j]));
    }
  return worst;
}

// sup_x |l^j_{lambda,eps} - rho^j gamma / (lambda + gamma)| for every gate.
inline std::vector<double> exit_law_limit_error(const SplittableFamily& f, double lambda, double eps,
                                                std::size_t n = 32) {
  const ComponentPtr c = f.at(eps);
  const std::vector<double> lim = limit_exit_laws(f, lambda);
  const std::vector<Point> pts = c->space().grid(n);
  std::vector<double> out(f.gate_count(), 0.0);
  for (std::size_t j = 0; j < f.gate_count(); ++j)
    for (const Point& x : pts)
      if (std::isfinite(x.x)) out[j] = std::max(out[j], std::abs(c->exit_law(j, lambda, x) - lim[j]));
  return out;
}

// sup over the grid of |eps^{-1} R^co_{lambda/eps, eps} g - R^B_lambda g| with B
// the disjoint union of the honest limits.
inline double step3_error(const std::vector<FamilyPtr>& families, const std::vector<RoutingMeasure>& measures,
                          const SiteFunction& g, double lambda, double eps, std::size_t n = 64) {
  const ConcatSystem scaled = scaled_system(families, measures, eps, false);
  std::vector<ComponentPtr> limits;
  for (const FamilyPtr& f : families) limits.push_back(f->conservative_limit());
  const ConcatSystem B(std::move(limits), {});
  const std::vector<Site> grid = scaled.grid(n);
  const std::vector<double> a = scaled.solve(g, lambda).values(grid);
  const std::vector<double> b = B.solve(g, lambda).values(grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace feller
