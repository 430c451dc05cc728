#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "feller/averaging/accelerated.hpp"
#include "feller/components/absorbing.hpp"
#include "feller/components/halfline.hpp"
#include "feller/components/interval.hpp"
#include "feller/components/killed.hpp"
#include "feller/components/star.hpp"
#include "feller/components/transport.hpp"
#include "feller/concat/system.hpp"

namespace feller::oracle {

inline constexpr std::size_t kMaxDenseNodes = 2000;

// One non-local boundary entry: row `row` carries coefficient * int f dp.
using GateRow = std::pair<std::size_t, double>;

// Finite-difference generator. The resolvent equation is the pencil
// (lambda E - A) f = E g with E = diag(dynamic): algebraic rows encode
// boundary conditions without a time derivative.
struct GridModel {
  std::vector<Site> nodes;
  Eigen::MatrixXd A;
  std::vector<bool> dynamic;
  std::vector<std::vector<GateRow>> gate_rows;  // per gate (component gate j, or system gate index)
  std::size_t resolution = 0;
  double max_snap_displacement = 0.0;

  std::size_t size() const { return nodes.size(); }

  Eigen::VectorXd sample(const SiteFunction& g) const {
    Eigen::VectorXd v(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) v(i) = g(nodes[i]);
    return v;
  }
};

namespace detail {

struct Local {
  Eigen::MatrixXd A;
  std::vector<bool> dynamic;
  std::vector<std::vector<GateRow>> gates;
};

inline Local interval_local(const WentzelInterval& c, std::size_t n) {
  const WentzelIntervalParams& p = c.params();
  const double h = p.r / double(n);
  Local L{Eigen::MatrixXd::Zero(n + 1, n + 1), std::vector<bool>(n + 1, true), {}};
  for (std::size_t i = 1; i < n; ++i) {
    L.A(i, i - 1) = L.A(i, i + 1) = 0.5 / (h * h);
    L.A(i, i) = -1.0 / (h * h);
  }
  std::vector<GateRow> left, right;
  // left: p f''(0) - (1-p) f'(0) + c f(0) = c int f dp
  {
    const double s = p.p > 0 ? 1.0 / (2 * p.p) : 1.0;
    L.A(0, 0) += s * ((1 - p.p) * (-3.0) / (2 * h) - p.c);
    L.A(0, 1) += s * (1 - p.p) * 4.0 / (2 * h);
    L.A(0, 2) += s * (1 - p.p) * (-1.0) / (2 * h);
    L.dynamic[0] = p.p > 0;
    left.push_back({0, s * p.c});
  }
  // right: q f''(r) + (1-q) f'(r) + d f(r) = d int f dp
  {
    const double s = p.q > 0 ? 1.0 / (2 * p.q) : 1.0;
    L.A(n, n) += s * (-(1 - p.q) * 3.0 / (2 * h) - p.d);
    L.A(n, n - 1) += s * (-(1 - p.q) * (-4.0) / (2 * h));
    L.A(n, n - 2) += s * (-(1 - p.q) * 1.0 / (2 * h));
    L.dynamic[n] = p.q > 0;
    right.push_back({n, s * p.d});
  }
  for (std::size_t j = 0; j < c.gate_count(); ++j)
    L.gates.push_back(c.gate_end(j) == WentzelInterval::End::left ? left : right);
  return L;
}

inline Local halfline_local(const HalfLine& c, std::size_t n) {
  const HalfLineParams& p = c.params();
  const double ht = 1.0 / double(n);
  const double Ls = c.space().half_line_scale();
  Local L{Eigen::MatrixXd::Zero(n + 1, n + 1), std::vector<bool>(n + 1, true), {}};
  for (std::size_t i = 1; i < n; ++i) {
    const double t = double(i) * ht;
    const double t1 = (1 - t) * (1 - t) / Ls;
    const double t2 = -2 * (1 - t) * (1 - t) * (1 - t) / (Ls * Ls);
    L.A(i, i - 1) = 0.5 * (t1 * t1 / (ht * ht) - t2 / (2 * ht));
    L.A(i, i + 1) = 0.5 * (t1 * t1 / (ht * ht) + t2 / (2 * ht));
    L.A(i, i) = -t1 * t1 / (ht * ht);
  }
  // a f''(0) - b f'(0) + c f(0) = c int f dp, f'(0) = f_t(0) / L
  const double s = p.a > 0 ? 1.0 / (2 * p.a) : 1.0;
  const double bx = p.b / Ls / (2 * ht);
  L.A(0, 0) += s * (bx * -3.0 - p.c);
  L.A(0, 1) += s * bx * 4.0;
  L.A(0, 2) += s * bx * -1.0;
  L.dynamic[0] = p.a > 0;
  if (c.gate_count()) L.gates.push_back({{0, s * p.c}});
  return L;
}

inline Local star_local(const StarGraph& c, std::size_t n) {
  const StarGraphParams& p = c.params();
  const std::size_t K = p.k, N = 1 + K * n;
  const double h = p.r / double(n);
  auto idx = [n](std::size_t j, std::size_t i) { return i == 0 ? std::size_t{0} : 1 + j * n + (i - 1); };
  Local L{Eigen::MatrixXd::Zero(N, N), std::vector<bool>(N, true), {}};
  const double sc = p.beta > 0 ? 1.0 / (2 * p.beta) : 1.0;
  L.dynamic[0] = p.beta > 0;
  const double so = p.q > 0 ? 1.0 / (2 * p.q) : 1.0;
  for (std::size_t j = 0; j < K; ++j) {
    L.A(0, idx(j, 0)) += sc * p.alpha[j] * -3.0 / (2 * h);
    L.A(0, idx(j, 1)) += sc * p.alpha[j] * 4.0 / (2 * h);
    L.A(0, idx(j, 2)) += sc * p.alpha[j] * -1.0 / (2 * h);
    for (std::size_t i = 1; i < n; ++i) {
      L.A(idx(j, i), idx(j, i - 1)) += 0.5 / (h * h);
      L.A(idx(j, i), idx(j, i + 1)) += 0.5 / (h * h);
      L.A(idx(j, i), idx(j, i)) += -1.0 / (h * h);
    }
    const std::size_t e = idx(j, n);
    L.A(e, e) += so * (-(1 - p.q) * 3.0 / (2 * h) - p.d);
    L.A(e, idx(j, n - 1)) += so * (1 - p.q) * 4.0 / (2 * h);
    L.A(e, idx(j, n - 2)) += so * -(1 - p.q) * 1.0 / (2 * h);
    L.dynamic[e] = p.q > 0;
    if (c.gate_count()) L.gates.push_back({{e, so * p.d}});
  }
  return L;
}

inline Local transport_local(const Transport& c, std::size_t n) {
  const double h = 1.0 / double(n);
  Local L{Eigen::MatrixXd::Zero(n + 1, n + 1), std::vector<bool>(n + 1, true), {}};
  for (std::size_t i = 0; i < n; ++i) {
    L.A(i, i) = -1.0 / h;
    L.A(i, i + 1) = 1.0 / h;
  }
  L.A(n, n) = -c.alpha();
  if (c.gate_count()) L.gates.push_back({{n, c.alpha()}});
  return L;
}

inline Local local_model(const ComponentProcess& c, std::size_t n);

inline Local killed_local(const Killed& c, std::size_t n) {
  Local L = local_model(c.base(), n);
  std::vector<GateRow> rows;
  for (std::size_t i = 0; i < L.dynamic.size(); ++i)
    if (L.dynamic[i]) {
      L.A(i, i) -= c.alpha();
      rows.push_back({i, c.alpha()});
    }
  L.gates = {rows};
  return L;
}

inline Local accelerated_local(const Accelerated& c, std::size_t n) {
  Local L = local_model(c.base(), n);
  for (std::size_t i = 0; i < L.dynamic.size(); ++i)
    if (L.dynamic[i]) L.A.row(i) /= c.eps();
  for (auto& g : L.gates)
    for (auto& [row, coef] : g)
      if (L.dynamic[row]) coef /= c.eps();
  return L;
}

inline Local local_model(const ComponentProcess& c, std::size_t n) {
  switch (c.kind()) {
    case ComponentKind::interval: return interval_local(static_cast<const WentzelInterval&>(c), n);
    case ComponentKind::half_line: return halfline_local(static_cast<const HalfLine&>(c), n);
    case ComponentKind::star_graph: return star_local(static_cast<const StarGraph&>(c), n);
    case ComponentKind::transport: return transport_local(static_cast<const Transport&>(c), n);
    case ComponentKind::killed: return killed_local(static_cast<const Killed&>(c), n);
    case ComponentKind::accelerated: return accelerated_local(static_cast<const Accelerated&>(c), n);
    case ComponentKind::absorbing_points: {
      const std::size_t m = c.space().edge_count();
      return Local{Eigen::MatrixXd::Zero(m, m), std::vector<bool>(m, true), {}};
    }
    case ComponentKind::perturbed: break;
  }
  throw Error(ErrorKind::unsupported, "no finite-difference model for " + c.describe());
}

// Nearest grid node of a point; returns local index and displacement.
inline std::pair<std::size_t, double> snap(const StateSpace& s, std::size_t n, const Point& p) {
  switch (s.kind()) {
    case SpaceKind::absorbing_points: return {p.edge, 0.0};
    case SpaceKind::half_line: {
      const double t = s.to_t(p.x);
      const std::size_t i = std::size_t(std::llround(t * double(n)));
      const double x = s.from_t(double(i) / double(n));
      return {i, std::isinf(x) && std::isinf(p.x) ? 0.0 : std::abs(x - p.x)};
    }
    case SpaceKind::star_graph: {
      const double h = s.length() / double(n);
      const std::size_t i = std::size_t(std::llround(p.x / h));
      const double disp = std::abs(double(i) * h - p.x);
      return {i == 0 ? 0 : 1 + p.edge * n + (i - 1), disp};
    }
    default: {
      const double h = s.length() / double(n);
      const std::size_t i = std::size_t(std::llround(p.x / h));
      return {i, std::abs(double(i) * h - p.x)};
    }
  }
}

}  // namespace detail

inline GridModel discretize_component(const ComponentProcess& c, std::size_t n) {
  require(n >= 8, ErrorKind::invalid_argument, "grid oracle needs n >= 8 subintervals per edge");
  detail::Local L = detail::local_model(c, n);
  require(std::size_t(L.A.rows()) <= kMaxDenseNodes, ErrorKind::invalid_argument,
          "grid oracle is limited to 2000 nodes");
  GridModel m;
  for (const Point& p : c.space().grid(n)) m.nodes.push_back({0, p});
  m.A = std::move(L.A);
  m.dynamic = std::move(L.dynamic);
  m.gate_rows = std::move(L.gates);
  m.resolution = n;
  return m;
}

// Block-diagonal generator plus the non-local boundary entries carried by the
// routing measures, atoms snapped to the nearest node.
inline GridModel discretize_concatenation(const ConcatSystem& sys, std::size_t n) {
  require(n >= 8, ErrorKind::invalid_argument, "grid oracle needs n >= 8 subintervals per edge");
  std::vector<detail::Local> locals;
  std::vector<std::size_t> offset;
  std::size_t total = 0;
  for (std::size_t i = 0; i < sys.component_count(); ++i) {
    locals.push_back(detail::local_model(sys.component(i), n));
    offset.push_back(total);
    total += std::size_t(locals.back().A.rows());
  }
  require(total <= kMaxDenseNodes, ErrorKind::invalid_argument, "grid oracle is limited to 2000 nodes");
  GridModel m;
  m.resolution = n;
  m.A = Eigen::MatrixXd::Zero(total, total);
  m.dynamic.assign(total, true);
  for (std::size_t i = 0; i < sys.component_count(); ++i) {
    const auto sz = locals[i].A.rows();
    m.A.block(offset[i], offset[i], sz, sz) = locals[i].A;
    for (Eigen::Index r = 0; r < sz; ++r) m.dynamic[offset[i] + r] = locals[i].dynamic[r];
    for (const Point& p : sys.component(i).space().grid(n)) m.nodes.push_back({i, p});
  }
  for (std::size_t a = 0; a < sys.gate_count(); ++a) {
    const GateRef& g = sys.gates()[a];
    std::vector<GateRow> rows;
    for (auto [row, coef] : locals[g.component].gates.at(g.gate)) rows.push_back({offset[g.component] + row, coef});
    m.gate_rows.push_back(rows);
    for (const Atom& at : sys.measure(a).atoms()) {
      auto [local, disp] = detail::snap(sys.component(at.component).space(), n, at.point);
      m.max_snap_displacement = std::max(m.max_snap_displacement, disp);
      for (auto [row, coef] : rows) m.A(row, offset[at.component] + local) += coef * at.weight;
    }
  }
  return m;
}

// LU of lambda E - A, reusable for many right-hand sides.
class ResolventFactorization {
 public:
  ResolventFactorization(const GridModel& m, double lambda) : E_(m.size()) {
    require(lambda > 0, ErrorKind::invalid_argument, "matrix resolvent needs lambda > 0");
    for (std::size_t i = 0; i < m.size(); ++i) E_(i) = m.dynamic[i] ? 1.0 : 0.0;
    Eigen::MatrixXd M = -m.A;
    M.diagonal() += lambda * E_;
    lu_ = M.partialPivLu();
  }
  Eigen::VectorXd solve(const Eigen::VectorXd& g) const { return lu_.solve(E_.cwiseProduct(g)); }
  // Solve with an explicit right-hand side (no E mask).
  Eigen::VectorXd solve_raw(const Eigen::VectorXd& b) const { return lu_.solve(b); }

 private:
  Eigen::VectorXd E_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

inline Eigen::VectorXd matrix_resolvent(const GridModel& m, const Eigen::VectorXd& g, double lambda) {
  return ResolventFactorization(m, lambda).solve(g);
}

// Discrete exit law of a gate: (lambda E - A) l = sum of the gate's boundary
// coefficients, the discrete form of the Kronecker-delta boundary data.
inline Eigen::VectorXd discrete_exit_law(const GridModel& m, std::size_t gate, double lambda) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m.size());
  for (auto [row, coef] : m.gate_rows.at(gate)) b(row) += coef;
  return ResolventFactorization(m, lambda).solve_raw(b);
}

// Discrete exit probability: -A phi = b_gate, with phi = 0 on trap rows.
inline Eigen::VectorXd discrete_excessive(const GridModel& m, std::size_t gate) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m.size());
  for (auto [row, coef] : m.gate_rows.at(gate)) b(row) += coef;
  Eigen::MatrixXd M = -m.A;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (M.row(i).cwiseAbs().maxCoeff() == 0.0 && b(i) == 0.0) M(i, i) = 1.0;
  return M.partialPivLu().solve(b);
}

// Generator on the dynamic nodes after eliminating algebraic rows.
struct ReducedGenerator {
  std::vector<std::size_t> dyn, alg;
  Eigen::MatrixXd A;        // on dyn
  Eigen::MatrixXd recover;  // f_alg = recover * f_dyn
};

inline ReducedGenerator reduce(const GridModel& m) {
  ReducedGenerator r;
  for (std::size_t i = 0; i < m.size(); ++i) (m.dynamic[i] ? r.dyn : r.alg).push_back(i);
  const Eigen::Index nd = Eigen::Index(r.dyn.size()), na = Eigen::Index(r.alg.size());
  Eigen::MatrixXd Add(nd, nd), Ada(nd, na), Aad(na, nd), Aaa(na, na);
  for (Eigen::Index i = 0; i < nd; ++i) {
    for (Eigen::Index j = 0; j < nd; ++j) Add(i, j) = m.A(r.dyn[i], r.dyn[j]);
    for (Eigen::Index j = 0; j < na; ++j) Ada(i, j) = m.A(r.dyn[i], r.alg[j]);
  }
  for (Eigen::Index i = 0; i < na; ++i) {
    for (Eigen::Index j = 0; j < nd; ++j) Aad(i, j) = m.A(r.alg[i], r.dyn[j]);
    for (Eigen::Index j = 0; j < na; ++j) Aaa(i, j) = m.A(r.alg[i], r.alg[j]);
  }
  if (na > 0) {
    r.recover = -Aaa.partialPivLu().solve(Aad);
    r.A = Add + Ada * r.recover;
  } else {
    r.recover = Eigen::MatrixXd::Zero(0, nd);
    r.A = Add;
  }
  return r;
}

// e^{tA} g on the grid; algebraic nodes are recovered from their constraint.
inline Eigen::VectorXd matrix_semigroup(const GridModel& m, const Eigen::VectorXd& g, double t) {
  require(t >= 0, ErrorKind::invalid_argument, "matrix semigroup needs t >= 0");
  const ReducedGenerator r = reduce(m);
  Eigen::VectorXd gd(r.dyn.size());
  for (std::size_t i = 0; i < r.dyn.size(); ++i) gd(i) = g(r.dyn[i]);
  const Eigen::VectorXd fd = t == 0 ? gd : Eigen::VectorXd((t * r.A).exp() * gd);
  Eigen::VectorXd out(m.size());
  for (std::size_t i = 0; i < r.dyn.size(); ++i) out(r.dyn[i]) = fd(i);
  if (!r.alg.empty()) {
    const Eigen::VectorXd fa = r.recover * fd;
    for (std::size_t i = 0; i < r.alg.size(); ++i) out(r.alg[i]) = t == 0 ? g(r.alg[i]) : fa(i);
  }
  return out;
}

// Largest real part in the spectrum of the reduced generator.
inline double spectral_abscissa(const GridModel& m) {
  const ReducedGenerator r = reduce(m);
  Eigen::EigenSolver<Eigen::MatrixXd> es(r.A, false);
  return es.eigenvalues().real().maxCoeff();
}

}  // namespace feller::oracle
