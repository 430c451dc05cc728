// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "determinant_limits.hpp"
#include "feller/averaging/limit_chain.hpp"
#include "feller/concat/perturbed.hpp"
#include "feller/concat/transmission.hpp"
#include "feller/sim/simulate.hpp"
#include "feller/verify/checks.hpp"
#include "feller/verify/handle.hpp"
#include "grid_errors.hpp"
#include "test_support.hpp"

using namespace feller;
namespace ft = feller::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

const SiteFunction kTwoIntervalG = [](const Site& s) {
  return s.component == 0 ? 1 + s.point.x * s.point.x : std::sin(s.point.x);
};

std::vector<RoutingMeasure> measures_of(const ConcatSystem& sys) {
  std::vector<RoutingMeasure> ms;
  for (std::size_t a = 0; a < sys.gate_count(); ++a) ms.push_back(sys.measure(a));
  return ms;
}

std::vector<FamilyPtr> families_of(const ConcatSystem& sys) {
  std::vector<FamilyPtr> fs;
  for (std::size_t i = 0; i < sys.component_count(); ++i) fs.push_back(family_of(sys.component(i)));
  return fs;
}

// 1. Hilbert, positivity, contraction and conservativity on random systems.
void resolvent_axioms(Outcome& o) {
  const std::vector<double> rates{0.5, 2.0, 8.0};
  double hilbert = 0, negative = 0, norm = 0, cons = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ft::RandomSystem rs = ft::random_system(seed);
    const SiteFunction g = ft::random_g(seed + 100);
    const ResolventHandle h = system_handle(rs.system, 64);
    const CheckReport rep = check_hilbert(h, rates, {g}, 1e-6);
    hilbert = std::max(hilbert, rep.residual);
    o.require(rep.pass, "Hilbert on system " + std::to_string(seed) + ": " + rs.summary);
    double gnorm = 0;
    for (const Site& s : h.grid) gnorm = std::max(gnorm, std::abs(g(s)));
    const SiteFunction one = constant_site_function(1.0);
    for (double l : rates) {
      for (double v : rs.system.solve(g, l).values(h.grid)) {
        negative = std::min(negative, v);
        norm = std::max(norm, l * std::abs(v) / gnorm);
      }
      // sup-norm of lambda R_lambda is lambda R_lambda 1 for a positive operator
      for (double v : rs.system.solve(one, l).values(h.grid)) {
        norm = std::max(norm, l * v);
        if (rs.probability) cons = std::max(cons, std::abs(l * v - 1.0));
      }
    }
  }
  o.require(negative >= -1e-12, "positivity");
  o.require(norm <= 1 + 1e-10, "contraction");
  o.require(cons <= 1e-10, "conservativity");
  o.detail << "20 systems; Hilbert " << sci(hilbert) << "/(1+|g|) < 1e-6, min value " << sci(negative)
           << ", |lambda R| " << sci(norm) << ", conservativity defect " << sci(cons);
}

// 2. Exit-law axioms, derivative identity and complete monotonicity.
void exit_law_axioms(Outcome& o) {
  double functional = 0, deriv_ratio = 0, cm = 0;
  const auto grid = geometric_grid(0.05, 1.6, 14);
  std::size_t laws = 0;
  for (const ComponentPtr& c : ft::example_components()) {
    // 64 nodes: the nested application R(R l) goes through a grid interpolant,
    // which is too coarse on the compactified half line at 32 nodes.
    const ResolventHandle h = component_handle(c, 64);
    for (std::size_t j = 0; j < c->gate_count(); ++j, ++laws) {
      ExitLawEvaluator law = [&](double l, const Site& s) { return c->exit_law(j, l, s.point); };
      const CheckReport r = check_exit_law(h, law, {0.5, 2.0, 8.0}, 1e-6);
      functional = std::max(functional, r.residual);
      o.require(r.pass, "exit law " + c->describe() + ": " + r.detail);
      for (int order : {1, 2}) {
        const CheckReport d = check_exit_law_derivative(h, law, {0.5, 2.0}, order);
        o.require(d.pass, "derivative n=" + std::to_string(order) + " " + c->describe() + ": " + d.detail);
        deriv_ratio = std::max(deriv_ratio, d.residual);
      }
      for (const Point& x : c->space().grid(4)) {
        const CheckReport m = check_complete_monotonicity([&](double l) { return c->exit_law(j, l, x); }, grid, 4);
        cm = std::max(cm, m.residual);
        o.require(m.pass, "complete monotonicity " + c->describe());
      }
    }
  }
  const double r = 2.0, cc = 3.0;
  auto k_lambda = [&](double l) {
    const double k = std::sqrt(2 * l);
    return cc * std::cosh(k * r) / (cc * std::cosh(k * r) + k * std::sinh(k * r));
  };
  const CheckReport k = check_complete_monotonicity(k_lambda, geometric_grid(0.02, 1.5, 16), 4);
  o.require(k.pass, "k_lambda complete monotonicity");
  o.detail << laws << " exit laws; functional residual " << sci(functional) << " < 1e-6, derivative error "
           << sci(deriv_ratio) << ", monotonicity defect " << sci(std::max(cm, k.residual)) << " (incl. k_lambda)";
}

// 3. Closed forms against the finite-difference oracle.
void grid_refinement(Outcome& o) {
  double worst_order = 1e9, worst_final = 0;
  for (const ComponentPtr& c : ft::example_components()) {
    if (c->kind() == ComponentKind::transport || c->kind() == ComponentKind::killed) continue;
    const ft::GridErrors e[3] = {ft::grid_errors(*c, 64, 0.8), ft::grid_errors(*c, 128, 0.8),
                                 ft::grid_errors(*c, 256, 0.8)};
    auto series = [&](double ft::GridErrors::*field, const char* what) {
      if (e[0].*field < 1e-11) {
        // exactly reproduced (affine functions); no order is measurable
        for (const auto& x : e) o.require(x.*field < 1e-11, std::string(what) + " exact " + c->describe());
        return;
      }
      for (int i = 0; i < 2; ++i) {
        const double order = std::log2(e[i].*field / e[i + 1].*field);
        worst_order = std::min(worst_order, order);
        o.require(order >= 1.8, std::string(what) + " order " + c->describe());
      }
      worst_final = std::max(worst_final, e[2].*field);
      o.require(e[2].*field < 1e-4, std::string(what) + " final error " + c->describe());
    };
    series(&ft::GridErrors::resolvent, "R");
    if (c->gate_count()) {
      series(&ft::GridErrors::exit_law, "exit law");
      series(&ft::GridErrors::excessive, "phi");
    }
  }
  o.detail << "half line, 4 intervals, star; n=64,128,256: min order " << sci(worst_order)
           << " >= 1.8, max final relative error " << sci(worst_final) << " < 1e-4";
}

// 4. Boundary problems of the exit laws and the transmission conditions.
void boundary_identities(Outcome& o) {
  const double l = 0.9, h = 1e-4;
  double worst = 0;
  for (const ComponentPtr& c : ft::example_components()) {
    if (c->kind() != ComponentKind::interval) continue;
    const WentzelIntervalParams p = static_cast<const WentzelInterval&>(*c).params();
    const auto& iv = static_cast<const WentzelInterval&>(*c);
    for (std::size_t j = 0; j < c->gate_count(); ++j) {
      auto f = [&](double x) { return c->exit_law(j, l, Point{0, x}); };
      for (double t : {0.2, 0.5, 0.8}) {
        const double x = t * p.r;
        worst = std::max(worst, std::abs((f(x - h) - 2 * f(x) + f(x + h)) / (h * h) - 2 * l * f(x)));
      }
      const double r = p.r;
      const double d1l = (-3 * f(0) + 4 * f(h) - f(2 * h)) / (2 * h);
      const double d2l = (2 * f(0) - 5 * f(h) + 4 * f(2 * h) - f(3 * h)) / (h * h);
      const double d1r = (3 * f(r) - 4 * f(r - h) + f(r - 2 * h)) / (2 * h);
      const double d2r = (2 * f(r) - 5 * f(r - h) + 4 * f(r - 2 * h) - f(r - 3 * h)) / (h * h);
      const double F1 = p.p * d2l - (1 - p.p) * d1l + p.c * f(0);
      const double F2 = p.q * d2r + (1 - p.q) * d1r + p.d * f(r);
      const bool left = iv.gate_end(j) == WentzelInterval::End::left;
      worst = std::max(worst, std::abs(F1 - (left ? p.c : 0.0)));
      worst = std::max(worst, std::abs(F2 - (left ? 0.0 : p.d)));
    }
  }
  const StarGraphParams sp = ft::star3_params();
  const StarGraph star(sp);
  double centre = 0;
  for (std::size_t j = 0; j < sp.k; ++j) {
    double flux = 0;
    for (std::size_t k = 0; k < sp.k; ++k) {
      auto f = [&](double x) { return star.exit_law(j, l, Point{k, x}); };
      flux += sp.alpha[k] * (-3 * f(0) + 4 * f(h) - f(2 * h)) / (2 * h);
    }
    centre = std::max(centre, std::abs(sp.beta * 2 * l * star.exit_law(j, l, Point{0, 0.0}) - flux));
  }
  o.require(worst < 1e-6, "interval exit-law boundary problem");
  o.require(centre < 1e-6, "star centre functional");
  const TransmissionReport tr = check_transmission_conditions(ft::two_intervals(), kTwoIntervalG, 1.0);
  o.require(tr.max_relative_residual < 1e-4, "transmission");
  o.detail << "interval ODE/boundary residual " << sci(worst) << ", star centre " << sci(centre)
           << " (< 1e-6, h=1e-4); two-interval transmission " << sci(tr.max_relative_residual) << " < 1e-4";
}

// 5. Determinant limits.
void determinant_limits(Outcome& o) {
  double worst = 0;
  const auto cases = ft::determinant_limit_cases();
  for (const ft::LimitCase& c : cases) {
    const double err = std::abs(c.numeric - c.closed);
    worst = std::max(worst, err);
    o.require(err < 1e-4, c.name);
  }
  o.detail << cases.size() << " limits, max deviation " << sci(worst) << " < 1e-4";
}

// 6. Monte Carlo against the closed-form concatenation.
void monte_carlo(Outcome& o) {
  const ConcatSystem sys = ft::elementary_two_intervals();
  const Site start{0, Point{0, 0.4}};
  sim::SimConfig cfg;
  cfg.paths = 100000;
  cfg.seed = 20240611;
  const auto t0 = std::chrono::steady_clock::now();
  const auto recs = sim::simulate_concatenation(sys, start, cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double zmax = 0;
  for (std::size_t j = 0; j < 2; ++j) {
    const sim::Estimate f = sim::empirical_laplace(recs, 0.0, GateRef{0, j});
    const double z = (f.value - sys.component(0).excessive(j, start.point)) / f.stderr_;
    zmax = std::max(zmax, std::abs(z));
  }
  const SiteFunction one = constant_site_function(1.0);
  for (double l : {0.5, 2.0}) {
    const sim::Estimate e = sim::empirical_laplace(recs, l);
    const double exact = 1.0 - l * sys.solve(one, l).value(start);
    zmax = std::max(zmax, std::abs((e.value - exact) / e.stderr_));
  }
  o.require(zmax < 4, "z-scores");
  cfg.threads = 2;
  const auto again = sim::simulate_concatenation(sys, start, cfg);
  bool same = again.size() == recs.size();
  for (std::size_t i = 0; same && i < recs.size(); ++i)
    same = recs[i].lifetime == again[i].lifetime && recs[i].first_exit == again[i].first_exit &&
           recs[i].jumps.size() == again[i].jumps.size();
  for (double l : {0.5, 2.0})
    same = same && sim::empirical_laplace(recs, l).value == sim::empirical_laplace(again, l).value;
  o.require(same, "bit-exact rerun");
  o.detail << "1e5 paths (" << sci(secs) << " s); gate frequencies and E e^{-lambda tau} at lambda=0.5,2: max |z| "
           << sci(zmax) << " < 4; same-seed rerun bit-exact";
}

// 7. Averaging: convergence sweep, exact Q, time domain.
void averaging(Outcome& o) {
  const ConcatSystem two = ft::two_intervals();
  const auto rows = convergence_sweep(families_of(two), measures_of(two), kTwoIntervalG, 1.0, {1e-1, 1e-2, 1e-3});
  o.require(rows[0].error > rows[1].error && rows[1].error > rows[2].error, "sweep strictly decreasing");
  o.require(rows[2].error < 0.05 * rows[2].g_norm, "e(1e-3) < 0.05 |g|");

  // gamma_i (rho-weighted routing) from the interval closed form, entered by hand
  Eigen::Matrix2d q2;
  q2 << -1.35, 1.35, 1.75 / 3, -1.75 / 3;
  Eigen::Matrix3d q3;
  q3 << -1, 1, 0, 0, -2.5 / 3, 2.5 / 3, 3.4 / 1.6, 0, -3.4 / 1.6;
  const ConcatSystem cyc = ft::cyclic3();
  const double dq2 = (build_q_matrix(families_of(two), measures_of(two)).Q - q2).cwiseAbs().maxCoeff();
  const double dq3 = (build_q_matrix(families_of(cyc), measures_of(cyc)).Q - q3).cwiseAbs().maxCoeff();
  o.require(dq2 <= 1e-14 && dq3 <= 1e-14, "Q matrices");

  double td = 0;
  for (const TimeDomainRow& r : time_domain_check(families_of(two), measures_of(two), kTwoIntervalG, 1e-3, {0.5, 1, 2}))
    td = std::max(td, std::abs(r.value - r.limit));
  o.require(td < 5e-3, "time domain");
  o.detail << "e(eps) = " << sci(rows[0].error) << ", " << sci(rows[1].error) << ", " << sci(rows[2].error)
           << " (0.05|g| = " << sci(0.05 * rows[2].g_norm) << "); Q deviation " << sci(std::max(dq2, dq3))
           << "; time domain " << sci(td) << " < 5e-3";
}

// 8. Negative controls.
void negative_controls(Outcome& o) {
  const ConcatSystem sys = ft::negative_control();
  const double base = perturbed_law_negative_test(sys, 0.5, 2.0, 0.0, {0, 0}, kTwoIntervalG);
  const double pert = perturbed_law_negative_test(sys, 0.5, 2.0, 0.1, {0, 0}, kTwoIntervalG);
  o.require(pert > 100 * base, "perturbed residual > 100x baseline");

  std::string split_msg = "(no error)";
  try {
    IntervalFamily({1, 1, 1.0, 1.0, 1.0});
    o.require(false, "p=q=1 family accepted");
  } catch (const Error& e) {
    split_msg = e.message();
    o.require(e.kind() == ErrorKind::not_splittable, "p=q=1 error kind");
  }
  StarGraphParams p = ft::star3_params();
  p.beta = 1;
  p.alpha = {0, 0, 0};
  try {
    StarGraph s(p);
    o.require(false, "beta=1 star accepted");
  } catch (const Error& e) {
    o.require(e.message().find("kernel") != std::string::npos, "beta=1 message cites the kernel");
  }
  o.detail << "perturbed residual " << sci(pert) << " vs baseline " << sci(base) << " (x" << sci(pert / base)
           << "); p=q=1 rejected as not splittable; beta=1 rejected citing the kernel";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"resolvent axioms", resolvent_axioms},   {"exit-law axioms", exit_law_axioms},
      {"grid oracle", grid_refinement},         {"boundary identities", boundary_identities},
      {"determinant limits", determinant_limits}, {"Monte Carlo", monte_carlo},
      {"averaging", averaging},                 {"negative controls", negative_controls}};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    failures += !o.pass;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
