#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "feller/numerics/extrapolation.hpp"
#include "feller/verify/handle.hpp"
#include "feller/verify/report.hpp"

namespace feller {

using ExitLawEvaluator = std::function<double(double, const Site&)>;

namespace detail {

inline std::string join_lambdas(const std::vector<double>& ls) {
  std::ostringstream os;
  os << "lambda={";
  for (std::size_t i = 0; i < ls.size(); ++i) os << (i ? ";" : "") << ls[i];
  os << "}";
  return os.str();
}

inline double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline std::vector<double> sample(const SiteFunction& g, const std::vector<Site>& grid) {
  std::vector<double> v;
  v.reserve(grid.size());
  for (const Site& s : grid) v.push_back(g(s));
  return v;
}

}  // namespace detail

// Hilbert equation (lambda - mu) R_mu R_lambda g = R_mu g - R_lambda g over all
// ordered pairs of distinct rates. The residual is divided by 1 + ||g||.
inline CheckReport check_hilbert(const ResolventHandle& h, const std::vector<double>& lambdas,
                                 const std::vector<SiteFunction>& gs, double tol = 1e-6) {
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    require(lambdas[i] > 0, ErrorKind::invalid_argument, "check_hilbert: rates must be positive");
    for (std::size_t j = 0; j < i; ++j)
      require(lambdas[i] != lambdas[j], ErrorKind::invalid_argument, "check_hilbert: rates must be distinct");
  }
  double worst = 0.0;
  for (const SiteFunction& g : gs) {
    const double gnorm = detail::sup_abs(detail::sample(g, h.grid));
    std::vector<std::vector<double>> R;
    for (double l : lambdas) R.push_back(h.apply(l, g));
    for (std::size_t a = 0; a < lambdas.size(); ++a) {
      const SiteFunction lifted = h.lift(R[a]);
      for (std::size_t b = 0; b < lambdas.size(); ++b) {
        if (a == b) continue;
        const double l = lambdas[a], m = lambdas[b];
        const std::vector<double> RmRl = h.apply(m, lifted);
        for (std::size_t i = 0; i < h.grid.size(); ++i)
          worst = std::max(worst, std::abs((l - m) * RmRl[i] - (R[b][i] - R[a][i])) / (1.0 + gnorm));
      }
    }
  }
  CheckReport r{"hilbert", detail::join_lambdas(lambdas), worst, tol, worst < tol,
                h.label + "; grid=" + std::to_string(h.grid.size()), ""};
  return r;
}

// Exit-law axioms: (a) nonnegative, nontrivial, bounded; (b) lambda -> 0+
// limit at most 1; (c) (lambda - mu) R_lambda l_mu = l_mu - l_lambda.
inline CheckReport check_exit_law(const ResolventHandle& h, const ExitLawEvaluator& law,
                                  const std::vector<double>& lambdas, double tol = 1e-6) {
  std::vector<std::string> failed;
  double worst = 0.0;
  bool nontrivial = false, nonneg = true, bounded = true;
  std::vector<std::vector<double>> L;
  for (double l : lambdas) {
    std::vector<double> v;
    for (const Site& s : h.grid) v.push_back(law(l, s));
    for (double x : v) {
      if (!std::isfinite(x)) bounded = false;
      if (x < -tol) {
        nonneg = false;
        worst = std::max(worst, -x);
      }
      if (x > tol) nontrivial = true;
    }
    L.push_back(std::move(v));
  }
  if (!nonneg) failed.push_back("(a) negative values");
  if (!nontrivial) failed.push_back("(a) identically zero");
  if (!bounded) failed.push_back("(a) not locally bounded");

  double excess = 0.0;
  for (const Site& s : h.grid) {
    const double lim = limit_at_zero([&](double l) { return law(l, s); }).value;
    excess = std::max(excess, lim - 1.0);
  }
  if (excess > tol) {
    failed.push_back("(b) limit exceeds 1");
    worst = std::max(worst, excess);
  }

  double functional = 0.0;
  for (std::size_t a = 0; a < lambdas.size(); ++a)
    for (std::size_t b = 0; b < lambdas.size(); ++b) {
      if (a == b) continue;
      const double l = lambdas[a], m = lambdas[b];
      const std::vector<double> RlLm = h.apply(l, [&](const Site& s) { return law(m, s); });
      for (std::size_t i = 0; i < h.grid.size(); ++i)
        functional = std::max(functional, std::abs((l - m) * RlLm[i] - (L[b][i] - L[a][i])));
    }
  if (!(functional < tol)) failed.push_back("(c) functional equation");
  worst = std::max(worst, functional);

  std::string detail;
  for (const std::string& f : failed) detail += (detail.empty() ? "" : "; ") + f;
  return CheckReport{"exit_law", detail::join_lambdas(lambdas), worst, tol, failed.empty(),
                     h.label + "; grid=" + std::to_string(h.grid.size()), detail};
}

inline std::vector<double> geometric_grid(double first, double ratio, std::size_t count) {
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) g[i] = first * std::pow(ratio, double(i));
  return g;
}

// (-1)^k k! f[l_i, ..., l_{i+k}] >= -tol * max|f| for k <= depth. On an
// equally spaced grid these are the alternating forward differences; divided
// differences keep the sign test valid on a geometric grid.
inline CheckReport check_complete_monotonicity(const std::function<double(double)>& f,
                                               const std::vector<double>& lambdas, int depth = 4,
                                               double tol = 1e-9) {
  require(depth >= 0 && depth <= 6, ErrorKind::invalid_argument, "complete monotonicity depth must be <= 6");
  require(lambdas.size() >= std::size_t(depth) + 8, ErrorKind::invalid_argument,
          "complete monotonicity grid needs at least depth + 8 points");
  std::vector<double> dd;
  for (double l : lambdas) dd.push_back(f(l));
  const double scale = std::max(detail::sup_abs(dd), 1e-300);
  double worst = 0.0;
  double fact = 1.0, sign = 1.0;
  for (int k = 0; k <= depth; ++k) {
    if (k > 0) {
      std::vector<double> next(dd.size() - 1);
      for (std::size_t i = 0; i + 1 < dd.size(); ++i)
        next[i] = (dd[i + 1] - dd[i]) / (lambdas[i + k] - lambdas[i]);
      dd = std::move(next);
      fact *= k;
      sign = -sign;
    }
    for (double v : dd) worst = std::max(worst, -sign * fact * v / scale);
  }
  std::ostringstream ps;
  ps << "depth=" << depth << "; points=" << lambdas.size() << "; range=[" << lambdas.front() << ", "
     << lambdas.back() << "]";
  return CheckReport{"complete_monotonicity", ps.str(), std::max(worst, 0.0), tol, worst <= tol, "", ""};
}

// d^n/dlambda^n l_lambda = (-1)^n n! R_lambda^n l_lambda for n = 1, 2, by
// central differences in lambda against nested resolvent application.
inline CheckReport check_exit_law_derivative(const ResolventHandle& h, const ExitLawEvaluator& law,
                                             const std::vector<double>& lambdas, int order = 1) {
  require(order == 1 || order == 2, ErrorKind::invalid_argument, "derivative identity is checked for n = 1, 2");
  double worst_ratio = 0.0, worst_abs = 0.0;
  for (double l : lambdas) {
    const double d = (order == 1 ? 1e-3 : 1e-2) * l;
    std::vector<double> R = h.apply(l, [&](const Site& s) { return law(l, s); });
    if (order == 2) R = h.apply(l, h.lift(R));
    for (std::size_t i = 0; i < h.grid.size(); ++i) {
      const Site& s = h.grid[i];
      double fd, rhs;
      if (order == 1) {
        fd = (law(l + d, s) - law(l - d, s)) / (2 * d);
        rhs = -R[i];
      } else {
        fd = (law(l + d, s) - 2 * law(l, s) + law(l - d, s)) / (d * d);
        rhs = 2 * R[i];
      }
      const double err = std::abs(fd - rhs);
      const double allowed = std::max(1e-5, 1e-3 * std::abs(rhs));
      worst_ratio = std::max(worst_ratio, err / allowed);
      worst_abs = std::max(worst_abs, err);
    }
  }
  return CheckReport{"exit_law_derivative", "n=" + std::to_string(order) + "; " + detail::join_lambdas(lambdas),
                     worst_abs, 1e-5, worst_ratio <= 1.0, h.label,
                     "tolerance max(1e-5, 1e-3|value|); worst error/allowed = " + format_number(worst_ratio)};
}

// lambda -> 0+ limit of the exit law at each grid site.
inline std::vector<double> extrapolated_excessive(const ExitLawEvaluator& law, const std::vector<Site>& grid) {
  std::vector<double> out;
  for (const Site& s : grid) out.push_back(limit_at_zero([&](double l) { return law(l, s); }).value);
  return out;
}

// l_lambda = phi - lambda R_lambda phi with phi the extrapolated excessive
// function.
inline CheckReport check_excessive_representation(const ResolventHandle& h, const ExitLawEvaluator& law,
                                                  const std::vector<double>& lambdas, double tol = 1e-5) {
  const std::vector<double> phi = extrapolated_excessive(law, h.grid);
  const SiteFunction phif = h.lift(phi);
  double worst = 0.0;
  for (double l : lambdas) {
    const std::vector<double> R = h.apply(l, phif);
    for (std::size_t i = 0; i < h.grid.size(); ++i)
      worst = std::max(worst, std::abs(law(l, h.grid[i]) - (phi[i] - l * R[i])));
  }
  return CheckReport{"excessive_representation", detail::join_lambdas(lambdas), worst, tol, worst < tol, h.label, ""};
}

// Same identity with a given phi. Needed on the half line, where phi jumps at
// the trap +infinity and no grid interpolant represents it.
inline CheckReport check_excessive_representation(const ResolventHandle& h, const ExitLawEvaluator& law,
                                                  const SiteFunction& phi, const std::vector<double>& lambdas,
                                                  double tol = 1e-5) {
  double worst = 0.0;
  for (double l : lambdas) {
    const std::vector<double> R = h.apply(l, phi);
    for (std::size_t i = 0; i < h.grid.size(); ++i)
      worst = std::max(worst, std::abs(law(l, h.grid[i]) - (phi(h.grid[i]) - l * R[i])));
  }
  return CheckReport{"excessive_representation", detail::join_lambdas(lambdas), worst, tol, worst < tol, h.label,
                     "closed-form phi"};
}

// Ratio ||(lambda R_lambda)^m f|| / ||f|| for a random grid function f. It
// tends to 0 when the generator kernel is trivial.
inline double kernel_probe(const ResolventHandle& h, double lambda, int iterations, unsigned seed = 7) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.5, 1.5);
  std::vector<double> f(h.grid.size());
  for (double& x : f) x = U(rng);
  const double f0 = detail::sup_abs(f);
  for (int m = 0; m < iterations; ++m) {
    std::vector<double> R = h.apply(lambda, h.lift(f));
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = lambda * R[i];
  }
  return detail::sup_abs(f) / f0;
}

}  // namespace feller
