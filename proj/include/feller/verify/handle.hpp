#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "feller/components/component.hpp"
#include "feller/concat/system.hpp"

namespace feller {

// Type-erased resolvent: evaluates R_lambda g on a fixed grid of sites and
// turns grid values back into a function so resolvents can be composed.
struct ResolventHandle {
  std::string label;
  std::size_t resolution = 0;
  std::vector<Site> grid;
  std::function<std::vector<double>(double, const SiteFunction&)> apply;
  std::function<SiteFunction(const std::vector<double>&)> lift;
};

inline ResolventHandle component_handle(ComponentPtr c, std::size_t n) {
  ResolventHandle h;
  h.label = c->describe();
  h.resolution = n;
  std::vector<Point> pts = c->space().grid(n);
  for (const Point& p : pts) h.grid.push_back({0, p});
  h.apply = [c, pts](double lambda, const SiteFunction& g) { return c->resolvent(restrict_to(g, 0), lambda, pts); };
  h.lift = [c, n](const std::vector<double>& v) -> SiteFunction {
    PointFunction f = c->space().interpolate(n, v);
    return [f](const Site& s) { return f(s.point); };
  };
  return h;
}

inline ResolventHandle system_handle(const ConcatSystem& sys, std::size_t n) {
  auto s = std::make_shared<const ConcatSystem>(sys);
  ResolventHandle h;
  h.label = "concatenation of " + std::to_string(sys.component_count()) + " components";
  h.resolution = n;
  h.grid = sys.grid(n);
  auto grid = h.grid;
  h.apply = [s, grid](double lambda, const SiteFunction& g) { return s->solve(g, lambda).values(grid); };
  h.lift = [s, n](const std::vector<double>& v) { return s->interpolate(n, v); };
  return h;
}

// R_lambda = 1 / (lambda + gamma) on a single point.
inline ResolventHandle scalar_handle(double gamma) {
  ResolventHandle h;
  h.label = "scalar(gamma=" + std::to_string(gamma) + ")";
  h.grid = {Site{0, Point{0, 0.0}}};
  h.apply = [gamma](double lambda, const SiteFunction& g) {
    return std::vector<double>{g(Site{0, Point{0, 0.0}}) / (lambda + gamma)};
  };
  h.lift = [](const std::vector<double>& v) -> SiteFunction {
    const double c = v.front();
    return [c](const Site&) { return c; };
  };
  return h;
}

}  // namespace feller
