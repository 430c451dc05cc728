#pragma once

#include <memory>
#include <random>
#include <vector>

#include "feller/components/absorbing.hpp"
#include "feller/components/halfline.hpp"
#include "feller/components/interval.hpp"
#include "feller/components/killed.hpp"
#include "feller/components/star.hpp"
#include "feller/components/transport.hpp"
#include "feller/concat/system.hpp"

namespace feller::testing {

inline std::shared_ptr<WentzelInterval> interval(double p, double q, double c, double d, double r,
                                                 QuadratureOptions opt = {}) {
  return std::make_shared<WentzelInterval>(WentzelIntervalParams{p, q, c, d, r}, opt);
}

inline StarGraphParams star3_params() {
  StarGraphParams s;
  s.k = 3;
  s.r = 1.0;
  s.beta = 0.3;
  s.alpha = {0.2, 0.3, 0.2};
  s.q = 0.4;
  s.d = 1.5;
  return s;
}

// One non-conservative representative of every closed-form family.
inline std::vector<ComponentPtr> example_components() {
  return {
      std::make_shared<HalfLine>(HalfLineParams{0.2, 1.0, 1.5}),
      interval(0.3, 0.6, 1.2, 0.7, 1.5),
      interval(1, 1, 1.0, 2.0, 1.0),
      interval(0, 0, 3.0, 0.0, 2.0),
      interval(1, 0, 0.8, 1.1, 1.0),
      std::make_shared<StarGraph>(star3_params()),
      std::make_shared<Transport>(2.0),
      std::make_shared<Killed>(interval(0, 0, 0, 0, 1.0), 0.7),
  };
}

// Same content as fixtures/two_intervals.def.
inline ConcatSystem two_intervals(QuadratureOptions opt = {}) {
  auto a = interval(0.0, 0.3, 1.0, 2.0, 1.0, opt);
  auto b = interval(0.5, 0.0, 1.5, 0.5, 2.0, opt);
  return ConcatSystem({a, b}, {RoutingMeasure({0, 0}, {Atom{1, Point{0, 0.0}, 1.0}}),
                               RoutingMeasure({0, 1}, {Atom{1, Point{0, 2.0}, 1.0}}),
                               RoutingMeasure({1, 0}, {Atom{0, Point{0, 0.0}, 0.5}, Atom{0, Point{0, 1.0}, 0.5}}),
                               RoutingMeasure({1, 1}, {Atom{0, Point{0, 0.5}, 1.0}})});
}

// Same content as fixtures/cyclic3.def.
inline ConcatSystem cyclic3(QuadratureOptions opt = {}) {
  return ConcatSystem({interval(0, 0, 1.0, 1.0, 1.0, opt), interval(0, 0, 0.5, 2.0, 1.5, opt),
                       interval(0, 0, 3.0, 0.4, 0.8, opt)},
                      {RoutingMeasure({0, 0}, {Atom{1, Point{0, 0.75}, 1.0}}),
                       RoutingMeasure({0, 1}, {Atom{1, Point{0, 0.75}, 1.0}}),
                       RoutingMeasure({1, 0}, {Atom{2, Point{0, 0.4}, 1.0}}),
                       RoutingMeasure({1, 1}, {Atom{2, Point{0, 0.1}, 0.5}, Atom{2, Point{0, 0.7}, 0.5}}),
                       RoutingMeasure({2, 0}, {Atom{0, Point{0, 0.5}, 1.0}}),
                       RoutingMeasure({2, 1}, {Atom{0, Point{0, 0.2}, 1.0}})});
}

// Same content as fixtures/elementary_two_intervals.def.
inline ConcatSystem elementary_two_intervals() {
  return ConcatSystem({interval(1, 1, 1.0, 2.0, 1.0), interval(1, 1, 0.5, 1.0, 1.5)},
                      {RoutingMeasure({0, 0}, {Atom{1, Point{0, 0.75}, 0.6}}),
                       RoutingMeasure({0, 1}, {Atom{1, Point{0, 0.3}, 0.5}}),
                       RoutingMeasure({1, 0}, {Atom{0, Point{0, 0.5}, 0.7}}),
                       RoutingMeasure({1, 1}, {Atom{0, Point{0, 0.2}, 0.4}})});
}

// Same content as fixtures/negative_control.def.
inline ConcatSystem negative_control() {
  return ConcatSystem({interval(1, 0.3, 40.0, 2.0, 1.0), interval(0.5, 0, 1.5, 0.5, 2.0)},
                      {RoutingMeasure({0, 0}, {Atom{1, Point{0, 1.0}, 1.0}}),
                       RoutingMeasure({0, 1}, {Atom{1, Point{0, 2.0}, 1.0}}),
                       RoutingMeasure({1, 0}, {Atom{0, Point{0, 0.5}, 1.0}}),
                       RoutingMeasure({1, 1}, {Atom{0, Point{0, 0.5}, 1.0}})});
}

inline SiteFunction smooth_g() {
  return [](const Site& s) {
    const double x = s.point.x;
    if (std::isinf(x)) return 0.0;
    return 1.0 / (1.0 + x) + 0.5 * std::exp(-2.0 * x) + 0.1 * double(s.point.edge) + 0.2 * double(s.component);
  };
}

struct RandomSystem {
  ConcatSystem system;
  bool probability;
  std::string summary;
};

// Randomised valid system with at most 4 components and 6 gates. Even seeds
// route with probability measures, odd seeds with sub-probability measures.
inline RandomSystem random_system(std::uint64_t seed) {
  std::mt19937_64 rng(seed * 7919 + 13);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto pick = [&](std::size_t n) { return std::size_t(rng() % n); };
  auto mix01 = [&] {
    const double u = U(rng);
    return u < 0.25 ? 0.0 : (u < 0.4 ? 1.0 : U(rng));
  };
  const bool probability = seed % 2 == 0;
  const std::size_t N = seed % 5 == 0 ? 1 : 2 + pick(3);
  std::vector<ComponentPtr> comps;
  std::size_t gates = 0;
  std::ostringstream os;
  for (std::size_t i = 0; i < N; ++i) {
    const std::size_t budget = 6 - gates;
    ComponentPtr c;
    const std::size_t kind = pick(6);
    if (kind == 0 && budget >= 3) {
      StarGraphParams p;
      p.k = 2 + pick(2);
      p.r = 0.5 + U(rng);
      p.beta = U(rng) < 0.5 ? 0.0 : 0.5 * U(rng);
      p.alpha.assign(p.k, (1 - p.beta) / double(p.k));
      p.q = mix01();
      p.d = budget >= p.k ? 0.3 + 2 * U(rng) : 0.0;
      c = std::make_shared<StarGraph>(p);
    } else if (kind == 1 && budget >= 1) {
      c = std::make_shared<HalfLine>(HalfLineParams{U(rng), 0.2 + U(rng), 0.3 + 2 * U(rng)});
    } else if (kind == 2 && budget >= 1) {
      c = std::make_shared<Transport>(0.3 + 2 * U(rng));
    } else if (kind == 3 && budget >= 1) {
      c = std::make_shared<Killed>(interval(mix01(), mix01(), 0, 0, 0.5 + U(rng)), 0.2 + U(rng));
    } else {
      double cc = 0.2 + 3 * U(rng), dd = 0.2 + 3 * U(rng);
      if (budget < 2) dd = 0;
      if (budget < 1) cc = 0;
      if (U(rng) < 0.2) (U(rng) < 0.5 ? cc : dd) = 0;
      c = interval(mix01(), mix01(), cc, dd, 0.5 + 1.5 * U(rng));
    }
    gates += c->gate_count();
    os << (i ? "; " : "") << c->describe();
    comps.push_back(c);
  }
  std::vector<RoutingMeasure> ms;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < comps[i]->gate_count(); ++j) {
      const std::size_t atoms = 1 + pick(2);
      const double total = probability ? 1.0 : 0.3 + 0.6 * U(rng);
      std::vector<Atom> as;
      for (std::size_t a = 0; a < atoms; ++a) {
        const std::size_t t = pick(N);
        const StateSpace& sp = comps[t]->space();
        Point pt{0, 0.0};
        if (sp.kind() == SpaceKind::star_graph) pt = {pick(sp.edge_count()), sp.length() * U(rng)};
        else if (sp.kind() == SpaceKind::half_line) pt = {0, 3 * U(rng)};
        else if (sp.kind() != SpaceKind::absorbing_points) pt = {0, sp.length() * U(rng)};
        as.push_back(Atom{t, pt, total / double(atoms)});
      }
      ms.emplace_back(GateRef{i, j}, std::move(as));
    }
  return RandomSystem{ConcatSystem(std::move(comps), std::move(ms)), probability, os.str()};
}

// Nonnegative smooth test function with random coefficients.
inline SiteFunction random_g(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double a = U(rng), b = U(rng), c = U(rng), d = 0.5 * U(rng);
  return [=](const Site& s) {
    const double x = s.point.x;
    if (std::isinf(x)) return a + d * double(s.point.edge + s.component);
    return a + b / (1.0 + x) + c * std::exp(-1.5 * x) + d * double(s.point.edge + s.component);
  };
}

}  // namespace feller::testing
