#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <sstream>
#include <string>

#include "feller/core/error.hpp"

namespace feller {

// A point of a component state space. Single-edge spaces use edge 0; star
// graphs use edge j in [0, k) with (j, 0) identified with the centre; the
// absorbing-point space uses edge as the point index and ignores x.
struct Point {
  std::size_t edge = 0;
  double x = 0.0;
};

inline bool operator==(const Point& a, const Point& b) { return a.edge == b.edge && a.x == b.x; }

// A point of the union space: component index plus local point.
struct Site {
  std::size_t component = 0;
  Point point;
};

using PointFunction = std::function<double(const Point&)>;
using SiteFunction = std::function<double(const Site&)>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kLambdaMin = 1e-6;
inline constexpr double kLambdaMax = 1e8;

inline void check_lambda(double lambda) {
  if (!(lambda >= kLambdaMin && lambda <= kLambdaMax)) {
    std::ostringstream os;
    os << "lambda = " << lambda << " outside [" << kLambdaMin << ", " << kLambdaMax << "]";
    throw Error(ErrorKind::range, os.str());
  }
}

inline PointFunction restrict_to(const SiteFunction& g, std::size_t component) {
  return [g, component](const Point& p) { return g(Site{component, p}); };
}

inline PointFunction constant_function(double value) {
  return [value](const Point&) { return value; };
}

inline SiteFunction constant_site_function(double value) {
  return [value](const Site&) { return value; };
}

}  // namespace feller
