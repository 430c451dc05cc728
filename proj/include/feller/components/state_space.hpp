#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "feller/core/error.hpp"
#include "feller/core/types.hpp"
#include "feller/numerics/interpolation.hpp"

namespace feller {

enum class SpaceKind { interval, half_line, star_graph, absorbing_points, transport };

inline const char* to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::interval: return "interval";
    case SpaceKind::half_line: return "half_line";
    case SpaceKind::star_graph: return "star_graph";
    case SpaceKind::absorbing_points: return "absorbing_points";
    case SpaceKind::transport: return "transport";
  }
  return "?";
}

// Geometry of a component. The compactified half line is gridded uniformly in
// t = x / (L + x), so the point at infinity is the last grid node.
class StateSpace {
 public:
  static StateSpace interval(double r) {
    require(r > 0 && std::isfinite(r), ErrorKind::invalid_argument, "interval length must be positive");
    return StateSpace(SpaceKind::interval, 1, r);
  }
  static StateSpace half_line(double scale = 1.0) {
    StateSpace s(SpaceKind::half_line, 1, kInf);
    s.scale_ = scale;
    return s;
  }
  static StateSpace star_graph(std::size_t k, double r) {
    require(k >= 2, ErrorKind::invalid_argument, "star graph needs at least 2 edges");
    require(r > 0 && std::isfinite(r), ErrorKind::invalid_argument, "star edge length must be positive");
    return StateSpace(SpaceKind::star_graph, k, r);
  }
  static StateSpace absorbing_points(std::size_t n) {
    require(n >= 1, ErrorKind::invalid_argument, "need at least one absorbing point");
    return StateSpace(SpaceKind::absorbing_points, n, 0.0);
  }
  static StateSpace transport() { return StateSpace(SpaceKind::transport, 1, 1.0); }

  SpaceKind kind() const { return kind_; }
  std::size_t edge_count() const { return edges_; }
  double length() const { return length_; }
  double half_line_scale() const { return scale_; }

  bool contains(const Point& p) const {
    if (kind_ == SpaceKind::absorbing_points) return p.edge < edges_;
    if (p.edge >= edges_) return false;
    if (kind_ == SpaceKind::half_line) return p.x >= 0.0;  // +inf allowed
    return p.x >= 0.0 && p.x <= length_;
  }

  void require_contains(const Point& p) const {
    if (!contains(p)) {
      std::ostringstream os;
      os << "point (" << p.edge << ", " << p.x << ") is outside the " << to_string(kind_) << " state space";
      throw Error(ErrorKind::invalid_argument, os.str());
    }
  }

  // Number of grid nodes for n subintervals per edge.
  std::size_t grid_size(std::size_t n) const {
    switch (kind_) {
      case SpaceKind::absorbing_points: return edges_;
      case SpaceKind::star_graph: return 1 + edges_ * n;
      default: return n + 1;
    }
  }

  std::vector<Point> grid(std::size_t n) const {
    require(n >= 4 || kind_ == SpaceKind::absorbing_points, ErrorKind::invalid_argument,
            "grid needs at least 4 subintervals per edge");
    std::vector<Point> pts;
    pts.reserve(grid_size(n));
    switch (kind_) {
      case SpaceKind::absorbing_points:
        for (std::size_t i = 0; i < edges_; ++i) pts.push_back({i, 0.0});
        break;
      case SpaceKind::star_graph:
        pts.push_back({0, 0.0});
        for (std::size_t j = 0; j < edges_; ++j)
          for (std::size_t i = 1; i <= n; ++i) pts.push_back({j, length_ * double(i) / double(n)});
        break;
      case SpaceKind::half_line:
        for (std::size_t i = 0; i <= n; ++i) pts.push_back({0, from_t(double(i) / double(n))});
        break;
      default:
        for (std::size_t i = 0; i <= n; ++i) pts.push_back({0, length_ * double(i) / double(n)});
    }
    return pts;
  }

  double to_t(double x) const { return std::isinf(x) ? 1.0 : x / (scale_ + x); }
  double from_t(double t) const { return t >= 1.0 ? kInf : scale_ * t / (1.0 - t); }

  // Builds a continuous function from values on grid(n).
  PointFunction interpolate(std::size_t n, const std::vector<double>& values) const {
    require(values.size() == grid_size(n), ErrorKind::invalid_argument, "interpolate: value count does not match grid");
    if (kind_ == SpaceKind::absorbing_points) {
      auto v = std::make_shared<std::vector<double>>(values);
      return [v](const Point& p) { return (*v)[p.edge]; };
    }
    if (kind_ == SpaceKind::star_graph) {
      auto edges = std::make_shared<std::vector<UniformCubic>>();
      for (std::size_t j = 0; j < edges_; ++j) {
        std::vector<double> e(n + 1);
        e[0] = values[0];
        for (std::size_t i = 1; i <= n; ++i) e[i] = values[1 + j * n + (i - 1)];
        edges->emplace_back(0.0, length_, std::move(e));
      }
      return [edges](const Point& p) { return (*edges)[p.edge](p.x); };
    }
    if (kind_ == SpaceKind::half_line) {
      auto f = std::make_shared<UniformCubic>(0.0, 1.0, values);
      const double L = scale_;
      return [f, L](const Point& p) { return (*f)(std::isinf(p.x) ? 1.0 : p.x / (L + p.x)); };
    }
    auto f = std::make_shared<UniformCubic>(0.0, length_, values);
    return [f](const Point& p) { return (*f)(p.x); };
  }

 private:
  StateSpace(SpaceKind k, std::size_t edges, double length) : kind_(k), edges_(edges), length_(length) {}

  SpaceKind kind_;
  std::size_t edges_;
  double length_;
  double scale_ = 1.0;
};

}  // namespace feller
