#pragma once

#include <cmath>
#include <sstream>
#include <vector>

#include "feller/components/component.hpp"
#include "feller/components/kernels.hpp"

namespace feller {

// Brownian motion on [0, r] with Feller-Wentzel conditions
//   p f''(0) - (1-p) f'(0) + c f(0) = 0,   q f''(r) + (1-q) f'(r) + d f(r) = 0.
struct WentzelIntervalParams {
  double p = 0.0;
  double q = 0.0;
  double c = 0.0;
  double d = 0.0;
  double r = 1.0;
};

struct IntervalCoefficients {
  double a11, a12, a21, a22, W;
};

// Raw coefficients of the 2x2 boundary system. They overflow for large
// sqrt(2 lambda) r; the component itself works with rescaled forms.
inline IntervalCoefficients interval_coefficients(const WentzelIntervalParams& p, double lambda) {
  check_lambda(lambda);
  const double k = std::sqrt(2 * lambda);
  IntervalCoefficients a{};
  a.a11 = 2 * lambda * p.p - k * (1 - p.p) + p.c;
  a.a12 = 2 * lambda * p.p + k * (1 - p.p) + p.c;
  a.a21 = std::exp(k * p.r) * (2 * lambda * p.q + k * (1 - p.q) + p.d);
  a.a22 = std::exp(-k * p.r) * (2 * lambda * p.q - k * (1 - p.q) + p.d);
  a.W = a.a11 * a.a22 - a.a21 * a.a12;
  return a;
}

// Cramer minors of the exit-law solution: l^1 = c W1 / W and l^2 = d W2 / W.
struct IntervalMinors {
  double W1, W2;
};

inline IntervalMinors interval_minors(const WentzelIntervalParams& p, double lambda, double x) {
  const IntervalCoefficients a = interval_coefficients(p, lambda);
  const double k = std::sqrt(2 * lambda);
  return {a.a22 * std::exp(k * x) - a.a21 * std::exp(-k * x), a.a11 * std::exp(-k * x) - a.a12 * std::exp(k * x)};
}

class WentzelInterval final : public ComponentProcess {
 public:
  enum class End { left, right };

  explicit WentzelInterval(WentzelIntervalParams p, QuadratureOptions opt = {})
      : p_(p), opt_(opt), space_(StateSpace::interval(p.r)) {
    require(p.p >= 0 && p.p <= 1 && p.q >= 0 && p.q <= 1, ErrorKind::invalid_argument,
            "interval: p and q must lie in [0, 1]");
    require(p.c >= 0 && p.d >= 0, ErrorKind::invalid_argument, "interval: c and d must be nonnegative");
    if (p.c > 0) ends_.push_back(End::left);
    if (p.d > 0) ends_.push_back(End::right);
  }

  const WentzelIntervalParams& params() const { return p_; }
  End gate_end(std::size_t j) const {
    check_gate(j);
    return ends_[j];
  }
  // Gate index of an end, or gate_count() when that end is closed.
  std::size_t gate_at(End e) const {
    for (std::size_t j = 0; j < ends_.size(); ++j)
      if (ends_[j] == e) return j;
    return ends_.size();
  }

  ComponentKind kind() const override { return ComponentKind::interval; }
  std::string describe() const override {
    std::ostringstream os;
    os << "interval(r=" << p_.r << ", p=" << p_.p << ", q=" << p_.q << ", c=" << p_.c << ", d=" << p_.d << ")";
    return os.str();
  }
  const StateSpace& space() const override { return space_; }
  std::size_t gate_count() const override { return ends_.size(); }
  std::string gate_label(std::size_t j) const override { return gate_end(j) == End::left ? "left" : "right"; }

  // Trap ends (q = 1 with d = 0, or p = 1 with c = 0) put an affine function in
  // the kernel of the generator once the other end is open.
  bool non_unique_representation() const override {
    return (p_.q == 1 && p_.d == 0 && p_.c > 0) || (p_.p == 1 && p_.c == 0 && p_.d > 0);
  }

  std::vector<double> resolvent(const PointFunction& g, double lambda, const std::vector<Point>& xs) const override {
    const Scaled s = scaled(lambda);
    const double k = s.k, r = p_.r;
    auto gs = [&](double y) { return g(Point{0, y}); };
    const double p0 = detail::right_convolution(gs, k, 0.0, r, opt_) / k;
    const double pr = detail::left_convolution(gs, k, 0.0, r, opt_) / k;
    const double g0 = g(Point{0, 0.0}), gr = g(Point{0, r});
    const double F1 = p_.p * (2 * lambda * p0 - 2 * g0) - (1 - p_.p) * k * p0 + p_.c * p0;
    const double F2 = p_.q * (2 * lambda * pr - 2 * gr) - (1 - p_.q) * k * pr + p_.d * pr;
    const double b1 = -F1, b2 = -F2;
    const double C = (b1 * s.er * (s.Q - s.v) - (s.P + s.u) * b2) / s.Wt;
    const double D = (s.er * (s.P - s.u) * b2 - (s.Q + s.v) * b1) / s.Wt;
    std::vector<double> out;
    out.reserve(xs.size());
    for (const Point& x : xs) {
      space_.require_contains(x);
      out.push_back(detail::free_green(gs, k, 0.0, r, x.x, opt_) + C * std::exp(k * (x.x - r)) +
                    D * std::exp(-k * x.x));
    }
    return out;
  }

  double exit_law(std::size_t gate, double lambda, const Point& x) const override {
    check_gate(gate);
    space_.require_contains(x);
    const Scaled s = scaled(lambda);
    const double k = s.k, r = p_.r, y = x.x;
    if (ends_[gate] == End::left) {
      const double ex = -std::expm1(-2 * k * (r - y));  // 1 - e^{-2k(r-x)}
      return p_.c * std::exp(-k * y) * (s.Q * ex + s.v * (2 - ex)) / s.den;
    }
    const double ex = -std::expm1(-2 * k * y);
    return p_.d * std::exp(k * (y - r)) * (s.P * ex + s.u * (2 - ex)) / s.den;
  }

  double excessive(std::size_t gate, const Point& x) const override {
    require(!ends_.empty(), ErrorKind::conservative_component,
            describe() + " has c = d = 0: no excessive functions exist for a conservative interval");
    check_gate(gate);
    space_.require_contains(x);
    const double c = p_.c, d = p_.d, r = p_.r, p = p_.p, q = p_.q, y = x.x;
    const double den = c * d * r + (1 - q) * c + (1 - p) * d;
    const bool left = ends_[gate] == End::left;
    if (den > 0) return left ? c * (d * (r - y) + 1 - q) / den : d * (c * y + 1 - p) / den;
    // Trap at the closed end: only one gate exists and it is reached with the
    // probability of hitting the open end first.
    if (left) return c * (r - y) / (c * r + 1 - p);
    return d * y / (d * r + 1 - q);
  }

 private:
  struct Scaled {
    double k, P, Q, u, v, er, Wt, den;
  };

  // Quantities scaled by e^{-kr}; den = -W e^{-kr} > 0 written without
  // cancellation.
  Scaled scaled(double lambda) const {
    check_lambda(lambda);
    Scaled s{};
    s.k = std::sqrt(2 * lambda);
    s.P = 2 * lambda * p_.p + p_.c;
    s.Q = 2 * lambda * p_.q + p_.d;
    s.u = s.k * (1 - p_.p);
    s.v = s.k * (1 - p_.q);
    s.er = std::exp(-s.k * p_.r);
    const double om = -std::expm1(-2 * s.k * p_.r);  // 1 - E
    s.den = (s.P * s.Q + s.u * s.v) * om + (s.P * s.v + s.u * s.Q) * (2 - om);
    s.Wt = -s.den;
    return s;
  }

  WentzelIntervalParams p_;
  QuadratureOptions opt_;
  StateSpace space_;
  std::vector<End> ends_;
};

}  // namespace feller
