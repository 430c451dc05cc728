#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "feller/averaging/accelerated.hpp"
#include "feller/components/interval.hpp"
#include "feller/components/killed.hpp"
#include "feller/components/star.hpp"
#include "feller/components/transport.hpp"
#include "feller/numerics/quadrature.hpp"

namespace feller {

using ProjectionFunctional = std::function<double(const PointFunction&)>;

struct SplittingData {
  std::vector<double> rho;  // indexed by the gate numbering of the component
  double gamma = 0.0;
  ProjectionFunctional projection;
  std::string projection_text;
  // Normalising constants of the interval and star families; NaN when unused.
  double m_interval = std::numeric_limits<double>::quiet_NaN();
  double m_star = std::numeric_limits<double>::quiet_NaN();
};

// eps -> component with scaled boundary permeability. `base(eps)` carries
// the scaled coefficients, `at(eps)` additionally runs at speed 1/eps.
class SplittableFamily {
 public:
  virtual ~SplittableFamily() = default;
  virtual std::string describe() const = 0;
  virtual ComponentPtr base(double eps) const = 0;
  // Honest process reached at eps = 0.
  virtual ComponentPtr conservative_limit() const = 0;
  const SplittingData& data() const { return data_; }

  ComponentPtr at(double eps) const { return std::make_shared<Accelerated>(base(eps), eps); }
  std::size_t gate_count() const { return data_.rho.size(); }

 protected:
  SplittingData data_;
};

using FamilyPtr = std::shared_ptr<const SplittableFamily>;

namespace detail {

inline void require_eps(double eps) {
  require(eps > 0 && eps <= 1, ErrorKind::invalid_argument, "scaling parameter eps must lie in (0, 1]");
}

inline ProjectionFunctional interval_projection(const WentzelIntervalParams& p, double M, QuadratureOptions opt) {
  return [p, M, opt](const PointFunction& g) {
    double s = p.p * (1 - p.q) * g(Point{0, 0.0}) + p.q * (1 - p.p) * g(Point{0, p.r});
    if (p.p != 1 && p.q != 1)
      s += (1 - p.p) * (1 - p.q) * integrate([&](double x) { return g(Point{0, x}); }, 0.0, p.r, opt);
    return s / M;
  };
}

inline double interval_m(const WentzelIntervalParams& p) {
  return p.p * (1 - p.q) + p.q * (1 - p.p) + (1 - p.p) * (1 - p.q) * p.r;
}

inline double star_m(const StarGraphParams& p) {
  return p.beta * (1 - p.q) + (1 - p.beta) * p.q + (1 - p.beta) * (1 - p.q) * p.r;
}

inline ProjectionFunctional star_projection(const StarGraphParams& p, double M, QuadratureOptions opt) {
  return [p, M, opt](const PointFunction& g) {
    double s = p.beta * (1 - p.q) * g(Point{0, 0.0});
    for (std::size_t j = 0; j < p.k; ++j) {
      double e = p.q * g(Point{j, p.r});
      if (p.q != 1) e += (1 - p.q) * integrate([&](double x) { return g(Point{j, x}); }, 0.0, p.r, opt);
      s += p.alpha[j] * e;
    }
    return s / M;
  };
}

}  // namespace detail

// Interval with (c, d) -> (eps c, eps d); p and q fixed.
class IntervalFamily final : public SplittableFamily {
 public:
  explicit IntervalFamily(WentzelIntervalParams p, QuadratureOptions opt = {}) : p_(p), opt_(opt) {
    WentzelInterval probe(p, opt);
    if (p.p == 1 && p.q == 1)
      throw Error(ErrorKind::not_splittable,
                  "interval with p = q = 1 is not asymptotically splittable: its excessive functions depend on x "
                  "for every eps (M = p(1-q) + q(1-p) + (1-p)(1-q) r vanishes)");
    require(probe.gate_count() > 0, ErrorKind::not_splittable, "interval family needs c > 0 or d > 0");
    const double M = detail::interval_m(p);
    const double a = p.c * (1 - p.q), b = p.d * (1 - p.p);
    require(a + b > 0, ErrorKind::not_splittable,
            "interval family: c(1-q) + d(1-p) = 0, so gamma = 0 and no exit survives the limit");
    data_.m_interval = M;
    data_.gamma = (a + b) / (2 * M);
    for (std::size_t j = 0; j < probe.gate_count(); ++j)
      data_.rho.push_back(probe.gate_end(j) == WentzelInterval::End::left ? a / (a + b) : b / (a + b));
    data_.projection = detail::interval_projection(p, M, opt);
    std::ostringstream os;
    os << "[" << p.p * (1 - p.q) << " g(0) + " << p.q * (1 - p.p) << " g(r) + " << (1 - p.p) * (1 - p.q)
       << " int g] / " << M;
    data_.projection_text = os.str();
  }

  const WentzelIntervalParams& params() const { return p_; }
  std::string describe() const override { return "interval family over " + WentzelInterval(p_, opt_).describe(); }
  ComponentPtr base(double eps) const override {
    detail::require_eps(eps);
    WentzelIntervalParams q = p_;
    q.c *= eps;
    q.d *= eps;
    return std::make_shared<WentzelInterval>(q, opt_);
  }
  ComponentPtr conservative_limit() const override {
    WentzelIntervalParams q = p_;
    q.c = q.d = 0;
    return std::make_shared<WentzelInterval>(q, opt_);
  }

 private:
  WentzelIntervalParams p_;
  QuadratureOptions opt_;
};

// Star graph with d -> eps d.
class StarFamily final : public SplittableFamily {
 public:
  explicit StarFamily(StarGraphParams p, QuadratureOptions opt = {}) : p_(p), opt_(opt) {
    if (p.beta == 1)
      throw Error(ErrorKind::not_splittable, "star family with beta = 1 is not asymptotically splittable");
    if (p.q == 1)
      throw Error(ErrorKind::not_splittable,
                  "star family with q = 1 is not asymptotically splittable: the outer ends are sticky");
    StarGraph(p, opt);  // validates the parameters
    require(p.d > 0, ErrorKind::not_splittable, "star family needs d > 0");
    const double M = detail::star_m(p);
    data_.m_star = M;
    data_.gamma = (1 - p.beta) * p.d / (2 * M);
    for (std::size_t j = 0; j < p.k; ++j) data_.rho.push_back(p.alpha[j] / (1 - p.beta));
    data_.projection = detail::star_projection(p, M, opt);
    std::ostringstream os;
    os << "[" << p.beta * (1 - p.q) << " g(centre) + sum_j alpha_j (" << p.q << " g_j(r) + " << 1 - p.q
       << " int g_j)] / " << M;
    data_.projection_text = os.str();
  }

  const StarGraphParams& params() const { return p_; }
  std::string describe() const override { return "star family over " + StarGraph(p_, opt_).describe(); }
  ComponentPtr base(double eps) const override {
    detail::require_eps(eps);
    StarGraphParams q = p_;
    q.d *= eps;
    return std::make_shared<StarGraph>(q, opt_);
  }
  ComponentPtr conservative_limit() const override {
    StarGraphParams q = p_;
    q.d = 0;
    return std::make_shared<StarGraph>(q, opt_);
  }

 private:
  StarGraphParams p_;
  QuadratureOptions opt_;
};

// Transport at unit speed killed at rate eps alpha after reaching x = 1.
class TransportFamily final : public SplittableFamily {
 public:
  explicit TransportFamily(double alpha, QuadratureOptions opt = {}) : alpha_(alpha), opt_(opt) {
    require(alpha > 0, ErrorKind::not_splittable, "transport family needs alpha > 0");
    data_.rho = {1.0};
    data_.gamma = alpha;
    data_.projection = [](const PointFunction& g) { return g(Point{0, 1.0}); };
    data_.projection_text = "g(1)";
  }
  std::string describe() const override { return "transport family, alpha=" + std::to_string(alpha_); }
  ComponentPtr base(double eps) const override {
    detail::require_eps(eps);
    return std::make_shared<Transport>(eps * alpha_, opt_);
  }
  ComponentPtr conservative_limit() const override { return std::make_shared<Transport>(0.0, opt_); }

 private:
  double alpha_;
  QuadratureOptions opt_;
};

// Exponential killing at rate eps alpha on top of an honest base whose
// semigroup converges to a known projection: transport without killing, a
// conservative non-sticky interval, or a star graph with d = 0.
class KilledFamily final : public SplittableFamily {
 public:
  KilledFamily(ComponentPtr base, double alpha) : base_(std::move(base)), alpha_(alpha) {
    require(base_ != nullptr, ErrorKind::invalid_argument, "killed family: base missing");
    require(alpha > 0, ErrorKind::not_splittable, "killed family needs alpha > 0");
    require(base_->conservative(), ErrorKind::conservative_component, "killed family: base must be conservative");
    data_.rho = {1.0};
    data_.gamma = alpha;
    switch (base_->kind()) {
      case ComponentKind::transport:
        data_.projection = [](const PointFunction& g) { return g(Point{0, 1.0}); };
        data_.projection_text = "g(1)";
        break;
      case ComponentKind::interval: {
        const auto& p = static_cast<const WentzelInterval&>(*base_).params();
        if (p.p == 1 && p.q == 1)
          throw Error(ErrorKind::not_splittable, "killed family: interval base with p = q = 1 has no ergodic limit");
        data_.projection = detail::interval_projection(p, detail::interval_m(p), {});
        data_.projection_text = "interval ergodic projection";
        data_.m_interval = detail::interval_m(p);
        break;
      }
      case ComponentKind::star_graph: {
        const auto& p = static_cast<const StarGraph&>(*base_).params();
        if (p.q == 1) throw Error(ErrorKind::not_splittable, "killed family: star base with q = 1 has no ergodic limit");
        data_.projection = detail::star_projection(p, detail::star_m(p), {});
        data_.projection_text = "star ergodic projection";
        data_.m_star = detail::star_m(p);
        break;
      }
      default:
        throw Error(ErrorKind::not_splittable,
                    "killed family: no ergodic projection known for base " + base_->describe());
    }
  }
  std::string describe() const override { return "killed family over " + base_->describe(); }
  ComponentPtr base(double eps) const override {
    detail::require_eps(eps);
    return std::make_shared<Killed>(base_, eps * alpha_);
  }
  ComponentPtr conservative_limit() const override { return base_; }

 private:
  ComponentPtr base_;
  double alpha_;
};

// Family matching the parameters of a component at eps = 1.
inline FamilyPtr family_of(const ComponentProcess& c) {
  switch (c.kind()) {
    case ComponentKind::interval:
      return std::make_shared<IntervalFamily>(static_cast<const WentzelInterval&>(c).params());
    case ComponentKind::star_graph:
      return std::make_shared<StarFamily>(static_cast<const StarGraph&>(c).params());
    case ComponentKind::transport:
      return std::make_shared<TransportFamily>(static_cast<const Transport&>(c).alpha());
    case ComponentKind::killed: {
      const auto& k = static_cast<const Killed&>(c);
      return std::make_shared<KilledFamily>(k.base_ptr(), k.alpha());
    }
    default:
      throw Error(ErrorKind::not_splittable, c.describe() + " is not one of the asymptotically splittable families");
  }
}

}  // namespace feller
