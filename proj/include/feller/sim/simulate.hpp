#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "feller/components/interval.hpp"
#include "feller/components/killed.hpp"
#include "feller/components/transport.hpp"
#include "feller/concat/system.hpp"

namespace feller::sim {

struct SimConfig {
  std::size_t paths = 100000;
  double dt = 0.0;       // 0: r^2 / 4000 for the longest interval
  std::uint64_t seed = 1;
  double horizon = 0.0;  // 0: 50 r^2 (r = longest interval, at least 1)
  unsigned threads = 1;
};

struct Jump {
  GateRef gate;
  std::optional<Site> landing;  // empty when the path dies
};

struct PathRecord {
  Site start;
  double lifetime = 0.0;         // death time, or the horizon when truncated
  bool truncated = false;        // still alive at the horizon
  std::optional<GateRef> first_gate;
  double first_exit = kInf;      // time of the first exit through a gate
  std::vector<Jump> jumps;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Independent generator per path, so results do not depend on scheduling.
inline std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
}

inline bool simulatable(const ComponentProcess& c) {
  switch (c.kind()) {
    case ComponentKind::interval: {
      const auto& p = static_cast<const WentzelInterval&>(c).params();
      return p.p == 1.0 && p.q == 1.0;
    }
    case ComponentKind::transport:
    case ComponentKind::killed:
    case ComponentKind::absorbing_points: return true;
    default: return false;
  }
}

namespace detail {

struct SegmentResult {
  double duration = kInf;  // kInf: never exits
  std::size_t gate = 0;
  bool exits = false;
};

// Brownian motion on [0, r] until it hits an end, with the bridge crossing
// probability exp(-2 d0 d1 / dt) checked at both ends in every step; then an
// exponential holding time with rate c/2 (left) or d/2 (right) ending in an
// exit. A zero rate makes the end a trap.
inline SegmentResult interval_segment(const WentzelInterval& c, double x, double dt, double budget,
                                      std::mt19937_64& rng) {
  const auto& p = c.params();
  std::normal_distribution<double> Z(0.0, 1.0);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double sdt = std::sqrt(dt);
  double t = 0.0;
  bool at_left;
  if (x <= 0.0) {
    at_left = true;
  } else if (x >= p.r) {
    at_left = false;
  } else {
    for (;;) {
      if (t > budget) return {};
      const double y = x + sdt * Z(rng);
      if (y <= 0.0 || y >= p.r) {
        at_left = y <= 0.0;
        t += 0.5 * dt;
        break;
      }
      if (U(rng) < std::exp(-2.0 * x * y / dt)) {
        at_left = true;
        t += 0.5 * dt;
        break;
      }
      if (U(rng) < std::exp(-2.0 * (p.r - x) * (p.r - y) / dt)) {
        at_left = false;
        t += 0.5 * dt;
        break;
      }
      x = y;
      t += dt;
    }
  }
  const double rate = 0.5 * (at_left ? p.c : p.d);
  if (rate <= 0.0) return {};
  std::exponential_distribution<double> hold(rate);
  SegmentResult r;
  r.duration = t + hold(rng);
  r.gate = c.gate_at(at_left ? WentzelInterval::End::left : WentzelInterval::End::right);
  r.exits = true;
  return r;
}

inline SegmentResult segment(const ComponentProcess& c, const Point& x, double dt, double budget,
                             std::mt19937_64& rng) {
  switch (c.kind()) {
    case ComponentKind::interval:
      return interval_segment(static_cast<const WentzelInterval&>(c), x.x, dt, budget, rng);
    case ComponentKind::transport: {
      const double a = static_cast<const Transport&>(c).alpha();
      if (a <= 0) return {};
      std::exponential_distribution<double> hold(a);
      return {(1.0 - x.x) + hold(rng), 0, true};
    }
    case ComponentKind::killed: {
      std::exponential_distribution<double> life(static_cast<const Killed&>(c).alpha());
      return {life(rng), 0, true};
    }
    default: return {};
  }
}

inline double longest_interval(const ConcatSystem& sys) {
  double r = 0.0;
  for (std::size_t i = 0; i < sys.component_count(); ++i)
    if (sys.component(i).kind() == ComponentKind::interval)
      r = std::max(r, static_cast<const WentzelInterval&>(sys.component(i)).params().r);
  return r;
}

}  // namespace detail

// Chains component lifetimes: after an exit through (i, j) the path lands on
// an atom of the routing measure with probability equal to its weight and
// dies with the remaining probability.
inline std::vector<PathRecord> simulate_concatenation(const ConcatSystem& sys, const Site& start,
                                                      const SimConfig& cfg) {
  for (std::size_t i = 0; i < sys.component_count(); ++i)
    if (!simulatable(sys.component(i)))
      throw Error(ErrorKind::unsupported_simulation,
                  "only elementary intervals (p = q = 1), transport and killed components are simulated; got " +
                      sys.component(i).describe());
  sys.component(start.component).space().require_contains(start.point);
  const double rmax = detail::longest_interval(sys);
  const double dt = cfg.dt > 0 ? cfg.dt : (rmax > 0 ? rmax * rmax / 4000.0 : 1e-3);
  if (rmax > 0 && dt > rmax * rmax / 100.0)
    throw Error(ErrorKind::invalid_argument, "time step dt exceeds r^2/100");
  const double horizon = cfg.horizon > 0 ? cfg.horizon : 50.0 * std::max(1.0, rmax * rmax);
  require(cfg.paths >= 1, ErrorKind::invalid_argument, "need at least one path");

  std::vector<PathRecord> out(cfg.paths);
  auto run = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) {
      std::mt19937_64 rng = path_rng(cfg.seed, k);
      std::uniform_real_distribution<double> U(0.0, 1.0);
      PathRecord rec;
      rec.start = start;
      Site at = start;
      double t = 0.0;
      for (;;) {
        const detail::SegmentResult s = detail::segment(sys.component(at.component), at.point, dt, horizon - t, rng);
        if (!s.exits || t + s.duration > horizon) {
          rec.truncated = true;
          rec.lifetime = horizon;
          break;
        }
        t += s.duration;
        const GateRef g{at.component, s.gate};
        if (!rec.first_gate) {
          rec.first_gate = g;
          rec.first_exit = t;
        }
        const RoutingMeasure& m = sys.measure(sys.gate_index(g));
        double u = U(rng);
        std::optional<Site> land;
        for (const Atom& a : m.atoms()) {
          if (u < a.weight) {
            land = a.site();
            break;
          }
          u -= a.weight;
        }
        rec.jumps.push_back({g, land});
        if (!land) {
          rec.lifetime = t;
          break;
        }
        at = *land;
      }
      out[k] = std::move(rec);
    }
  };
  const unsigned th = std::max(1u, cfg.threads);
  if (th == 1) {
    run(0, cfg.paths);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (cfg.paths + th - 1) / th;
    for (unsigned w = 0; w < th; ++w) {
      const std::size_t lo = std::min(cfg.paths, w * chunk), hi = std::min(cfg.paths, lo + chunk);
      pool.emplace_back(run, lo, hi);
    }
    for (auto& t : pool) t.join();
  }
  return out;
}

inline std::vector<PathRecord> simulate_elementary_interval(const WentzelIntervalParams& p, double x,
                                                            const SimConfig& cfg) {
  require(p.p == 1.0 && p.q == 1.0, ErrorKind::unsupported_simulation,
          "path simulation of an interval needs elementary exits p = q = 1");
  ConcatSystem sys({std::make_shared<WentzelInterval>(p)}, {});
  return simulate_concatenation(sys, Site{0, Point{0, x}}, cfg);
}

inline std::vector<PathRecord> simulate_transport(double alpha, double x, const SimConfig& cfg) {
  ConcatSystem sys({std::make_shared<Transport>(alpha)}, {});
  return simulate_concatenation(sys, Site{0, Point{0, x}}, cfg);
}

struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
  double truncated_fraction = 0.0;
  std::size_t n = 0;
};

// Pairwise summation: the result does not depend on how paths were chunked.
inline double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

inline Estimate mean_with_error(const std::vector<double>& x) {
  Estimate e;
  e.n = x.size();
  e.value = pairwise_sum(x.data(), x.size()) / double(x.size());
  std::vector<double> sq(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) sq[i] = (x[i] - e.value) * (x[i] - e.value);
  const double var = x.size() > 1 ? pairwise_sum(sq.data(), sq.size()) / double(x.size() - 1) : 0.0;
  e.stderr_ = std::sqrt(var / double(x.size()));
  return e;
}

// E_x e^{-lambda zeta} over whole lifetimes; truncated paths score 0. With a
// gate filter: E_x[e^{-lambda tau}; first exit through gate], tau the first
// exit time.
inline Estimate empirical_laplace(const std::vector<PathRecord>& recs, double lambda,
                                  std::optional<GateRef> gate = std::nullopt) {
  require(recs.size() >= 1000, ErrorKind::invalid_argument, "empirical Laplace transform needs at least 1000 paths");
  require(lambda >= 0, ErrorKind::invalid_argument, "lambda must be nonnegative");
  std::vector<double> x(recs.size());
  std::size_t trunc = 0;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const PathRecord& r = recs[i];
    if (r.truncated) ++trunc;
    if (gate) {
      const bool hit = r.first_gate && *r.first_gate == *gate;
      x[i] = hit ? std::exp(-lambda * r.first_exit) : 0.0;
    } else {
      x[i] = r.truncated ? 0.0 : std::exp(-lambda * r.lifetime);
    }
  }
  Estimate e = mean_with_error(x);
  e.truncated_fraction = double(trunc) / double(recs.size());
  return e;
}

}  // namespace feller::sim
