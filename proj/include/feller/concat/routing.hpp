#pragma once

#include <cstddef>
#include <sstream>
#include <vector>

#include "feller/core/error.hpp"
#include "feller/core/types.hpp"

namespace feller {

struct GateRef {
  std::size_t component = 0;
  std::size_t gate = 0;
};

inline bool operator==(const GateRef& a, const GateRef& b) { return a.component == b.component && a.gate == b.gate; }

struct Atom {
  std::size_t component = 0;
  Point point;
  double weight = 0.0;
  Site site() const { return Site{component, point}; }
};

// Finitely supported sub-probability measure describing where the process
// restarts after leaving through `source`.
class RoutingMeasure {
 public:
  RoutingMeasure() = default;
  RoutingMeasure(GateRef source, std::vector<Atom> atoms) : source_(source), atoms_(std::move(atoms)) {
    double total = 0.0;
    for (const Atom& a : atoms_) {
      if (!(a.weight > 0)) {
        std::ostringstream os;
        os << "routing from (" << source_.component << ", " << source_.gate << "): atom weights must be positive";
        throw Error(ErrorKind::invalid_argument, os.str());
      }
      total += a.weight;
    }
    if (total > 1.0 + 1e-12) {
      std::ostringstream os;
      os << "routing from (" << source_.component << ", " << source_.gate << "): total weight " << total << " exceeds 1";
      throw Error(ErrorKind::invalid_argument, os.str());
    }
  }

  const GateRef& source() const { return source_; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  double mass() const {
    double s = 0.0;
    for (const Atom& a : atoms_) s += a.weight;
    return s;
  }
  bool is_probability() const { return std::abs(mass() - 1.0) <= 1e-12; }

  double mass_on(std::size_t component) const {
    double s = 0.0;
    for (const Atom& a : atoms_)
      if (a.component == component) s += a.weight;
    return s;
  }

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (const Atom& a : atoms_) s += a.weight * f(a.site());
    return s;
  }

 private:
  GateRef source_;
  std::vector<Atom> atoms_;
};

}  // namespace feller
