#pragma once

#include <cstddef>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "feller/components/state_space.hpp"
#include "feller/core/error.hpp"
#include "feller/core/types.hpp"

namespace feller {

enum class ComponentKind { half_line, interval, star_graph, transport, killed, absorbing_points, accelerated, perturbed };

// A closed-form building block: resolvent, exit laws and excessive functions
// of a (possibly dishonest) Feller process on a compact state space. All
// member functions are const and free of shared mutable state.
class ComponentProcess {
 public:
  virtual ~ComponentProcess() = default;

  virtual ComponentKind kind() const = 0;
  virtual std::string describe() const = 0;
  virtual const StateSpace& space() const = 0;

  virtual std::size_t gate_count() const = 0;
  virtual std::string gate_label(std::size_t j) const { return "gate " + std::to_string(j); }

  // Resolvent R_lambda g at each requested point. Implementations share the
  // point-independent parts (boundary constants) across the batch.
  virtual std::vector<double> resolvent(const PointFunction& g, double lambda,
                                        const std::vector<Point>& xs) const = 0;

  virtual double exit_law(std::size_t gate, double lambda, const Point& x) const = 0;
  virtual double excessive(std::size_t gate, const Point& x) const = 0;

  // True when the generator has a nontrivial kernel although exits exist, so
  // the decomposition into excessive functions is not unique.
  virtual bool non_unique_representation() const { return false; }

  double resolvent_at(const PointFunction& g, double lambda, const Point& x) const {
    return resolvent(g, lambda, std::vector<Point>{x}).front();
  }

  // Laplace transform of the lifetime, 1 - lambda R_lambda 1, as the sum of the
  // exit laws.
  double lifetime_transform(double lambda, const Point& x) const {
    double s = 0.0;
    for (std::size_t j = 0; j < gate_count(); ++j) s += exit_law(j, lambda, x);
    return s;
  }

  bool conservative() const { return gate_count() == 0; }

 protected:
  void check_gate(std::size_t j) const {
    if (j >= gate_count()) {
      std::ostringstream os;
      os << describe() << " has " << gate_count() << " gate(s); gate " << j << " requested";
      throw Error(ErrorKind::no_gate, os.str());
    }
  }
};

using ComponentPtr = std::shared_ptr<const ComponentProcess>;

}  // namespace feller
