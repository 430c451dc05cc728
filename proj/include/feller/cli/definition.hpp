#pragma once

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "feller/components/absorbing.hpp"
#include "feller/components/halfline.hpp"
#include "feller/components/interval.hpp"
#include "feller/components/killed.hpp"
#include "feller/components/star.hpp"
#include "feller/components/transport.hpp"
#include "feller/concat/system.hpp"

namespace feller::cli {

struct ComponentSpec {
  std::string type;  // half_line | interval | star | transport | killed
  HalfLineParams half_line{};
  WentzelIntervalParams interval{};
  StarGraphParams star{};
  double alpha = 0.0;                   // transport and killed
  std::shared_ptr<ComponentSpec> base;  // killed only
};

struct AtomSpec {
  std::size_t component = 0;
  Point point{};
  double weight = 0.0;
};

struct MeasureSpec {
  GateRef from{};
  std::vector<AtomSpec> atoms;
};

struct Defaults {
  std::size_t resolution = 64;
  double tol = 1e-6;
  std::uint64_t seed = 1;
};

struct ProcessDefinition {
  std::vector<ComponentSpec> components;
  std::vector<MeasureSpec> routing;
  Defaults defaults;
};

inline bool operator==(const ComponentSpec& a, const ComponentSpec& b) {
  if (a.type != b.type) return false;
  if (a.type == "half_line")
    return a.half_line.a == b.half_line.a && a.half_line.b == b.half_line.b && a.half_line.c == b.half_line.c;
  if (a.type == "interval") {
    const auto &x = a.interval, &y = b.interval;
    return x.p == y.p && x.q == y.q && x.c == y.c && x.d == y.d && x.r == y.r;
  }
  if (a.type == "star") {
    const auto &x = a.star, &y = b.star;
    return x.k == y.k && x.r == y.r && x.beta == y.beta && x.alpha == y.alpha && x.q == y.q && x.d == y.d;
  }
  if (a.type == "transport") return a.alpha == b.alpha;
  if (a.type == "killed") return a.alpha == b.alpha && a.base && b.base && *a.base == *b.base;
  return true;
}

inline bool operator==(const AtomSpec& a, const AtomSpec& b) {
  return a.component == b.component && a.point == b.point && a.weight == b.weight;
}
inline bool operator==(const MeasureSpec& a, const MeasureSpec& b) { return a.from == b.from && a.atoms == b.atoms; }
inline bool operator==(const Defaults& a, const Defaults& b) {
  return a.resolution == b.resolution && a.tol == b.tol && a.seed == b.seed;
}
inline bool operator==(const ProcessDefinition& a, const ProcessDefinition& b) {
  return a.components == b.components && a.routing == b.routing && a.defaults == b.defaults;
}

namespace detail {

[[noreturn]] inline void schema_error(const YAML::Node& n, const std::string& msg) {
  std::ostringstream os;
  const YAML::Mark m = n.Mark();
  if (m.line >= 0) os << "line " << m.line + 1 << ", column " << m.column + 1 << ": ";
  os << msg;
  throw Error(ErrorKind::schema, os.str());
}

inline void allow_keys(const YAML::Node& n, const std::set<std::string>& keys, const std::string& where) {
  if (!n.IsMap()) schema_error(n, where + " must be a mapping");
  for (const auto& kv : n) {
    const std::string k = kv.first.as<std::string>();
    if (!keys.count(k)) schema_error(kv.first, "unknown key '" + k + "' in " + where);
  }
}

inline double number(const YAML::Node& n, const std::string& what) {
  if (!n.IsScalar()) schema_error(n, what + " must be a number");
  try {
    return n.as<double>();
  } catch (const YAML::Exception&) {
    schema_error(n, what + " must be a number, got '" + n.Scalar() + "'");
  }
}

inline double number_or(const YAML::Node& parent, const char* key, double fallback, const std::string& where) {
  const YAML::Node n = parent[key];
  return n ? number(n, where + "." + key) : fallback;
}

inline std::size_t index(const YAML::Node& n, const std::string& what) {
  const double v = number(n, what);
  if (!(v >= 0) || v != std::floor(v) || v > 1e9) schema_error(n, what + " must be a nonnegative integer");
  return std::size_t(v);
}

inline ComponentSpec parse_component(const YAML::Node& n, const std::string& where, int depth = 0) {
  if (!n.IsMap()) schema_error(n, where + " must be a mapping");
  if (!n["type"]) schema_error(n, where + " needs a 'type'");
  ComponentSpec s;
  s.type = n["type"].as<std::string>();
  if (s.type == "half_line") {
    allow_keys(n, {"type", "a", "b", "c"}, where);
    s.half_line.a = number_or(n, "a", 0.0, where);
    s.half_line.b = number_or(n, "b", 1.0, where);
    s.half_line.c = number_or(n, "c", 0.0, where);
  } else if (s.type == "interval") {
    allow_keys(n, {"type", "p", "q", "c", "d", "r"}, where);
    s.interval.p = number_or(n, "p", 0.0, where);
    s.interval.q = number_or(n, "q", 0.0, where);
    s.interval.c = number_or(n, "c", 0.0, where);
    s.interval.d = number_or(n, "d", 0.0, where);
    s.interval.r = number_or(n, "r", 1.0, where);
  } else if (s.type == "star") {
    allow_keys(n, {"type", "k", "r", "beta", "alpha", "q", "d"}, where);
    if (!n["k"]) schema_error(n, where + " (star) needs 'k'");
    s.star.k = index(n["k"], where + ".k");
    if (s.star.k < 2) schema_error(n["k"], where + ".k must be at least 2");
    s.star.r = number_or(n, "r", 1.0, where);
    s.star.beta = number_or(n, "beta", 0.0, where);
    s.star.q = number_or(n, "q", 0.0, where);
    s.star.d = number_or(n, "d", 1.0, where);
    s.star.alpha.clear();
    if (const YAML::Node a = n["alpha"]) {
      if (!a.IsSequence()) schema_error(a, where + ".alpha must be a list");
      for (const auto& v : a) s.star.alpha.push_back(number(v, where + ".alpha"));
    } else {
      s.star.alpha.assign(s.star.k, (1.0 - s.star.beta) / double(s.star.k));
    }
  } else if (s.type == "transport") {
    allow_keys(n, {"type", "alpha"}, where);
    s.alpha = number_or(n, "alpha", 0.0, where);
  } else if (s.type == "killed") {
    allow_keys(n, {"type", "alpha", "base"}, where);
    if (!n["alpha"]) schema_error(n, where + " (killed) needs 'alpha'");
    s.alpha = number(n["alpha"], where + ".alpha");
    if (!n["base"]) schema_error(n, where + " (killed) needs 'base'");
    if (depth > 4) schema_error(n, where + ": killed wrappers nested too deeply");
    s.base = std::make_shared<ComponentSpec>(parse_component(n["base"], where + ".base", depth + 1));
  } else {
    schema_error(n["type"], where + ": unknown component type '" + s.type +
                                "' (expected half_line, interval, star, transport or killed)");
  }
  return s;
}

inline ComponentPtr build(const ComponentSpec& s) {
  if (s.type == "half_line") return std::make_shared<HalfLine>(s.half_line);
  if (s.type == "interval") return std::make_shared<WentzelInterval>(s.interval);
  if (s.type == "star") return std::make_shared<StarGraph>(s.star);
  if (s.type == "transport") return std::make_shared<Transport>(s.alpha);
  if (s.type == "killed") return std::make_shared<Killed>(build(*s.base), s.alpha);
  throw Error(ErrorKind::schema, "unknown component type '" + s.type + "'");
}

inline void emit_component(YAML::Emitter& e, const ComponentSpec& s) {
  e << YAML::BeginMap << YAML::Key << "type" << YAML::Value << s.type;
  auto kv = [&](const char* k, double v) { e << YAML::Key << k << YAML::Value << v; };
  if (s.type == "half_line") {
    kv("a", s.half_line.a);
    kv("b", s.half_line.b);
    kv("c", s.half_line.c);
  } else if (s.type == "interval") {
    kv("p", s.interval.p);
    kv("q", s.interval.q);
    kv("c", s.interval.c);
    kv("d", s.interval.d);
    kv("r", s.interval.r);
  } else if (s.type == "star") {
    e << YAML::Key << "k" << YAML::Value << s.star.k;
    kv("r", s.star.r);
    kv("beta", s.star.beta);
    e << YAML::Key << "alpha" << YAML::Value << YAML::Flow << s.star.alpha;
    kv("q", s.star.q);
    kv("d", s.star.d);
  } else if (s.type == "transport") {
    kv("alpha", s.alpha);
  } else if (s.type == "killed") {
    kv("alpha", s.alpha);
    e << YAML::Key << "base" << YAML::Value;
    emit_component(e, *s.base);
  }
  e << YAML::EndMap;
}

}  // namespace detail

// Parses a definition document. YAML syntax errors raise `parse`, structural
// problems raise `schema`; both carry the line and column.
inline ProcessDefinition parse_definition(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << "line " << e.mark.line + 1 << ", column " << e.mark.column + 1 << ": " << e.msg;
    throw Error(ErrorKind::parse, os.str());
  }
  if (!root || !root.IsMap()) throw Error(ErrorKind::schema, "definition must be a mapping with a 'components' list");
  detail::allow_keys(root, {"components", "routing", "defaults"}, "definition");
  ProcessDefinition def;

  const YAML::Node comps = root["components"];
  if (!comps || !comps.IsSequence() || comps.size() == 0)
    detail::schema_error(comps ? comps : root, "'components' must be a non-empty list");
  for (std::size_t i = 0; i < comps.size(); ++i)
    def.components.push_back(detail::parse_component(comps[i], "components[" + std::to_string(i) + "]"));

  if (const YAML::Node d = root["defaults"]) {
    detail::allow_keys(d, {"resolution", "tol", "seed"}, "defaults");
    if (d["resolution"]) def.defaults.resolution = detail::index(d["resolution"], "defaults.resolution");
    if (def.defaults.resolution < 8) detail::schema_error(d, "defaults.resolution must be at least 8");
    def.defaults.tol = detail::number_or(d, "tol", def.defaults.tol, "defaults");
    if (!(def.defaults.tol > 0)) detail::schema_error(d, "defaults.tol must be positive");
    if (d["seed"]) {
      try {
        def.defaults.seed = d["seed"].as<std::uint64_t>();
      } catch (const YAML::Exception&) {
        detail::schema_error(d["seed"], "defaults.seed must be a nonnegative 64-bit integer");
      }
    }
  }

  if (const YAML::Node routing = root["routing"]) {
    if (!routing.IsSequence()) detail::schema_error(routing, "'routing' must be a list");
    for (std::size_t a = 0; a < routing.size(); ++a) {
      const YAML::Node m = routing[a];
      const std::string where = "routing[" + std::to_string(a) + "]";
      detail::allow_keys(m, {"from", "atoms"}, where);
      const YAML::Node from = m["from"];
      if (!from || !from.IsSequence() || from.size() != 2) detail::schema_error(m, where + ".from must be [component, gate]");
      MeasureSpec ms;
      ms.from = {detail::index(from[0], where + ".from"), detail::index(from[1], where + ".from")};
      if (ms.from.component >= def.components.size())
        detail::schema_error(from, where + ".from refers to component " + std::to_string(ms.from.component) +
                                       ", but only " + std::to_string(def.components.size()) + " exist");
      double total = 0.0;
      const YAML::Node atoms = m["atoms"];
      if (atoms && !atoms.IsSequence()) detail::schema_error(atoms, where + ".atoms must be a list");
      if (atoms)
        for (const auto& at : atoms) {
          if (!at.IsSequence() || at.size() != 3)
            detail::schema_error(at, where + ": each atom is [component, point, weight]");
          AtomSpec s;
          s.component = detail::index(at[0], where + " atom component");
          if (s.component >= def.components.size())
            detail::schema_error(at[0], where + ": atom refers to a missing component");
          if (at[1].IsSequence()) {
            if (at[1].size() != 2) detail::schema_error(at[1], where + ": a point is x or [edge, x]");
            s.point = {detail::index(at[1][0], where + " atom edge"), detail::number(at[1][1], where + " atom x")};
          } else {
            s.point = {0, detail::number(at[1], where + " atom x")};
          }
          s.weight = detail::number(at[2], where + " atom weight");
          if (!(s.weight > 0)) detail::schema_error(at[2], where + ": atom weights must be positive");
          total += s.weight;
          ms.atoms.push_back(s);
        }
      if (total > 1.0 + 1e-12) {
        std::ostringstream os;
        os << where << ": atom weights sum to " << total << " > 1";
        detail::schema_error(m, os.str());
      }
      def.routing.push_back(std::move(ms));
    }
  }
  return def;
}

inline ProcessDefinition load_definition(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse, "cannot open definition file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_definition(ss.str());
}

inline std::string serialize_definition(const ProcessDefinition& def) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "defaults" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "resolution" << YAML::Value << def.defaults.resolution;
  e << YAML::Key << "tol" << YAML::Value << def.defaults.tol;
  e << YAML::Key << "seed" << YAML::Value << def.defaults.seed;
  e << YAML::EndMap;
  e << YAML::Key << "components" << YAML::Value << YAML::BeginSeq;
  for (const ComponentSpec& c : def.components) detail::emit_component(e, c);
  e << YAML::EndSeq;
  e << YAML::Key << "routing" << YAML::Value << YAML::BeginSeq;
  for (const MeasureSpec& m : def.routing) {
    e << YAML::BeginMap << YAML::Key << "from" << YAML::Value << YAML::Flow << YAML::BeginSeq << m.from.component
      << m.from.gate << YAML::EndSeq;
    e << YAML::Key << "atoms" << YAML::Value << YAML::BeginSeq;
    for (const AtomSpec& a : m.atoms) {
      e << YAML::Flow << YAML::BeginSeq << a.component;
      if (a.point.edge == 0) {
        e << a.point.x;
      } else {
        e << YAML::Flow << YAML::BeginSeq << a.point.edge << a.point.x << YAML::EndSeq;
      }
      e << a.weight << YAML::EndSeq;
    }
    e << YAML::EndSeq << YAML::EndMap;
  }
  e << YAML::EndSeq << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

inline std::vector<ComponentPtr> build_components(const ProcessDefinition& def) {
  std::vector<ComponentPtr> cs;
  for (const ComponentSpec& s : def.components) cs.push_back(detail::build(s));
  return cs;
}

inline std::vector<RoutingMeasure> build_measures(const ProcessDefinition& def) {
  std::vector<RoutingMeasure> ms;
  for (const MeasureSpec& m : def.routing) {
    std::vector<Atom> atoms;
    for (const AtomSpec& a : m.atoms) atoms.push_back(Atom{a.component, a.point, a.weight});
    ms.emplace_back(m.from, std::move(atoms));
  }
  return ms;
}

inline ConcatSystem build_system(const ProcessDefinition& def) {
  return ConcatSystem(build_components(def), build_measures(def));
}

}  // namespace feller::cli
