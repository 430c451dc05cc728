#pragma once

#include <stdexcept>
#include <string>

namespace feller {

enum class ErrorKind {
  invalid_argument,
  range,
  no_gate,
  conservative_component,
  not_splittable,
  quadrature,
  internal,
  unsupported,
  unsupported_simulation,
  parse,
  schema,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::range: return "range";
    case ErrorKind::no_gate: return "no_gate";
    case ErrorKind::conservative_component: return "conservative_component";
    case ErrorKind::not_splittable: return "not_splittable";
    case ErrorKind::quadrature: return "quadrature";
    case ErrorKind::internal: return "internal";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::unsupported_simulation: return "unsupported_simulation";
    case ErrorKind::parse: return "parse";
    case ErrorKind::schema: return "schema";
  }
  return "unknown";
}

// Every failure raised by the library carries a machine-readable kind so the
// CLI can map it onto an exit code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  // The text without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace feller
