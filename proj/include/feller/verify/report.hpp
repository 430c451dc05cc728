#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace feller {

// Outcome of one property check. `residual` is recorded verbatim even when
// the check passes.
struct CheckReport {
  std::string name;
  std::string params;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string provenance;
  std::string detail;
};

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void write_reports_csv(std::ostream& os, const std::vector<CheckReport>& reports) {
  os << "check,params,residual,tol,pass,provenance,detail\n";
  for (const CheckReport& r : reports)
    os << csv_field(r.name) << ',' << csv_field(r.params) << ',' << format_number(r.residual) << ','
       << format_number(r.tol) << ',' << (r.pass ? "true" : "false") << ',' << csv_field(r.provenance) << ','
       << csv_field(r.detail) << '\n';
}

}  // namespace feller
