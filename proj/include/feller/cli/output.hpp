#pragma once

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "feller/core/error.hpp"

namespace feller::cli {

inline constexpr const char* kToolVersion = "1.0.0";

// Shortest round-trip representation, so written tables reproduce bit-exactly.
inline std::string csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add(std::vector<std::string> row) {
    require(row.size() == header_.size(), ErrorKind::internal, "csv row width does not match the header");
    rows_.push_back(std::move(row));
  }
  std::size_t rows() const { return rows_.size(); }

  void write(std::ostream& os) const {
    write_row(os, header_);
    for (const auto& r : rows_) write_row(os, r);
  }

 private:
  static void write_row(std::ostream& os, const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) os << ',';
      const std::string& f = r[i];
      if (f.find_first_of(",\"\n") == std::string::npos) {
        os << f;
      } else {
        os << '"';
        for (char c : f) os << (c == '"' ? "\"\"" : std::string(1, c));
        os << '"';
      }
    }
    os << '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// UTC time of the run; SOURCE_DATE_EPOCH pins it for reproducible manifests.
inline std::string run_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* e = std::getenv("SOURCE_DATE_EPOCH")) t = std::time_t(std::strtoll(e, nullptr, 10));
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline nlohmann::json make_manifest(const std::string& command, nlohmann::json parameters) {
  nlohmann::json m;
  m["command"] = command;
  m["tool_version"] = kToolVersion;
  m["parameters"] = std::move(parameters);
  m["timestamp"] = run_timestamp();
  return m;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::invalid_argument, "cannot write '" + path + "'");
  out << text;
}

}  // namespace feller::cli
