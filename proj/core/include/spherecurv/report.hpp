#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "spherecurv/model_doc.hpp"

namespace spherecurv {

// Structured report: ordered sections of key = value lines. Serialization is
// deterministic (insertion order, fixed float format), so identical inputs
// and seed give byte-identical output.

struct Report {
  struct Section {
    std::string name;
    std::vector<std::pair<std::string, std::string>> rows;
  };
  std::vector<Section> sections;

  Section& section(const std::string& name) {
    for (auto& s : sections)
      if (s.name == name) return s;
    sections.push_back({name, {}});
    return sections.back();
  }
  void put(const std::string& sec, const std::string& key, const std::string& value) {
    section(sec).rows.emplace_back(key, value);
  }
  void put(const std::string& sec, const std::string& key, double value) {
    put(sec, key, format_double(value));
  }
  void put(const std::string& sec, const std::string& key, const Rational& value) {
    put(sec, key, format_scalar(value));
  }
  void write(std::ostream& os) const;
};

struct RunOptions {
  int samples = 1000;
  std::uint64_t seed = 20240613;
  double tol = kDefaultTol;
  std::string model_path;  // used by suites that accept an external model
};

// report subcommand: full curvature report for one model document.
Report run_report(const BoundModel& model, const RunOptions& opts);

// verify subcommand: named property suites.
struct SuiteResult {
  bool pass = false;
  std::vector<std::string> lines;  // human-readable detail, counterexamples on failure
};

std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name, const RunOptions& opts);

// scan subcommand.
void run_scan(const ScanSpec& spec, std::ostream& csv_out);

}  // namespace spherecurv
