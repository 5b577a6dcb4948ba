#pragma once
// Self-check suites over every module, reported as JSON.

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace ergogap {

struct CheckResult {
  std::string suite;
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  // Reported but never counted as a failure.
  bool informational = false;
  std::string detail;
};

struct ValidationReport {
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  bool passed() const;
  nlohmann::json to_json() const;
};

ValidationReport run_validate(std::uint64_t seed);

}  // namespace ergogap
