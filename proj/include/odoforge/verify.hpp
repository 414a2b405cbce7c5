#pragma once

// The aggregate invariant suite behind `odoforge verify all`: every check is
// a pure function of (chain, seed), results merge in a fixed order so the
// report bytes are identical across worker counts.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "odoforge/chain.hpp"

namespace odoforge {

struct VerifyConfig {
  ChainPtr chain;
  std::string chain_label;  // echoed into the report
  std::uint64_t seed = 20240801;
  int jobs = 1;
  int tower_depth = 0;    // 0 = chain depth
  int sweep_cases = 1000; // randomized equivariance sweeps
};

struct CheckResult {
  std::string id;
  bool pass = false;
  long long cases = 0;
  long long violations = 0;
  std::string detail;  // first failure or a short summary
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  long long violations_total() const;
  bool pass() const { return violations_total() == 0; }
};

VerifyReport run_verify_all(const VerifyConfig& config);
nlohmann::json verify_report_json(const VerifyConfig& config,
                                  const VerifyReport& report);

}  // namespace odoforge
