#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace stochform::app {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  nlohmann::json details;
  double seconds = 0.0;  // kept out of to_json
};

struct SuiteResult {
  bool quick = false;
  std::uint64_t base_seed = 0;
  std::vector<CriterionResult> criteria;
  bool all_pass = false;

  /// Deterministic serialization (no timings, no thread count).
  nlohmann::json to_json() const;
};

struct SuiteOptions {
  bool quick = false;
  unsigned threads = 1;
  std::uint64_t base_seed = 20231;
  /// Adds criterion 11: the quick battery rerun with another thread count
  /// must serialize identically.
  bool determinism_check = true;
  std::function<void(const CriterionResult&)> on_result;
};

SuiteResult run_suite(const SuiteOptions& opts);

/// "criterion 4 [FAIL] title: key=value ..." summary line.
std::string summary_line(const CriterionResult& c);

}  // namespace stochform::app
