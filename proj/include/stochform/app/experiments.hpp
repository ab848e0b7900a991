#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "stochform/app/config.hpp"
#include "stochform/app/plot.hpp"

namespace stochform::app {

struct RunOptions {
  unsigned threads = 1;
  bool quick = false;
  std::function<void(const std::string&)> progress;
};

/// One CSV dump (`<stem>.csv`) and optionally its plot (`<stem>.svg`).
struct Artifact {
  std::string stem;
  Table table;
  std::optional<PlotSpec> plot;
};

struct ExperimentResult {
  nlohmann::json result;
  std::vector<Artifact> artifacts;
  /// False only when paper-suite has a failing criterion.
  bool ok = true;
  /// Run-dependent extras (timings) destined for meta.json.
  nlohmann::json meta = nlohmann::json::object();
};

/// Resolves every catalog name the config refers to; throws ConfigError.
void resolve_names(const ExperimentConfig& cfg);

/// --quick scaling: at most 500 paths.
ExperimentConfig apply_quick(ExperimentConfig cfg);

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts);

nlohmann::json to_json(const Vec& v);

}  // namespace stochform::app
