#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "stochform/sde.hpp"

namespace stochform::app {

inline constexpr int kSchemaVersion = 1;

/// Raised for any malformed or unknown configuration content.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string>& experiment_kinds();

struct EnsembleConfig {
  std::size_t n_paths = 100;
  double horizon = 10.0;
  double dt = 1e-3;
  std::uint64_t base_seed = 20231;
  double burn_in = 0.1;
};

struct DiffusionConfig {
  std::optional<std::string> drift;
  std::vector<std::string> noise;
  Convention convention = Convention::Half;
};

struct ExperimentConfig {
  std::string experiment;
  Manifold manifold = Manifold::torus();
  DiffusionConfig diffusion;
  EnsembleConfig ensemble;
  Vec x0;
  nlohmann::json params = nlohmann::json::object();
  std::string output_dir = "out";
  bool write_csv = true;
  bool write_plots = true;

  /// Fully resolved form (defaults filled in), embedded in every report.
  nlohmann::json to_json() const;
};

/// Validates against the schema; unknown keys anywhere raise ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Built-in scenario used when a subcommand runs without --config.
nlohmann::json default_config(const std::string& experiment);

/// Builds the SDE. Catalog combinations map to the catalog specs so that
/// path provenance ids match.
DiffusionSpec build_spec(const ExperimentConfig& cfg);
ManifoldPoint build_x0(const ExperimentConfig& cfg);

}  // namespace stochform::app
