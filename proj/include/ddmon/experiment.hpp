#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "ddmon/attacks.hpp"
#include "ddmon/monitor.hpp"

namespace ddmon::experiment {

/// Malformed or inconsistent experiment configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Seeded draws built only on the raw mt19937_64 stream, so sequences are
/// identical across standard libraries.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// Uniform double in [0, 1).
  double uniform();
  double normal();

 private:
  std::mt19937_64 engine_;
};

struct CompanionSpec {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t p = 0;
};

/// A = [0 | I_{n-1}; -1 | -1 ... -1]; B columns and C rows are distinct
/// standard basis vectors drawn at random; D = 0.
LtiSystem companion_system(const CompanionSpec& spec, SeededRng& rng);

/// Standard normal vector scaled to unit norm.
Vector random_unit_vector(std::size_t n, SeededRng& rng);

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::optional<CompanionSpec> generator;
  std::optional<LtiSystem> system;
  std::optional<Vector> x0;
  std::optional<AttackScenario> attack;
  std::size_t horizon = 300;
  MonitorConfig monitor;
  RankTolerance tolerance;
  /// Window length for synthesize-attack; defaults to n + 1.
  std::optional<std::size_t> synthesis_window;
};

/// Relative paths inside the config (e.g. "system": {"file": ...}) resolve
/// against base_dir.
ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// The system and initial state a config describes. Draw order from the seed:
/// B columns, C rows (generator only), then x0 (unless given).
struct Realization {
  LtiSystem sys;
  Vector x0;
};
Realization realize(const ExperimentConfig& cfg);

/// Simulated outputs with the configured attack (if any).
OutputSeries simulate_outputs(const ExperimentConfig& cfg, const Realization& r);

struct RunArtifacts {
  std::filesystem::path rank_curve_csv;
  std::filesystem::path residual_csv;        // data-driven monitor
  std::filesystem::path model_residual_csv;  // model-based monitor
  std::filesystem::path summary_json;
  std::filesystem::path system_json;
  std::filesystem::path attack_json;
};

RunArtifacts cmd_generate(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
RunArtifacts cmd_indices(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
RunArtifacts cmd_rank_curve(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
RunArtifacts cmd_monitor(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
RunArtifacts cmd_synthesize_attack(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace ddmon::experiment
