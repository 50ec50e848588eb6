// Command-line front end: every pipeline stage as a subcommand writing CSV/JSON.
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "ddmon/experiment.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

using Command = std::function<ddmon::experiment::RunArtifacts(const ddmon::experiment::ExperimentConfig&,
                                                              const std::filesystem::path&)>;

int exit_code_for(ddmon::ErrorCode code) {
  switch (code) {
    case ddmon::ErrorCode::BadDimensions:
    case ddmon::ErrorCode::DimensionMismatch:
    case ddmon::ErrorCode::InvalidArgument:
    case ddmon::ErrorCode::RegimeViolation:
      return kConfigError;
    default:
      return kNumericalError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data-driven attack monitoring for LTI systems"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> threshold;
  std::optional<double> tol_rel;

  const std::map<std::string, std::pair<std::string, Command>> commands = {
      {"generate", {"write the companion-form system described by the config", ddmon::experiment::cmd_generate}},
      {"indices", {"observability/excitability indices and safe horizons", ddmon::experiment::cmd_indices}},
      {"rank-curve", {"Hankel rank vs. horizon for a nominal run", ddmon::experiment::cmd_rank_curve}},
      {"monitor", {"model-based and data-driven monitors on one simulated stream", ddmon::experiment::cmd_monitor}},
      {"synthesize-attack", {"undetectable input window from Ker(C_N)", ddmon::experiment::cmd_synthesize_attack}},
  };

  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--threshold", threshold, "override the monitor threshold");
    sub->add_option("--tol-rel", tol_rel, "override the relative rank cutoff");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  try {
    auto cfg = ddmon::experiment::load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (threshold) cfg.monitor.threshold = *threshold;
    if (tol_rel) cfg.tolerance.relative_cutoff = *tol_rel;
    cfg.monitor.validate();
    cfg.tolerance.validate();

    const auto& run = commands.at(app.get_subcommands().front()->get_name()).second;
    const auto artifacts = run(cfg, out_dir);
    for (const auto& path : {artifacts.system_json, artifacts.summary_json, artifacts.rank_curve_csv,
                             artifacts.residual_csv, artifacts.model_residual_csv, artifacts.attack_json}) {
      if (!path.empty()) std::cout << path.string() << '\n';
    }
    return 0;
  } catch (const ddmon::experiment::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ddmon::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalError;
  }
}
