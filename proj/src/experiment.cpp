#include "ddmon/experiment.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

#include "ddmon/hankel.hpp"
#include "ddmon/indices.hpp"
#include "ddmon/serialization.hpp"

namespace ddmon::experiment {

using nlohmann::json;
namespace fs = std::filesystem;

std::uint64_t SeededRng::below(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::InvalidArgument, "empty range");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return r % bound;
  }
}

double SeededRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double SeededRng::normal() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

std::vector<std::size_t> distinct_indices(std::size_t n, std::size_t count, SeededRng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  return idx;
}

}  // namespace

LtiSystem companion_system(const CompanionSpec& spec, SeededRng& rng) {
  const auto [n, m, p] = spec;
  if (n < 2 || m < 1 || p < 1 || m > n || p > n) {
    throw Error(ErrorCode::BadDimensions, "companion generator needs n >= 2 and 1 <= m, p <= n");
  }
  const auto N = static_cast<Eigen::Index>(n);
  Matrix A = Matrix::Zero(N, N);
  A.topRightCorner(N - 1, N - 1).setIdentity();
  A.row(N - 1).setConstant(-1.0);

  Matrix B = Matrix::Zero(N, static_cast<Eigen::Index>(m));
  const auto cols = distinct_indices(n, m, rng);
  for (std::size_t j = 0; j < m; ++j) B(static_cast<Eigen::Index>(cols[j]), static_cast<Eigen::Index>(j)) = 1.0;

  Matrix C = Matrix::Zero(static_cast<Eigen::Index>(p), N);
  const auto rows = distinct_indices(n, p, rng);
  for (std::size_t i = 0; i < p; ++i) C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(rows[i])) = 1.0;

  return LtiSystem(std::move(A), std::move(B), std::move(C),
                   Matrix::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(m)));
}

Vector random_unit_vector(std::size_t n, SeededRng& rng) {
  Vector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
  return v / v.norm();
}

namespace {

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

fs::path resolve(const fs::path& base, const json& j) {
  const fs::path p = j.get<std::string>();
  return p.is_absolute() || base.empty() ? p : base / p;
}

std::optional<std::size_t> count_or_keyword(const json& j, const char* keyword, const char* what) {
  if (j.is_string() && j.get<std::string>() == keyword) return std::nullopt;
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  throw ConfigError(std::string(what) + " must be \"" + keyword + "\" or a nonnegative integer");
}

std::size_t input_width(const ExperimentConfig& cfg) {
  if (cfg.generator) return cfg.generator->m;
  if (cfg.system) return cfg.system->m();
  throw ConfigError("config has no system");
}

AttackScenario parse_attack(const json& j, const ExperimentConfig& cfg, const fs::path& base) {
  if (j.contains("file")) return parse_attack(read_json(resolve(base, j.at("file"))), cfg, base);
  if (j.contains("samples")) return io::scenario_from_json(j);
  // Impulse shorthand; the actuator is numbered from 1 as in u_4.
  const std::size_t actuator = j.at("actuator").get<std::size_t>();
  if (actuator == 0) throw ConfigError("attack actuator is numbered from 1");
  return AttackScenario::impulse(input_width(cfg), j.at("start").get<std::size_t>(), actuator - 1,
                                 j.value("magnitude", 1.0), j.value("label", std::string{}));
}

}  // namespace

ExperimentConfig parse_config(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig cfg;
  try {
    cfg.seed = j.value("seed", std::uint64_t{0});
    if (!j.contains("system")) throw ConfigError("config is missing 'system'");
    const json& sys = j.at("system");
    if (sys.contains("companion")) {
      const json& c = sys.at("companion");
      cfg.generator = CompanionSpec{c.at("n").get<std::size_t>(), c.at("m").get<std::size_t>(),
                                    c.at("p").get<std::size_t>()};
    } else if (sys.contains("file")) {
      cfg.system = io::system_from_json(read_json(resolve(base_dir, sys.at("file"))));
    } else {
      cfg.system = io::system_from_json(sys);
    }

    if (j.contains("x0")) {
      const auto values = j.at("x0").get<std::vector<double>>();
      cfg.x0 = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
    }
    cfg.horizon = j.value("horizon", cfg.horizon);
    if (j.contains("attack") && !j.at("attack").is_null()) cfg.attack = parse_attack(j.at("attack"), cfg, base_dir);

    if (j.contains("monitor")) {
      const json& m = j.at("monitor");
      cfg.monitor.threshold = m.value("threshold", cfg.monitor.threshold);
      if (m.contains("window")) cfg.monitor.fixed_window = count_or_keyword(m.at("window"), "heuristic", "window");
      if (m.contains("training_horizon")) {
        cfg.monitor.training_horizon = count_or_keyword(m.at("training_horizon"), "auto", "training_horizon");
      }
      if (m.contains("patience")) cfg.monitor.patience = m.at("patience").get<std::size_t>();
    }
    if (j.contains("tolerance")) {
      const json& t = j.at("tolerance");
      cfg.tolerance.relative_cutoff = t.value("relative_cutoff", cfg.tolerance.relative_cutoff);
      cfg.tolerance.absolute_floor = t.value("absolute_floor", cfg.tolerance.absolute_floor);
    }
    if (j.contains("synthesis") && j.at("synthesis").contains("window")) {
      cfg.synthesis_window = j.at("synthesis").at("window").get<std::size_t>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  cfg.monitor.validate();
  cfg.tolerance.validate();
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  return parse_config(read_json(path), path.parent_path());
}

Realization realize(const ExperimentConfig& cfg) {
  SeededRng rng(cfg.seed);
  LtiSystem sys = cfg.generator ? companion_system(*cfg.generator, rng) : *cfg.system;
  Vector x0 = cfg.x0 ? *cfg.x0 : random_unit_vector(sys.n(), rng);
  if (static_cast<std::size_t>(x0.size()) != sys.n()) throw ConfigError("x0 length does not match n");
  return Realization{std::move(sys), std::move(x0)};
}

OutputSeries simulate_outputs(const ExperimentConfig& cfg, const Realization& r) {
  const InputSeries u = cfg.attack ? cfg.attack->inputs : InputSeries(r.sys.m());
  return linsys::simulate(r.sys, r.x0, u, cfg.horizon).outputs;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

fs::path prepare(const fs::path& out_dir) {
  fs::create_directories(out_dir);
  return out_dir;
}

json header(const ExperimentConfig& cfg, const Realization& r) {
  return json{{"seed", cfg.seed}, {"n", r.sys.n()}, {"m", r.sys.m()}, {"p", r.sys.p()}};
}

}  // namespace

RunArtifacts cmd_generate(const ExperimentConfig& cfg, const fs::path& out_dir) {
  const Realization r = realize(cfg);
  RunArtifacts out;
  out.system_json = prepare(out_dir) / "system.json";
  write_json(out.system_json, io::system_to_json(r.sys));
  return out;
}

RunArtifacts cmd_indices(const ExperimentConfig& cfg, const fs::path& out_dir) {
  const Realization r = realize(cfg);
  json summary = header(cfg, r);
  summary["indices"] = io::index_report_to_json(indices::compute_report(r.sys, r.x0, cfg.tolerance));
  RunArtifacts out;
  out.summary_json = prepare(out_dir) / "indices.json";
  write_json(out.summary_json, summary);
  return out;
}

RunArtifacts cmd_rank_curve(const ExperimentConfig& cfg, const fs::path& out_dir) {
  const Realization r = realize(cfg);
  const OutputSeries y = linsys::simulate(r.sys, r.x0, InputSeries(r.sys.m()), cfg.horizon).outputs;
  const HankelInfoEstimate info = hankel::hankel_information(y, cfg.tolerance);

  json summary = header(cfg, r);
  summary["indices"] = io::index_report_to_json(indices::compute_report(r.sys, r.x0, cfg.tolerance));
  summary["gamma"] = info.gamma;
  summary["gamma_achieved_at"] = json{{"N", info.achieved_N}, {"T", info.achieved_T}};
  std::size_t peak = 0;
  json saturation = nullptr;
  for (const auto& pt : info.rank_curve) {
    if (pt.rank > peak || saturation.is_null()) {
      peak = pt.rank;
      saturation = pt.T;
    }
  }
  summary["curve_max_rank"] = peak;
  summary["curve_saturation_T"] = saturation;
  summary["final_rank"] = info.rank_curve.empty() ? json(nullptr) : json(info.rank_curve.back().rank);

  RunArtifacts out;
  prepare(out_dir);
  out.rank_curve_csv = out_dir / "rank_curve.csv";
  out.summary_json = out_dir / "rank_curve_summary.json";
  std::ostringstream csv;
  hankel::write_rank_curve_csv(csv, info.rank_curve);
  write_text(out.rank_curve_csv, csv.str());
  write_json(out.summary_json, summary);
  return out;
}

RunArtifacts cmd_monitor(const ExperimentConfig& cfg, const fs::path& out_dir) {
  const Realization r = realize(cfg);
  const OutputSeries y = simulate_outputs(cfg, r);
  std::optional<std::size_t> start;
  if (cfg.attack) start = cfg.attack->start;

  const DetectionReport model = monitor::run_monitor(y, cfg.monitor, r.sys, cfg.tolerance, start);
  const DetectionReport data = monitor::run_monitor(y, cfg.monitor, cfg.tolerance, start);

  json summary = header(cfg, r);
  summary["horizon"] = cfg.horizon;
  summary["attack"] = cfg.attack ? io::scenario_to_json(*cfg.attack) : json(nullptr);
  summary["model_based"] = io::report_summary_to_json(model);
  summary["data_driven"] = io::report_summary_to_json(data);

  RunArtifacts out;
  prepare(out_dir);
  out.residual_csv = out_dir / "residuals_data.csv";
  out.model_residual_csv = out_dir / "residuals_model.csv";
  out.summary_json = out_dir / "monitor_summary.json";
  std::ostringstream data_csv, model_csv;
  io::write_report_csv(data_csv, data);
  io::write_report_csv(model_csv, model);
  write_text(out.residual_csv, data_csv.str());
  write_text(out.model_residual_csv, model_csv.str());
  write_json(out.summary_json, summary);
  return out;
}

RunArtifacts cmd_synthesize_attack(const ExperimentConfig& cfg, const fs::path& out_dir) {
  const Realization r = realize(cfg);
  const std::size_t N = cfg.synthesis_window ? *cfg.synthesis_window : r.sys.n() + 1;
  if (N == 0) throw ConfigError("synthesis window must be >= 1");

  json result;
  if (const auto window = attacks::synthesize_undetectable(r.sys, N, cfg.tolerance)) {
    const IndexReport idx = indices::compute_report(r.sys, std::nullopt, cfg.tolerance);
    const std::size_t start = cfg.attack ? cfg.attack->start : idx.t_safe_data + 1;
    const AttackScenario scenario =
        AttackScenario::from_window(r.sys.m(), start, *window, "kernel of C_" + std::to_string(N));
    const DetectabilityVerdict verdict = attacks::check_undetectable(r.sys, scenario, N, cfg.tolerance);
    result = io::scenario_to_json(scenario);
    result["found"] = true;
    result["max_residual"] = verdict.max_residual;
  } else {
    result = json{{"found", false}};
  }
  result["window"] = N;

  RunArtifacts out;
  out.attack_json = prepare(out_dir) / "attack.json";
  write_json(out.attack_json, result);
  return out;
}

}  // namespace ddmon::experiment
