#include "ddmon/monitor.hpp"

#include "ddmon/indices.hpp"

namespace ddmon {

void MonitorConfig::validate() const {
  if (!(threshold >= 0.0)) throw Error(ErrorCode::InvalidArgument, "threshold must be nonnegative");
  if (fixed_window && *fixed_window == 0) throw Error(ErrorCode::InvalidArgument, "fixed window must be >= 1");
  if (patience && *patience == 0) throw Error(ErrorCode::InvalidArgument, "patience must be >= 1");
}

namespace monitor {
namespace {

void append(MonitorState& state, const Vector& y_k) {
  if (static_cast<std::size_t>(y_k.size()) != state.buffered_outputs.p()) {
    throw Error(ErrorCode::DimensionMismatch, "output sample width changed");
  }
  state.buffered_outputs.push_back(y_k);
}

double transition_residual(const MonitorState& state, std::size_t k) {
  const std::size_t N = state.window;
  const Vector source = state.buffered_outputs.window(k + 1 - N, N);
  const Vector target = state.buffered_outputs.window(k + 2 - N, N);
  return (target - state.predictor * source).lpNorm<Eigen::Infinity>();
}

Detection classify(std::size_t k, double residual, const MonitorConfig& cfg) {
  return {k, residual, residual > cfg.threshold ? Verdict::Attack : Verdict::NoAttack};
}

// Transitions k with armed_at <= k and y(k+1) already buffered.
template <typename ResidualFn>
void emit_pending(const MonitorState& state, std::size_t from, const MonitorConfig& cfg, ResidualFn residual,
                  std::vector<Detection>& out) {
  const std::size_t len = state.buffered_outputs.size();
  for (std::size_t k = from; k + 1 < len; ++k) out.push_back(classify(k, residual(k), cfg));
}

std::size_t window_for(const MonitorConfig& cfg, std::size_t T, std::size_t p) {
  return cfg.fixed_window ? *cfg.fixed_window : indices::heuristic_window(T, p);
}

void train(MonitorState& state, const MonitorConfig& cfg, std::size_t T, const RankTolerance& tol) {
  const OutputSeries& y = state.buffered_outputs;
  const std::size_t N = window_for(cfg, T, y.p());
  const HankelMatrix h = hankel::build_hankel(y, N, T);
  FeatureBasis basis = features::data_feature_basis(h, tol);
  // W spans y(0..T-1), W_fwd additionally needs y(T).
  const FeatureSequence seq = features::feature_sequence(basis, y.head(T + 1));
  const ShiftedPair pair = features::assemble_shifted_pair(seq);
  FeatureDynamics dyn = features::fit_feature_dynamics(pair.current, pair.next, tol);

  state.window = N;
  state.predictor = basis.basis * dyn.M * basis.basis.transpose();
  state.basis = std::move(basis);
  state.dynamics = std::move(dyn);
  state.armed_at = T;
  state.phase = Phase::Armed;
}

// Returns the plateau start once the rank curve has stalled long enough.
std::optional<std::size_t> track_plateau(MonitorState& state, const MonitorConfig& cfg, const RankTolerance& tol) {
  const OutputSeries& y = state.buffered_outputs;
  const std::size_t T = y.size();
  const std::size_t p = y.p();
  if (cfg.fixed_window ? T < *cfg.fixed_window : T < std::max<std::size_t>(p, 1)) return std::nullopt;

  const std::size_t N = window_for(cfg, T, p);
  const std::size_t rank = numerics::numerical_rank(hankel::build_hankel(y, N, T).data, tol);
  if (!state.last_rank || rank > *state.last_rank) {
    state.last_rank = rank;
    state.plateau_start = T;
    state.stalled_steps = 0;
    return std::nullopt;
  }
  ++state.stalled_steps;
  const std::size_t patience = cfg.patience ? *cfg.patience : p + 1;
  if (state.stalled_steps >= patience) return state.plateau_start;
  return std::nullopt;
}

}  // namespace

std::vector<Detection> data_monitor_step(MonitorState& state, const MonitorConfig& cfg, const Vector& y_k,
                                         const RankTolerance& tol) {
  append(state, y_k);
  std::vector<Detection> out;
  const auto residual = [&](std::size_t k) { return transition_residual(state, k); };

  if (state.phase == Phase::Armed) {
    emit_pending(state, state.buffered_outputs.size() - 2, cfg, residual, out);
    return out;
  }

  std::optional<std::size_t> horizon;
  if (cfg.training_horizon) {
    if (state.buffered_outputs.size() >= *cfg.training_horizon + 1) horizon = *cfg.training_horizon;
  } else {
    horizon = track_plateau(state, cfg, tol);
  }
  if (!horizon) return out;

  train(state, cfg, *horizon, tol);
  emit_pending(state, *state.armed_at, cfg, residual, out);
  return out;
}

std::vector<Detection> model_monitor_step(const LtiSystem& sys, MonitorState& state, const MonitorConfig& cfg,
                                          const Vector& y_k, const RankTolerance& tol) {
  if (state.buffered_outputs.p() != sys.p()) throw Error(ErrorCode::DimensionMismatch, "monitor width differs from p");
  append(state, y_k);
  std::vector<Detection> out;

  if (state.phase == Phase::Collecting) {
    if (state.window == 0) {
      state.window = cfg.fixed_window ? *cfg.fixed_window : indices::observability_index(sys, tol);
    }
    const std::size_t N = state.window;
    if (state.buffered_outputs.size() < N + 1) return out;
    FeatureBasis basis = features::model_feature_basis(sys, N, tol);
    FeatureDynamics dyn = features::model_feature_dynamics(sys, basis, tol);
    state.predictor = basis.basis * dyn.M * basis.basis.transpose();
    state.basis = std::move(basis);
    state.dynamics = std::move(dyn);
    state.armed_at = N;
    state.phase = Phase::Armed;
  }

  const Matrix& S = state.basis->basis;
  const auto residual = [&](std::size_t k) {
    const Vector target = state.buffered_outputs.window(k + 2 - state.window, state.window);
    const double off_subspace = (target - S * (S.transpose() * target)).lpNorm<Eigen::Infinity>();
    return std::max(transition_residual(state, k), off_subspace);
  };
  const std::size_t len = state.buffered_outputs.size();
  emit_pending(state, std::max(*state.armed_at, len >= 2 ? len - 2 : 0), cfg, residual, out);
  return out;
}

namespace {

template <typename StepFn>
DetectionReport fold(const OutputSeries& y, const MonitorConfig& cfg, std::optional<std::size_t> attack_start,
                     StepFn step) {
  cfg.validate();
  MonitorState state(y.p());
  DetectionReport report;
  report.threshold = cfg.threshold;
  for (const Vector& sample : y.samples()) {
    for (const Detection& d : step(state, sample)) {
      if (d.verdict == Verdict::Attack && !report.first_detection) report.first_detection = d.k;
      report.detections.push_back(d);
    }
  }
  report.armed_at = state.armed_at;
  report.window = state.window;
  if (state.basis) report.q = state.basis->q();
  if (state.dynamics) report.fit_residual = state.dynamics->fit_residual;
  report.attack_window_unprotected = attack_start && (!state.armed_at || *attack_start < *state.armed_at);
  return report;
}

}  // namespace

DetectionReport run_monitor(const OutputSeries& y, const MonitorConfig& cfg, const RankTolerance& tol,
                            std::optional<std::size_t> attack_start) {
  return fold(y, cfg, attack_start,
              [&](MonitorState& s, const Vector& sample) { return data_monitor_step(s, cfg, sample, tol); });
}

DetectionReport run_monitor(const OutputSeries& y, const MonitorConfig& cfg, const LtiSystem& sys,
                            const RankTolerance& tol, std::optional<std::size_t> attack_start) {
  return fold(y, cfg, attack_start,
              [&](MonitorState& s, const Vector& sample) { return model_monitor_step(sys, s, cfg, sample, tol); });
}

}  // namespace monitor
}  // namespace ddmon
