#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ddmon/features.hpp"
#include "ddmon/linsys.hpp"

namespace ddmon {

struct MonitorConfig {
  /// Residuals strictly above this are classified as Attack.
  double threshold = 1e-6;
  /// Window policy: fixed N when set, otherwise N(T) = floor((T+1)/(p+1)).
  std::optional<std::size_t> fixed_window;
  /// Training horizon: fixed T when set, otherwise arm on a rank plateau.
  std::optional<std::size_t> training_horizon;
  /// Consecutive non-growing rank-curve steps that count as a plateau;
  /// defaults to p + 1.
  std::optional<std::size_t> patience;

  void validate() const;
};

enum class Phase { Collecting, Armed };
enum class Verdict { NoAttack, Attack };

/// Residual of the window transition k -> k+1:
///   r(k) = || y_{k-N+2:k+1} - S M S^T y_{k-N+1:k} ||_inf
/// It becomes available once y(k+1) has been observed. An input applied at
/// step k drives x(k) -> x(k+1), so for D = 0 it first shows in r(k); a
/// feedthrough term D u(k) already shows in r(k-1).
struct Detection {
  std::size_t k = 0;
  double residual = 0.0;
  Verdict verdict = Verdict::NoAttack;
};

struct MonitorState {
  explicit MonitorState(std::size_t p) : buffered_outputs(p) {}

  Phase phase = Phase::Collecting;
  OutputSeries buffered_outputs;
  std::optional<FeatureBasis> basis;
  std::optional<FeatureDynamics> dynamics;
  /// First transition index the monitor classifies.
  std::optional<std::size_t> armed_at;

  // Set on arming: N and the window predictor S M S^T.
  std::size_t window = 0;
  Matrix predictor;

  // Rank-plateau bookkeeping while collecting.
  std::optional<std::size_t> last_rank;
  std::size_t plateau_start = 0;
  std::size_t stalled_steps = 0;
};

struct DetectionReport {
  std::vector<Detection> detections;
  std::optional<std::size_t> first_detection;
  std::optional<std::size_t> armed_at;
  /// Set when a known attack start precedes arming; such attacks cannot be
  /// detected and end up absorbed by the learned model.
  bool attack_window_unprotected = false;
  double threshold = 0.0;
  std::size_t window = 0;
  std::size_t q = 0;
  double fit_residual = 0.0;
};

namespace monitor {

/// Data-driven monitor. Collects until the Hankel rank curve plateaus (or the
/// fixed training horizon T is reached), fits S and M* on y(0..T), then
/// classifies every transition k >= T. May return several detections at once
/// right after arming.
std::vector<Detection> data_monitor_step(MonitorState& state, const MonitorConfig& cfg, const Vector& y_k,
                                         const RankTolerance& tol = {});

/// Model-based monitor with N = nu (or the configured fixed window, which
/// must be >= nu). Armed at k = N. The residual also includes the distance of
/// the newest window from Col(O_N).
std::vector<Detection> model_monitor_step(const LtiSystem& sys, MonitorState& state, const MonitorConfig& cfg,
                                          const Vector& y_k, const RankTolerance& tol = {});

DetectionReport run_monitor(const OutputSeries& y, const MonitorConfig& cfg, const RankTolerance& tol = {},
                            std::optional<std::size_t> attack_start = std::nullopt);

DetectionReport run_monitor(const OutputSeries& y, const MonitorConfig& cfg, const LtiSystem& sys,
                            const RankTolerance& tol = {}, std::optional<std::size_t> attack_start = std::nullopt);

}  // namespace monitor
}  // namespace ddmon
