#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ddmon/linsys.hpp"

namespace ddmon {

/// Actuator injection that is zero before `start`.
struct AttackScenario {
  std::size_t start = 0;
  InputSeries inputs{0};
  std::string label;

  /// True if some sample at or after start is nonzero.
  bool active() const;
  /// Checks inputs.start_time == start and that the scenario is active.
  void validate() const;

  /// Single-sample injection u_actuator(start) = magnitude (actuator is 0-based).
  static AttackScenario impulse(std::size_t m, std::size_t start, std::size_t actuator, double magnitude,
                                std::string label = {});
  /// Stacked window (u(start), ..., u(start + N - 1)).
  static AttackScenario from_window(std::size_t m, std::size_t start, const Vector& stacked,
                                    std::string label = {});
};

struct DetectabilityVerdict {
  bool detectable = false;
  /// Smallest window length whose residual exceeds the tolerance.
  std::optional<std::size_t> witness_window;
  /// Residual per window length 1..N (index 0 is length 1).
  std::vector<double> residuals;
  std::vector<double> cutoffs;
  double max_residual = 0.0;
  /// Only filled for active finite-duration attacks by check_undetectable.
  std::optional<bool> left_invertible;
  /// False when an active finite attack is reported undetectable on a left
  /// invertible system, which cannot happen in exact arithmetic.
  bool consistent = true;
};

namespace attacks {

/// Early-horizon test for T <= nu: detectable iff C_T u_{0:T-1} leaves
/// Col(O_T) by more than the tolerance.
DetectabilityVerdict check_early_detectability(const LtiSystem& sys, const AttackScenario& scenario, std::size_t T,
                                               const RankTolerance& tol = {});

/// Attacks starting at T >= nu + mu + 1 are undetectable iff
/// C_N u_{T:T+N-1} = 0 for every N. The quantifier is checked for N <= N_max.
/// The Markov parameters CA^jB for j >= n are combinations of earlier ones, so
/// once a window covers the attack support plus n steps nothing new can appear;
/// default_check_horizon returns that length.
DetectabilityVerdict check_undetectable(const LtiSystem& sys, const AttackScenario& scenario, std::size_t N_max,
                                        const RankTolerance& tol = {});

std::size_t default_check_horizon(const LtiSystem& sys, const AttackScenario& scenario);

/// Unit-norm element of the numerical kernel of C_N, or nullopt if the kernel
/// is trivial. Injecting it keeps every output within the window nominal.
std::optional<Vector> synthesize_undetectable(const LtiSystem& sys, std::size_t N, const RankTolerance& tol = {});

}  // namespace attacks
}  // namespace ddmon
