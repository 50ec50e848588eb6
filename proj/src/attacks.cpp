#include "ddmon/attacks.hpp"

#include <algorithm>

#include "ddmon/indices.hpp"

namespace ddmon {

bool AttackScenario::active() const {
  for (std::size_t k = start; k < inputs.size(); ++k) {
    if (!inputs.at(k).isZero(0.0)) return true;
  }
  return false;
}

void AttackScenario::validate() const {
  if (inputs.start_time() != start) throw Error(ErrorCode::InvalidArgument, "input start time differs from attack start");
  if (!active()) throw Error(ErrorCode::InvalidArgument, "attack has no nonzero sample");
}

AttackScenario AttackScenario::impulse(std::size_t m, std::size_t start, std::size_t actuator, double magnitude,
                                       std::string label) {
  if (actuator >= m) throw Error(ErrorCode::DimensionMismatch, "actuator index out of range");
  InputSeries u(m, start);
  Vector value = Vector::Zero(static_cast<Eigen::Index>(m));
  value(static_cast<Eigen::Index>(actuator)) = magnitude;
  u.set(start, value);
  return AttackScenario{start, std::move(u), std::move(label)};
}

AttackScenario AttackScenario::from_window(std::size_t m, std::size_t start, const Vector& stacked,
                                           std::string label) {
  const auto width = static_cast<Eigen::Index>(m);
  if (m == 0 || stacked.size() % width != 0) {
    throw Error(ErrorCode::DimensionMismatch, "stacked window length is not a multiple of m");
  }
  InputSeries u(m, start);
  for (Eigen::Index j = 0; j < stacked.size() / width; ++j) {
    u.set(start + static_cast<std::size_t>(j), stacked.segment(j * width, width));
  }
  return AttackScenario{start, std::move(u), std::move(label)};
}

namespace attacks {
namespace {

// Sain-Massey test: left invertible iff rank C_{n+1} - rank C_n = m.
bool left_invertible(const LtiSystem& sys, const RankTolerance& tol) {
  const std::size_t n = sys.n();
  const std::size_t outer = numerics::numerical_rank(linsys::input_coupling_matrix(sys, n + 1), tol);
  const std::size_t inner = numerics::numerical_rank(linsys::input_coupling_matrix(sys, n), tol);
  return outer - inner == sys.m();
}

void record(DetectabilityVerdict& v, std::size_t N, double residual, double cutoff) {
  v.residuals.push_back(residual);
  v.cutoffs.push_back(cutoff);
  v.max_residual = std::max(v.max_residual, residual);
  if (residual > cutoff && !v.witness_window) {
    v.witness_window = N;
    v.detectable = true;
  }
}

}  // namespace

DetectabilityVerdict check_early_detectability(const LtiSystem& sys, const AttackScenario& scenario, std::size_t T,
                                               const RankTolerance& tol) {
  const std::size_t nu = indices::observability_index(sys, tol);
  if (T == 0 || T > nu) throw Error(ErrorCode::RegimeViolation, "early detectability applies to 1 <= T <= nu");
  if (scenario.inputs.m() != sys.m()) throw Error(ErrorCode::DimensionMismatch, "attack width differs from m");

  const Vector u = scenario.inputs.window(0, T);
  const Matrix CT = linsys::input_coupling_matrix(sys, T);
  const Matrix range = numerics::range_basis(linsys::observability_matrix(sys, T), tol);

  DetectabilityVerdict v;
  record(v, T, numerics::projection_residual(range, CT * u), tol.cutoff(CT.norm() * u.norm()));
  return v;
}

DetectabilityVerdict check_undetectable(const LtiSystem& sys, const AttackScenario& scenario, std::size_t N_max,
                                        const RankTolerance& tol) {
  const std::size_t nu = indices::observability_index(sys, tol);
  const std::size_t mu = indices::excitability_index(sys, tol);
  if (scenario.start < nu + mu + 1) {
    throw Error(ErrorCode::RegimeViolation, "attack starts before nu + mu + 1");
  }
  if (scenario.inputs.m() != sys.m()) throw Error(ErrorCode::DimensionMismatch, "attack width differs from m");
  if (N_max == 0) throw Error(ErrorCode::InvalidArgument, "N_max must be >= 1");

  DetectabilityVerdict v;
  const Matrix full = linsys::input_coupling_matrix(sys, N_max);
  const auto p = static_cast<Eigen::Index>(sys.p());
  const auto m = static_cast<Eigen::Index>(sys.m());
  const Vector u = scenario.inputs.window(scenario.start, N_max);
  for (std::size_t N = 1; N <= N_max; ++N) {
    const auto rows = p * static_cast<Eigen::Index>(N);
    const auto cols = m * static_cast<Eigen::Index>(N);
    const auto CN = full.topLeftCorner(rows, cols);
    const auto uN = u.head(cols);
    record(v, N, (CN * uN).norm(), tol.cutoff(CN.norm() * uN.norm()));
  }

  if (scenario.active()) {
    v.left_invertible = left_invertible(sys, tol);
    v.consistent = v.detectable || !*v.left_invertible;
  }
  return v;
}

std::size_t default_check_horizon(const LtiSystem& sys, const AttackScenario& scenario) {
  const std::size_t support = scenario.inputs.size() > scenario.start ? scenario.inputs.size() - scenario.start : 0;
  return support + sys.n() + 1;
}

std::optional<Vector> synthesize_undetectable(const LtiSystem& sys, std::size_t N, const RankTolerance& tol) {
  const Matrix kernel = numerics::kernel_basis(linsys::input_coupling_matrix(sys, N), tol);
  if (kernel.cols() == 0) return std::nullopt;
  return Vector(kernel.col(0));
}

}  // namespace attacks
}  // namespace ddmon
