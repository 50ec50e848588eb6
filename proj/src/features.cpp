#include "ddmon/features.hpp"

#include <string>

#include "ddmon/indices.hpp"

namespace ddmon::features {

FeatureBasis model_feature_basis(const LtiSystem& sys, std::size_t N, const RankTolerance& tol) {
  return FeatureBasis{N, numerics::range_basis(linsys::observability_matrix(sys, N), tol), Provenance::ModelBased};
}

FeatureBasis data_feature_basis(const HankelMatrix& h, const RankTolerance& tol) {
  if (h.data.size() == 0) throw Error(ErrorCode::EmptySeries, "empty Hankel matrix");
  return FeatureBasis{h.window, numerics::range_basis(h.data, tol), Provenance::DataDriven};
}

FeatureSequence feature_sequence(const FeatureBasis& basis, const OutputSeries& y) {
  const std::size_t N = basis.window;
  if (N == 0 || y.size() < N) {
    throw Error(ErrorCode::WindowTooLarge, "series shorter than the feature window");
  }
  if (static_cast<std::size_t>(basis.basis.rows()) != y.p() * N) {
    throw Error(ErrorCode::DimensionMismatch, "basis rows do not match p * N");
  }
  FeatureSequence seq{basis.q(), {}};
  seq.vectors.reserve(y.size() - N + 1);
  for (std::size_t k = 0; k + N <= y.size(); ++k) {
    seq.vectors.push_back(basis.basis.transpose() * y.window(k, N));
  }
  return seq;
}

ShiftedPair assemble_shifted_pair(const FeatureSequence& w) {
  if (w.vectors.size() < 2) throw Error(ErrorCode::TooFewSamples, "need at least two feature vectors");
  const auto q = static_cast<Eigen::Index>(w.q);
  const auto c = static_cast<Eigen::Index>(w.vectors.size() - 1);
  ShiftedPair pair{Matrix(q, c), Matrix(q, c)};
  for (Eigen::Index j = 0; j < c; ++j) {
    pair.current.col(j) = w.vectors[static_cast<std::size_t>(j)];
    pair.next.col(j) = w.vectors[static_cast<std::size_t>(j) + 1];
  }
  return pair;
}

FeatureDynamics fit_feature_dynamics(const Matrix& W, const Matrix& W_fwd, const RankTolerance& tol) {
  auto fit = numerics::least_squares_propagator(W, W_fwd, tol);
  return FeatureDynamics{std::move(fit.M), fit.residual};
}

FeatureDynamics model_feature_dynamics(const LtiSystem& sys, const FeatureBasis& basis, const RankTolerance& tol) {
  const std::size_t nu = indices::observability_index(sys, tol);
  if (basis.window < nu) {
    throw Error(ErrorCode::WindowBelowObservabilityIndex,
                "window " + std::to_string(basis.window) + " is below the observability index " + std::to_string(nu));
  }
  const Matrix reduced = basis.basis.transpose() * linsys::observability_matrix(sys, basis.window);
  return FeatureDynamics{reduced * sys.A() * numerics::pseudoinverse(reduced, tol), 0.0};
}

}  // namespace ddmon::features
