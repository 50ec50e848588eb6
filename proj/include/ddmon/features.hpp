#pragma once

#include <cstddef>
#include <vector>

#include "ddmon/hankel.hpp"
#include "ddmon/linsys.hpp"

namespace ddmon {

enum class Provenance { ModelBased, DataDriven };

/// Orthonormal basis S (pN x q) of the output feature space for windows of
/// size N.
struct FeatureBasis {
  std::size_t window = 0;
  Matrix basis;
  Provenance provenance = Provenance::DataDriven;

  std::size_t q() const { return static_cast<std::size_t>(basis.cols()); }
};

/// w(k) = S^T y_{k:k+N-1}.
struct FeatureSequence {
  std::size_t q = 0;
  std::vector<Vector> vectors;
};

/// Feature-space propagator w(k+1) = M w(k).
struct FeatureDynamics {
  Matrix M;
  double fit_residual = 0.0;

  std::size_t q() const { return static_cast<std::size_t>(M.rows()); }
};

/// Columns w(0..c-1) and w(1..c).
struct ShiftedPair {
  Matrix current;
  Matrix next;
};

namespace features {

FeatureBasis model_feature_basis(const LtiSystem& sys, std::size_t N, const RankTolerance& tol = {});

FeatureBasis data_feature_basis(const HankelMatrix& h, const RankTolerance& tol = {});

/// w(k) for k = 0..len(y) - N.
FeatureSequence feature_sequence(const FeatureBasis& basis, const OutputSeries& y);

ShiftedPair assemble_shifted_pair(const FeatureSequence& w);

/// M* = W_fwd W^+ and its Frobenius residual.
FeatureDynamics fit_feature_dynamics(const Matrix& W, const Matrix& W_fwd, const RankTolerance& tol = {});

/// M = (S^T O_N) A (S^T O_N)^+. Needs N >= nu; the residual is zero by
/// construction.
FeatureDynamics model_feature_dynamics(const LtiSystem& sys, const FeatureBasis& basis,
                                       const RankTolerance& tol = {});

}  // namespace features
}  // namespace ddmon
