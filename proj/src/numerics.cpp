#include "ddmon/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ddmon {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::WindowTooLarge: return "WindowTooLarge";
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::WindowBelowObservabilityIndex: return "WindowBelowObservabilityIndex";
    case ErrorCode::RegimeViolation: return "RegimeViolation";
    case ErrorCode::BadDimensions: return "BadDimensions";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

void RankTolerance::validate() const {
  if (!(relative_cutoff > 0.0) || !(relative_cutoff < 1.0) || !(absolute_floor > 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "rank tolerance needs 0 < relative_cutoff < 1 and absolute_floor > 0");
  }
}

double RankTolerance::cutoff(double sigma_max) const {
  return std::max(relative_cutoff * sigma_max, absolute_floor);
}

namespace numerics {
namespace {

using Svd = Eigen::BDCSVD<Matrix>;

bool is_empty(const Matrix& m) { return m.rows() == 0 || m.cols() == 0; }

}  // namespace

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::NonFinite, std::string(what) + " has NaN or Inf entries");
  }
}

Vector singular_values(const Matrix& m) {
  require_finite(m, "matrix");
  if (is_empty(m)) return Vector(0);
  Svd svd(m);
  return svd.singularValues();
}

std::size_t rank_from_singular_values(const Vector& sigma, const RankTolerance& tol) {
  if (sigma.size() == 0) return 0;
  const double cut = tol.cutoff(sigma(0));
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cut) ++r;
  }
  return r;
}

std::size_t numerical_rank(const Matrix& m, const RankTolerance& tol) {
  return rank_from_singular_values(singular_values(m), tol);
}

void sign_normalize_columns(Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    auto col = m.col(j);
    const double largest = col.cwiseAbs().maxCoeff();
    if (largest == 0.0) continue;
    // Ties within rounding resolve to the first index.
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col(i)) >= largest * (1.0 - 1e-12)) {
        if (col(i) < 0.0) col = -col;
        break;
      }
    }
  }
}

Matrix range_basis(const Matrix& m, const RankTolerance& tol) {
  require_finite(m, "matrix");
  if (is_empty(m)) return Matrix(m.rows(), 0);
  Svd svd(m, Eigen::ComputeThinU);
  const auto r = static_cast<Eigen::Index>(rank_from_singular_values(svd.singularValues(), tol));
  Matrix basis = svd.matrixU().leftCols(r);
  sign_normalize_columns(basis);
  return basis;
}

Matrix kernel_basis(const Matrix& m, const RankTolerance& tol) {
  require_finite(m, "matrix");
  if (m.cols() == 0) return Matrix(0, 0);
  if (m.rows() == 0) return Matrix::Identity(m.cols(), m.cols());
  Svd svd(m, Eigen::ComputeFullV);
  const auto r = static_cast<Eigen::Index>(rank_from_singular_values(svd.singularValues(), tol));
  Matrix basis = svd.matrixV().rightCols(m.cols() - r);
  sign_normalize_columns(basis);
  return basis;
}

Matrix pseudoinverse(const Matrix& m, const RankTolerance& tol) {
  require_finite(m, "matrix");
  if (is_empty(m)) return Matrix::Zero(m.cols(), m.rows());
  Svd svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  const auto r = static_cast<Eigen::Index>(rank_from_singular_values(sigma, tol));
  const Vector inv = sigma.head(r).cwiseInverse();
  return svd.matrixV().leftCols(r) * inv.asDiagonal() * svd.matrixU().leftCols(r).transpose();
}

Propagator least_squares_propagator(const Matrix& W, const Matrix& W_fwd, const RankTolerance& tol) {
  if (W.rows() != W_fwd.rows() || W.cols() != W_fwd.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "W and W_fwd must have identical shapes");
  }
  require_finite(W, "W");
  require_finite(W_fwd, "W_fwd");
  Propagator out;
  out.M = W_fwd * pseudoinverse(W, tol);
  out.residual = (W_fwd - out.M * W).norm();
  return out;
}

double projection_residual(const Matrix& orthonormal_basis, const Vector& v) {
  if (orthonormal_basis.cols() == 0) return v.norm();
  return (v - orthonormal_basis * (orthonormal_basis.transpose() * v)).norm();
}

}  // namespace numerics
}  // namespace ddmon
