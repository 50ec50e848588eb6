#pragma once

#include <Eigen/Dense>

#include <cstddef>

#include "ddmon/error.hpp"

namespace ddmon {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Singular values at or below max(relative_cutoff * sigma_max, absolute_floor)
/// are treated as zero.
struct RankTolerance {
  double relative_cutoff = 1e-9;
  double absolute_floor = 1e-12;

  void validate() const;
  double cutoff(double sigma_max) const;
};

namespace numerics {

void require_finite(const Matrix& m, const char* what);

/// Singular values in descending order.
Vector singular_values(const Matrix& m);

/// Number of entries of a descending singular value vector above the cutoff.
std::size_t rank_from_singular_values(const Vector& sigma, const RankTolerance& tol);

std::size_t numerical_rank(const Matrix& m, const RankTolerance& tol = {});

/// Orthonormal basis of the numerical column space, columns ordered by
/// descending singular value. Each column is sign-normalized so that its
/// entry of largest magnitude (first one on ties) is positive.
Matrix range_basis(const Matrix& m, const RankTolerance& tol = {});

/// Orthonormal basis of the numerical null space (cols x (cols - rank)).
Matrix kernel_basis(const Matrix& m, const RankTolerance& tol = {});

Matrix pseudoinverse(const Matrix& m, const RankTolerance& tol = {});

struct Propagator {
  Matrix M;
  double residual = 0.0;  // ||W_fwd - M W||_F
};

/// Closed-form minimizer of ||W_fwd - M W||_F, M = W_fwd W^+.
Propagator least_squares_propagator(const Matrix& W, const Matrix& W_fwd,
                                    const RankTolerance& tol = {});

/// Euclidean norm of the component of v orthogonal to the span of an
/// orthonormal basis.
double projection_residual(const Matrix& orthonormal_basis, const Vector& v);

void sign_normalize_columns(Matrix& m);

}  // namespace numerics
}  // namespace ddmon
