#include "ddmon/indices.hpp"

#include <algorithm>

namespace ddmon::indices {
namespace {

// Columns are scaled to unit norm before ranking; rank is unchanged in exact
// arithmetic and rapidly growing or decaying powers stay comparable.
std::size_t scaled_rank(Matrix cols, const RankTolerance& tol) {
  for (Eigen::Index j = 0; j < cols.cols(); ++j) {
    const double nrm = cols.col(j).norm();
    if (nrm > 0.0) cols.col(j) /= nrm;
  }
  return numerics::numerical_rank(cols, tol);
}

}  // namespace

std::size_t observability_index(const LtiSystem& sys, const RankTolerance& tol) {
  const std::size_t cap = sys.n() + 1;
  const Matrix full = linsys::observability_matrix(sys, cap + 1);
  const auto p = static_cast<Eigen::Index>(sys.p());
  std::size_t prev = numerics::numerical_rank(full.topRows(p), tol);
  for (std::size_t N = 1; N <= cap; ++N) {
    const std::size_t next = numerics::numerical_rank(full.topRows(p * static_cast<Eigen::Index>(N + 1)), tol);
    if (next == prev) return N;
    prev = next;
  }
  return cap;
}

std::size_t excitability_index_at(const LtiSystem& sys, const Vector& x, const RankTolerance& tol) {
  if (static_cast<std::size_t>(x.size()) != sys.n()) {
    throw Error(ErrorCode::DimensionMismatch, "x length does not match the state dimension");
  }
  const std::size_t cap = sys.n() + 1;
  const auto n = static_cast<Eigen::Index>(sys.n());
  Matrix krylov(n, static_cast<Eigen::Index>(cap + 1));
  krylov.col(0) = x;
  for (Eigen::Index j = 1; j < krylov.cols(); ++j) krylov.col(j) = sys.A() * krylov.col(j - 1);

  std::size_t prev = scaled_rank(krylov.leftCols(1), tol);
  for (std::size_t i = 1; i <= cap; ++i) {
    const std::size_t next = scaled_rank(krylov.leftCols(static_cast<Eigen::Index>(i + 1)), tol);
    if (next == prev) return i;
    prev = next;
  }
  return cap;
}

std::size_t excitability_index(const LtiSystem& sys, const RankTolerance& tol) {
  const auto n = static_cast<Eigen::Index>(sys.n());
  const std::size_t cap = sys.n() + 1;
  Matrix powers(n * n, static_cast<Eigen::Index>(cap + 1));
  Matrix Ak = Matrix::Identity(n, n);
  for (Eigen::Index d = 0; d < powers.cols(); ++d) {
    powers.col(d) = Eigen::Map<const Vector>(Ak.data(), n * n);
    Ak = Ak * sys.A();
  }
  // rank grows by one per power until the minimal polynomial is reached
  for (std::size_t d = 1; d <= cap; ++d) {
    if (scaled_rank(powers.leftCols(static_cast<Eigen::Index>(d + 1)), tol) <= d) return d;
  }
  return cap;
}

std::size_t heuristic_window(std::size_t T, std::size_t p) {
  const std::size_t N = (T + 1) / (p + 1);
  if (N < 1) throw Error(ErrorCode::WindowTooSmall, "horizon too short for a window of size >= 1");
  return N;
}

std::size_t safe_horizon_heuristic(std::size_t nu, std::size_t mu, std::size_t p) {
  if (nu == 0 || mu == 0 || p == 0) throw Error(ErrorCode::InvalidArgument, "indices must be positive");
  const std::size_t from_window = nu * (p + 1) - 1;
  // ceil(mu (p + 1) / p) - 1, in integers
  const std::size_t from_columns = (mu * (p + 1) + p - 1) / p - 1;
  return std::max(from_window, from_columns);
}

IndexReport compute_report(const LtiSystem& sys, const std::optional<Vector>& x0, const RankTolerance& tol) {
  IndexReport r;
  r.nu = observability_index(sys, tol);
  r.mu = excitability_index(sys, tol);
  if (x0) r.mu_of_x0 = excitability_index_at(sys, *x0, tol);
  r.t_safe_model = r.nu;
  r.t_safe_data = r.nu + r.mu;
  r.t_safe_heuristic = safe_horizon_heuristic(r.nu, r.mu, sys.p());
  return r;
}

}  // namespace ddmon::indices
