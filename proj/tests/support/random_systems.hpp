#pragma once

#include <cstdint>
#include <random>

#include "ddmon/linsys.hpp"

namespace ddmon::testing {

struct SystemShape {
  std::size_t n = 3;
  std::size_t m = 1;
  std::size_t p = 1;
  /// Dimension of a planted unobservable subspace (0 = generic C).
  std::size_t unobservable = 0;
  /// Repeat eigenvalues so that the minimal polynomial has degree < n.
  bool derogatory = false;
  bool feedthrough = false;
};

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& engine() { return rng_; }

  std::size_t uniform_int(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin() { return uniform_int(0, 1) == 1; }

  Matrix gaussian(Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> nd;
    Matrix out(rows, cols);
    for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] = nd(rng_);
    return out;
  }
  Vector gaussian(Eigen::Index n) { return gaussian(n, 1).col(0); }

  Matrix orthogonal(Eigen::Index n) {
    Eigen::HouseholderQR<Matrix> qr(gaussian(n, n));
    return qr.householderQ() * Matrix::Identity(n, n);
  }

  /// Well-conditioned dynamics: scaled orthogonal blocks keep eigenvalues
  /// spread on a circle of radius in [0.8, 1], so Krylov and Hankel matrices
  /// stay far from the rank cutoff.
  Matrix dynamics(std::size_t n, bool derogatory) {
    const auto N = static_cast<Eigen::Index>(n);
    if (derogatory && n >= 2) {
      // repeated real eigenvalue with two Jordan-free copies plus a rotation part
      Matrix core = Matrix::Zero(N, N);
      const double lambda = uniform(0.5, 0.9);
      core(0, 0) = lambda;
      core(1, 1) = lambda;
      if (n > 2) core.bottomRightCorner(N - 2, N - 2) = uniform(0.8, 1.0) * orthogonal(N - 2);
      const Matrix Q = orthogonal(N);
      return Q * core * Q.transpose();
    }
    return uniform(0.8, 1.0) * orthogonal(N);
  }

  LtiSystem system(const SystemShape& s) {
    const auto n = static_cast<Eigen::Index>(s.n);
    const auto m = static_cast<Eigen::Index>(s.m);
    const auto p = static_cast<Eigen::Index>(s.p);
    const auto hidden = static_cast<Eigen::Index>(s.unobservable);
    Matrix A = dynamics(s.n, s.derogatory);
    Matrix C = gaussian(p, n);
    if (hidden > 0 && hidden < n) {
      // Kalman form [A11 0; A21 A22], C = [C1 0], then a random rotation.
      const auto seen = n - hidden;
      Matrix K = Matrix::Zero(n, n);
      K.topLeftCorner(seen, seen) = dynamics(static_cast<std::size_t>(seen), false);
      K.bottomLeftCorner(hidden, seen) = 0.3 * gaussian(hidden, seen);
      K.bottomRightCorner(hidden, hidden) = dynamics(static_cast<std::size_t>(hidden), false);
      Matrix C0 = Matrix::Zero(p, n);
      C0.leftCols(seen) = gaussian(p, seen);
      const Matrix Q = orthogonal(n);
      A = Q * K * Q.transpose();
      C = C0 * Q.transpose();
    }
    Matrix D = s.feedthrough ? gaussian(p, m) : Matrix::Zero(p, m);
    return LtiSystem(A, gaussian(n, m), C, D);
  }

  /// Random shape within the given bounds.
  SystemShape shape(std::size_t max_n, std::size_t max_m = 3, std::size_t max_p = 3) {
    SystemShape s;
    s.n = uniform_int(1, max_n);
    s.m = uniform_int(1, max_m);
    s.p = uniform_int(1, max_p);
    s.unobservable = (s.n > 1 && coin()) ? uniform_int(1, s.n - 1) : 0;
    s.derogatory = s.n > 2 && uniform_int(0, 3) == 0;
    s.feedthrough = coin();
    return s;
  }

 private:
  std::mt19937_64 rng_;
};

inline OutputSeries nominal_outputs(const LtiSystem& sys, const Vector& x0, std::size_t horizon) {
  return linsys::simulate(sys, x0, InputSeries(sys.m()), horizon).outputs;
}

}  // namespace ddmon::testing
