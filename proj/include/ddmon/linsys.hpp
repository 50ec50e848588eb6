#pragma once

#include <cstddef>
#include <vector>

#include "ddmon/numerics.hpp"

namespace ddmon {

/// Discrete-time LTI system x(k+1) = A x(k) + B u(k), y(k) = C x(k) + D u(k).
class LtiSystem {
 public:
  LtiSystem(Matrix A, Matrix B, Matrix C, Matrix D);

  const Matrix& A() const { return A_; }
  const Matrix& B() const { return B_; }
  const Matrix& C() const { return C_; }
  const Matrix& D() const { return D_; }

  std::size_t n() const { return static_cast<std::size_t>(A_.rows()); }
  std::size_t m() const { return static_cast<std::size_t>(B_.cols()); }
  std::size_t p() const { return static_cast<std::size_t>(C_.rows()); }

  friend bool operator==(const LtiSystem& a, const LtiSystem& b) {
    return a.A_ == b.A_ && a.B_ == b.B_ && a.C_ == b.C_ && a.D_ == b.D_;
  }

 private:
  Matrix A_, B_, C_, D_;
};

/// Input samples u(k) for k = 0, 1, ...; samples past the end read as zero.
/// Entries before start_time must be zero.
class InputSeries {
 public:
  explicit InputSeries(std::size_t m, std::size_t start_time = 0) : m_(m), start_time_(start_time) {}
  InputSeries(std::size_t m, std::vector<Vector> samples, std::size_t start_time = 0);

  std::size_t m() const { return m_; }
  std::size_t start_time() const { return start_time_; }
  std::size_t size() const { return samples_.size(); }
  const std::vector<Vector>& samples() const { return samples_; }

  /// u(k), zero-extended.
  Vector at(std::size_t k) const;
  /// Stacked (u(first), ..., u(first + count - 1)).
  Vector window(std::size_t first, std::size_t count) const;

  /// Sets u(k); grows the series with zero samples as needed.
  void set(std::size_t k, const Vector& value);

 private:
  std::size_t m_;
  std::size_t start_time_;
  std::vector<Vector> samples_;
};

class OutputSeries {
 public:
  explicit OutputSeries(std::size_t p) : p_(p) {}
  OutputSeries(std::size_t p, std::vector<Vector> samples);

  std::size_t p() const { return p_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const Vector& operator[](std::size_t k) const { return samples_[k]; }
  const std::vector<Vector>& samples() const { return samples_; }

  void push_back(const Vector& y);

  /// Stacked window (y(first), ..., y(first + length - 1)).
  Vector window(std::size_t first, std::size_t length) const;

  /// Copy of the first `count` samples.
  OutputSeries head(std::size_t count) const;

 private:
  std::size_t p_;
  std::vector<Vector> samples_;
};

struct Trajectory {
  OutputSeries outputs;
  std::vector<Vector> states;
};

namespace linsys {

/// Exact recursion over k = 0..horizon-1. States are returned for oracle
/// checks; monitors only ever see outputs.
Trajectory simulate(const LtiSystem& sys, const Vector& x0, const InputSeries& u, std::size_t horizon);

/// [C; CA; ...; CA^{N-1}], pN x n.
Matrix observability_matrix(const LtiSystem& sys, std::size_t N);

/// Block lower-triangular Toeplitz matrix with D on the diagonal and
/// CA^{j-1}B on the j-th subdiagonal, pN x mN.
Matrix input_coupling_matrix(const LtiSystem& sys, std::size_t N);

/// O_N x0 + C_N u_window.
Vector windowed_output(const LtiSystem& sys, const Vector& x0, const Vector& u_window, std::size_t N);

}  // namespace linsys
}  // namespace ddmon
