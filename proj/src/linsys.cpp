#include "ddmon/linsys.hpp"

#include <string>
#include <utility>

namespace ddmon {

LtiSystem::LtiSystem(Matrix A, Matrix B, Matrix C, Matrix D)
    : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)), D_(std::move(D)) {
  if (A_.rows() != A_.cols() || A_.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "A must be square and nonempty");
  }
  if (B_.rows() != A_.rows()) throw Error(ErrorCode::DimensionMismatch, "B must have n rows");
  if (C_.cols() != A_.rows()) throw Error(ErrorCode::DimensionMismatch, "C must have n columns");
  if (D_.rows() != C_.rows() || D_.cols() != B_.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "D must be p x m");
  }
  numerics::require_finite(A_, "A");
  numerics::require_finite(B_, "B");
  numerics::require_finite(C_, "C");
  numerics::require_finite(D_, "D");
}

InputSeries::InputSeries(std::size_t m, std::vector<Vector> samples, std::size_t start_time)
    : m_(m), start_time_(start_time), samples_(std::move(samples)) {
  for (std::size_t k = 0; k < samples_.size(); ++k) {
    if (static_cast<std::size_t>(samples_[k].size()) != m_) {
      throw Error(ErrorCode::DimensionMismatch, "input sample " + std::to_string(k) + " has wrong length");
    }
    if (!samples_[k].allFinite()) throw Error(ErrorCode::NonFinite, "input sample is not finite");
    if (k < start_time_ && !samples_[k].isZero(0.0)) {
      throw Error(ErrorCode::InvalidArgument, "input is nonzero before its start time");
    }
  }
}

Vector InputSeries::at(std::size_t k) const {
  if (k < samples_.size()) return samples_[k];
  return Vector::Zero(static_cast<Eigen::Index>(m_));
}

Vector InputSeries::window(std::size_t first, std::size_t count) const {
  const auto m = static_cast<Eigen::Index>(m_);
  Vector out(m * static_cast<Eigen::Index>(count));
  for (std::size_t j = 0; j < count; ++j) out.segment(static_cast<Eigen::Index>(j) * m, m) = at(first + j);
  return out;
}

void InputSeries::set(std::size_t k, const Vector& value) {
  if (static_cast<std::size_t>(value.size()) != m_) {
    throw Error(ErrorCode::DimensionMismatch, "input sample has wrong length");
  }
  if (k < start_time_ && !value.isZero(0.0)) {
    throw Error(ErrorCode::InvalidArgument, "input is nonzero before its start time");
  }
  if (samples_.size() <= k) samples_.resize(k + 1, Vector::Zero(static_cast<Eigen::Index>(m_)));
  samples_[k] = value;
}

OutputSeries::OutputSeries(std::size_t p, std::vector<Vector> samples) : p_(p) {
  samples_.reserve(samples.size());
  for (auto& y : samples) push_back(y);
}

void OutputSeries::push_back(const Vector& y) {
  if (static_cast<std::size_t>(y.size()) != p_) {
    throw Error(ErrorCode::DimensionMismatch, "output sample has length " + std::to_string(y.size()) +
                                                  ", expected " + std::to_string(p_));
  }
  if (!y.allFinite()) throw Error(ErrorCode::NonFinite, "output sample is not finite");
  samples_.push_back(y);
}

Vector OutputSeries::window(std::size_t first, std::size_t length) const {
  if (first + length > samples_.size()) {
    throw Error(ErrorCode::WindowTooLarge, "window runs past the end of the series");
  }
  const auto p = static_cast<Eigen::Index>(p_);
  Vector out(p * static_cast<Eigen::Index>(length));
  for (std::size_t j = 0; j < length; ++j) out.segment(static_cast<Eigen::Index>(j) * p, p) = samples_[first + j];
  return out;
}

OutputSeries OutputSeries::head(std::size_t count) const {
  OutputSeries out(p_);
  out.samples_.assign(samples_.begin(), samples_.begin() + static_cast<std::ptrdiff_t>(std::min(count, samples_.size())));
  return out;
}

namespace linsys {

Trajectory simulate(const LtiSystem& sys, const Vector& x0, const InputSeries& u, std::size_t horizon) {
  if (static_cast<std::size_t>(x0.size()) != sys.n()) {
    throw Error(ErrorCode::DimensionMismatch, "x0 length does not match the state dimension");
  }
  if (u.m() != sys.m()) throw Error(ErrorCode::DimensionMismatch, "input width does not match B");

  Trajectory traj{OutputSeries(sys.p()), {}};
  traj.states.reserve(horizon);
  Vector x = x0;
  for (std::size_t k = 0; k < horizon; ++k) {
    const Vector uk = u.at(k);
    traj.states.push_back(x);
    traj.outputs.push_back(sys.C() * x + sys.D() * uk);
    x = sys.A() * x + sys.B() * uk;
  }
  return traj;
}

Matrix observability_matrix(const LtiSystem& sys, std::size_t N) {
  if (N == 0) throw Error(ErrorCode::WindowTooSmall, "observability matrix needs N >= 1");
  const auto p = static_cast<Eigen::Index>(sys.p());
  const auto n = static_cast<Eigen::Index>(sys.n());
  Matrix O(p * static_cast<Eigen::Index>(N), n);
  Matrix block = sys.C();
  for (std::size_t i = 0; i < N; ++i) {
    O.middleRows(static_cast<Eigen::Index>(i) * p, p) = block;
    block = block * sys.A();
  }
  return O;
}

Matrix input_coupling_matrix(const LtiSystem& sys, std::size_t N) {
  if (N == 0) throw Error(ErrorCode::WindowTooSmall, "input coupling matrix needs N >= 1");
  const auto p = static_cast<Eigen::Index>(sys.p());
  const auto m = static_cast<Eigen::Index>(sys.m());
  const auto blocks = static_cast<Eigen::Index>(N);

  // markov[0] = D, markov[j] = C A^{j-1} B
  std::vector<Matrix> markov;
  markov.reserve(N);
  markov.push_back(sys.D());
  Matrix CAk = sys.C();
  for (std::size_t j = 1; j < N; ++j) {
    markov.push_back(CAk * sys.B());
    CAk = CAk * sys.A();
  }

  Matrix T = Matrix::Zero(p * blocks, m * blocks);
  for (Eigen::Index row = 0; row < blocks; ++row) {
    for (Eigen::Index col = 0; col <= row; ++col) {
      T.block(row * p, col * m, p, m) = markov[static_cast<std::size_t>(row - col)];
    }
  }
  return T;
}

Vector windowed_output(const LtiSystem& sys, const Vector& x0, const Vector& u_window, std::size_t N) {
  if (static_cast<std::size_t>(x0.size()) != sys.n()) {
    throw Error(ErrorCode::DimensionMismatch, "x0 length does not match the state dimension");
  }
  if (static_cast<std::size_t>(u_window.size()) != sys.m() * N) {
    throw Error(ErrorCode::DimensionMismatch, "input window must have length mN");
  }
  return observability_matrix(sys, N) * x0 + input_coupling_matrix(sys, N) * u_window;
}

}  // namespace linsys
}  // namespace ddmon
