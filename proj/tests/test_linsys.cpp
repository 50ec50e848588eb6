#include "doctest.h"

#include "ddmon/linsys.hpp"
#include "support/oracles.hpp"
#include "support/random_systems.hpp"

using namespace ddmon;

namespace {

LtiSystem shift_system() {
  Matrix A(2, 2);
  A << 0, 1, 0, 0;
  Matrix B(2, 1);
  B << 0, 1;
  Matrix C(1, 2);
  C << 1, 0;
  return LtiSystem(A, B, C, Matrix::Zero(1, 1));
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST_CASE("system construction checks dimensions") {
  CHECK_THROWS_AS(LtiSystem(Matrix::Zero(2, 3), Matrix::Zero(2, 1), Matrix::Zero(1, 2), Matrix::Zero(1, 1)), Error);
  CHECK_THROWS_AS(LtiSystem(Matrix::Zero(2, 2), Matrix::Zero(3, 1), Matrix::Zero(1, 2), Matrix::Zero(1, 1)), Error);
  CHECK_THROWS_AS(LtiSystem(Matrix::Zero(2, 2), Matrix::Zero(2, 1), Matrix::Zero(1, 3), Matrix::Zero(1, 1)), Error);
  CHECK_THROWS_AS(LtiSystem(Matrix::Zero(2, 2), Matrix::Zero(2, 1), Matrix::Zero(1, 2), Matrix::Zero(2, 1)), Error);
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(LtiSystem(bad, Matrix::Zero(2, 1), Matrix::Zero(1, 2), Matrix::Zero(1, 1)), Error);
}

TEST_CASE("simulate examples") {
  const auto sys = shift_system();
  const auto traj = linsys::simulate(sys, vec({0, 1}), InputSeries(1), 4);
  REQUIRE(traj.outputs.size() == 4);
  CHECK(traj.outputs[0](0) == 0.0);
  CHECK(traj.outputs[1](0) == 1.0);
  CHECK(traj.outputs[2](0) == 0.0);
  CHECK(traj.outputs[3](0) == 0.0);
  CHECK(traj.states.size() == 4);

  const auto zero = linsys::simulate(sys, vec({0, 0}), InputSeries(1), 5);
  for (const auto& y : zero.outputs.samples()) CHECK(y.isZero(0.0));

  const LtiSystem scalar(Matrix::Constant(1, 1, 0.5), Matrix::Zero(1, 1), Matrix::Identity(1, 1), Matrix::Zero(1, 1));
  const auto geo = linsys::simulate(scalar, vec({1}), InputSeries(1), 3);
  CHECK(geo.outputs[0](0) == 1.0);
  CHECK(geo.outputs[1](0) == 0.5);
  CHECK(geo.outputs[2](0) == 0.25);
}

TEST_CASE("simulate rejects inconsistent sizes") {
  const auto sys = shift_system();
  try {
    linsys::simulate(sys, vec({1}), InputSeries(1), 3);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
  CHECK_THROWS_AS(linsys::simulate(sys, vec({0, 1}), InputSeries(2), 3), Error);
}

TEST_CASE("input series is zero-extended and zero before start") {
  InputSeries u(2, 3);
  CHECK(u.at(10).isZero(0.0));
  CHECK_THROWS_AS(u.set(1, vec({1, 0})), Error);
  u.set(4, vec({1, 2}));
  CHECK(u.size() == 5);
  CHECK(u.at(3).isZero(0.0));
  CHECK(u.window(3, 3) == vec({0, 0, 1, 2, 0, 0}));
  CHECK_THROWS_AS(InputSeries(1, {vec({1})}, 1), Error);
}

TEST_CASE("observability matrix examples") {
  const auto sys = shift_system();
  CHECK(linsys::observability_matrix(sys, 1) == sys.C());
  CHECK(linsys::observability_matrix(sys, 2).isApprox(Matrix::Identity(2, 2)));
  CHECK_THROWS_AS(linsys::observability_matrix(sys, 0), Error);

  Matrix C(1, 2);
  C << 1, 0;
  const LtiSystem ident(Matrix::Identity(2, 2), Matrix::Zero(2, 1), C, Matrix::Zero(1, 1));
  const Matrix O3 = linsys::observability_matrix(ident, 3);
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(O3.row(i) == C.row(0));
  CHECK(numerics::numerical_rank(O3) == 1);
}

TEST_CASE("input coupling matrix examples") {
  const auto sys = shift_system();
  CHECK(linsys::input_coupling_matrix(sys, 1) == sys.D());
  // CB = 0 and CAB = 1: inputs reach the output two steps later
  CHECK(linsys::input_coupling_matrix(sys, 2).isZero(0.0));
  Matrix expected = Matrix::Zero(3, 3);
  expected(2, 0) = 1.0;
  CHECK(linsys::input_coupling_matrix(sys, 3) == expected);

  const LtiSystem decoupled(Matrix::Identity(2, 2), Matrix::Zero(2, 3), Matrix::Ones(2, 2), Matrix::Zero(2, 3));
  CHECK(linsys::input_coupling_matrix(decoupled, 4).isZero(0.0));
  CHECK(linsys::input_coupling_matrix(decoupled, 4).rows() == 8);
  CHECK(linsys::input_coupling_matrix(decoupled, 4).cols() == 12);
}

TEST_CASE("windowed output examples") {
  const auto sys = shift_system();
  const Vector x0 = vec({0, 1});
  CHECK(linsys::windowed_output(sys, x0, Vector::Zero(2), 2) == vec({0, 1}));
  const Vector u = vec({1, 0});
  CHECK(linsys::windowed_output(sys, Vector::Zero(2), u, 2) == linsys::input_coupling_matrix(sys, 2) * u);
  CHECK_THROWS_AS(linsys::windowed_output(sys, x0, Vector::Zero(3), 2), Error);
}

TEST_CASE("property: windowed output agrees with simulation") {
  testing::Generator gen(21);
  for (int trial = 0; trial < 60; ++trial) {
    auto shape = gen.shape(6);
    shape.feedthrough = true;
    const LtiSystem sys = gen.system(shape);
    const Vector x0 = gen.gaussian(static_cast<Eigen::Index>(sys.n()));
    for (std::size_t N = 1; N <= 8; ++N) {
      InputSeries u(sys.m());
      for (std::size_t k = 0; k < N; ++k) u.set(k, gen.gaussian(static_cast<Eigen::Index>(sys.m())));
      const auto traj = linsys::simulate(sys, x0, u, N);
      const Vector stacked = traj.outputs.window(0, N);
      const Vector direct = linsys::windowed_output(sys, x0, u.window(0, N), N);
      CHECK((stacked - direct).cwiseAbs().maxCoeff() <= 1e-10);

      // outputs lie in Col([O_N | C_N])
      Matrix OC(static_cast<Eigen::Index>(sys.p() * N), static_cast<Eigen::Index>((sys.n() + sys.m() * N)));
      OC << linsys::observability_matrix(sys, N), linsys::input_coupling_matrix(sys, N);
      CHECK(oracle::projection_residual(OC, stacked) <= 1e-8);
    }
  }
}

TEST_CASE("property: rank of O_N is nondecreasing and bounded") {
  testing::Generator gen(22);
  for (int trial = 0; trial < 60; ++trial) {
    const LtiSystem sys = gen.system(gen.shape(6));
    std::size_t prev = 0;
    for (std::size_t N = 1; N <= 8; ++N) {
      const std::size_t r = numerics::numerical_rank(linsys::observability_matrix(sys, N));
      CHECK(r >= prev);
      CHECK(r <= std::min(sys.p() * N, sys.n()));
      prev = r;
    }
  }
}
