#include "doctest.h"

#include <algorithm>
#include <complex>

#include "ddmon/features.hpp"
#include "ddmon/indices.hpp"
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

OutputSeries scalar_series(std::initializer_list<double> values) {
  OutputSeries y(1);
  for (double v : values) {
    Vector s(1);
    s << v;
    y.push_back(s);
  }
  return y;
}

}  // namespace

TEST_CASE("model feature basis of the shift system") {
  const auto basis = features::model_feature_basis(shift_system(), 2);
  CHECK(basis.window == 2);
  CHECK(basis.q() == 2);
  CHECK(basis.provenance == Provenance::ModelBased);
  CHECK((basis.basis.transpose() * basis.basis).isIdentity(1e-12));
}

TEST_CASE("model feature dynamics reproduce the shift") {
  const auto sys = shift_system();
  const auto basis = features::model_feature_basis(sys, 2);
  const auto dyn = features::model_feature_dynamics(sys, basis);
  CHECK(dyn.fit_residual == 0.0);
  // in stacked-output coordinates the predictor is the shift (y0, y1) -> (y1, 0)
  const Matrix P = basis.basis * dyn.M * basis.basis.transpose();
  Matrix expected(2, 2);
  expected << 0, 1, 0, 0;
  CHECK((P - expected).cwiseAbs().maxCoeff() <= 1e-12);

  const auto narrow = features::model_feature_basis(sys, 1);
  try {
    features::model_feature_dynamics(sys, narrow);
    FAIL("expected WindowBelowObservabilityIndex");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WindowBelowObservabilityIndex);
  }
}

TEST_CASE("data feature basis and sequence") {
  const auto y = scalar_series({1, 0.5, 0.25, 0.125, 0.0625});
  const auto basis = features::data_feature_basis(hankel::build_hankel(y, 2, 4));
  CHECK(basis.q() == 1);
  CHECK(basis.provenance == Provenance::DataDriven);
  // sign convention: largest-magnitude entry positive
  CHECK(basis.basis(0, 0) > 0);

  const auto seq = features::feature_sequence(basis, y);
  REQUIRE(seq.vectors.size() == 4);
  CHECK(seq.q == 1);
  for (std::size_t k = 0; k + 1 < seq.vectors.size(); ++k) {
    CHECK(seq.vectors[k + 1](0) == doctest::Approx(0.5 * seq.vectors[k](0)));
  }

  const auto pair = features::assemble_shifted_pair(seq);
  CHECK(pair.current.cols() == 3);
  const auto dyn = features::fit_feature_dynamics(pair.current, pair.next);
  CHECK(dyn.q() == 1);
  CHECK(dyn.M(0, 0) == doctest::Approx(0.5));
  CHECK(dyn.fit_residual <= 1e-14);
}

TEST_CASE("feature errors") {
  const auto y = scalar_series({1, 2});
  CHECK_THROWS_AS(features::data_feature_basis(HankelMatrix{}), Error);
  FeatureBasis wide{3, Matrix::Identity(3, 3), Provenance::DataDriven};
  try {
    features::feature_sequence(wide, y);
    FAIL("expected WindowTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WindowTooLarge);
  }
  FeatureBasis mismatched{1, Matrix::Identity(2, 2), Provenance::DataDriven};
  CHECK_THROWS_AS(features::feature_sequence(mismatched, y), Error);
  try {
    features::assemble_shifted_pair(FeatureSequence{1, {Vector::Ones(1)}});
    FAIL("expected TooFewSamples");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewSamples);
  }
  try {
    features::fit_feature_dynamics(Matrix::Ones(2, 3), Matrix::Ones(2, 2));
    FAIL("expected ShapeMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ShapeMismatch);
  }
}

TEST_CASE("property: model features evolve linearly along nominal trajectories") {
  testing::Generator gen(51);
  for (int trial = 0; trial < 40; ++trial) {
    const LtiSystem sys = gen.system(gen.shape(6));
    const std::size_t nu = indices::observability_index(sys);
    const std::size_t N = nu + gen.uniform_int(0, 2);
    const auto basis = features::model_feature_basis(sys, N);
    CHECK(basis.q() == oracle::lu_rank(linsys::observability_matrix(sys, N)));
    const auto dyn = features::model_feature_dynamics(sys, basis);
    const Vector x0 = gen.gaussian(static_cast<Eigen::Index>(sys.n()));
    const auto y = testing::nominal_outputs(sys, x0, N + 12);
    const auto seq = features::feature_sequence(basis, y);
    double scale = 1.0;
    for (const auto& w : seq.vectors) scale = std::max(scale, w.norm());
    for (std::size_t k = 0; k + 1 < seq.vectors.size(); ++k) {
      CHECK((seq.vectors[k + 1] - dyn.M * seq.vectors[k]).norm() <= 1e-9 * scale);
    }
  }
}

TEST_CASE("property: data features span the model features") {
  testing::Generator gen(52);
  for (int trial = 0; trial < 40; ++trial) {
    const LtiSystem sys = gen.system(gen.shape(5));
    const std::size_t nu = indices::observability_index(sys);
    const std::size_t mu = indices::excitability_index(sys);
    const std::size_t N = nu;
    const std::size_t T = N + mu - 1 + gen.uniform_int(0, 3);
    const Vector x0 = gen.gaussian(static_cast<Eigen::Index>(sys.n()));
    const auto y = testing::nominal_outputs(sys, x0, T + 1);
    const auto data = features::data_feature_basis(hankel::build_hankel(y, N, T));
    // the data basis lies in Col(O_N)
    const Matrix O = linsys::observability_matrix(sys, N);
    for (Eigen::Index j = 0; j < data.basis.cols(); ++j) {
      CHECK(oracle::projection_residual(O, data.basis.col(j)) <= 1e-7);
    }
    const auto seq = features::feature_sequence(data, y);
    const auto pair = features::assemble_shifted_pair(seq);
    const auto dyn = features::fit_feature_dynamics(pair.current, pair.next);
    CHECK(dyn.fit_residual <= 1e-8 * std::max(1.0, pair.next.norm()));
  }
}

TEST_CASE("property: data-driven spectrum matches A") {
  // fully observable, x0 exciting every mode: M is similar to A
  testing::Generator gen(53);
  for (int trial = 0; trial < 30; ++trial) {
    auto shape = gen.shape(4);
    shape.unobservable = 0;
    shape.derogatory = false;
    const LtiSystem sys = gen.system(shape);
    const std::size_t nu = indices::observability_index(sys);
    const std::size_t mu = indices::excitability_index(sys);
    const Vector x0 = gen.gaussian(static_cast<Eigen::Index>(sys.n()));
    REQUIRE(indices::excitability_index_at(sys, x0) == sys.n());
    const std::size_t T = nu + mu + 2;
    const auto y = testing::nominal_outputs(sys, x0, T + 1);
    const auto basis = features::data_feature_basis(hankel::build_hankel(y, nu, T));
    REQUIRE(basis.q() == sys.n());
    const auto pair = features::assemble_shifted_pair(features::feature_sequence(basis, y));
    const auto dyn = features::fit_feature_dynamics(pair.current, pair.next);

    auto sorted = [](Eigen::VectorXcd v) {
      std::vector<std::complex<double>> out(v.data(), v.data() + v.size());
      std::sort(out.begin(), out.end(), [](auto a, auto b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
      });
      return out;
    };
    const auto a = sorted(Eigen::EigenSolver<Matrix>(sys.A()).eigenvalues());
    const auto m = sorted(Eigen::EigenSolver<Matrix>(dyn.M).eigenvalues());
    REQUIRE(a.size() == m.size());
    // pair eigenvalues greedily since near-equal real parts can swap order
    std::vector<bool> used(m.size(), false);
    for (const auto& lambda : a) {
      double best = 1e300;
      std::size_t at = 0;
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (!used[i] && std::abs(m[i] - lambda) < best) {
          best = std::abs(m[i] - lambda);
          at = i;
        }
      }
      used[at] = true;
      CHECK(best <= 1e-6);
    }
  }
}
