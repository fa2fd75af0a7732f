#include <doctest.h>

#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "psim/regression.hpp"
#include "psim/rng.hpp"

using namespace psim;
using psim::test::normal_equations;
using psim::test::vec;

namespace {

RowMatrix rows(std::initializer_list<std::initializer_list<double>> values) {
  RowMatrix m(static_cast<Index>(values.size()), static_cast<Index>(values.begin()->size()));
  Index i = 0;
  for (const auto& r : values) {
    Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

double ridge_objective(const Matrix& W, const RowMatrix& X, const RowMatrix& Y, double lambda) {
  Matrix Z(X.rows(), X.cols() + 1);
  Z << X, Matrix::Ones(X.rows(), 1);
  return (Z * W.transpose() - Y).squaredNorm() + lambda * W.leftCols(X.cols()).squaredNorm();
}

}  // namespace

TEST_CASE("ridge_fit hand examples") {
  const RowMatrix X = rows({{1}, {2}}), Y = rows({{2}, {4}});
  const LinearModel exact = ridge_fit(X, Y, 0.0);
  CHECK(exact.weights()(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(exact.weights()(0, 1)) <= 1e-12);
  CHECK(exact.predict(vec({3}))(0) == doctest::Approx(6.0).epsilon(1e-12));

  const LinearModel shrunk = ridge_fit(X, Y, 1.0, false);
  CHECK(shrunk.weights()(0, 0) == doctest::Approx(10.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("ridge_fit matches the normal-equations oracle") {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const Index d = 1 + static_cast<Index>(rng.next_u64() % 10), n = 2 + static_cast<Index>(rng.next_u64() % 49);
    const Index p = 1 + static_cast<Index>(rng.next_u64() % 3);
    const double lambda = rng.uniform(0.01, 2.0);
    const RowMatrix X = rng.normal_matrix(n, d), Y = rng.normal_matrix(n, p);
    const Matrix expected = normal_equations(X, Y, lambda);
    CHECK((ridge_fit(X, Y, lambda).weights() - expected).norm() <= 1e-10 * expected.norm());
    const Matrix no_bias = normal_equations(X, Y, lambda, false);
    CHECK((ridge_fit(X, Y, lambda, false).weights() - no_bias).norm() <= 1e-10 * no_bias.norm());
  }
}

TEST_CASE("ridge_fit errors") {
  CHECK_THROWS_AS(ridge_fit(rows({{1}, {1}}), rows({{1}, {2}}), 0.0), SolverError);
  CHECK_THROWS_AS(ridge_fit(rows({{1}, {2}}), rows({{1}}), 0.1), DimensionError);
  CHECK_THROWS_AS(ridge_fit(rows({{1}, {2}}), rows({{1}, {2}}), -1.0), DimensionError);
  CHECK_NOTHROW(ridge_fit(rows({{1}, {1}}), rows({{1}, {2}}), 0.1));
}

TEST_CASE("ridge solution is locally optimal and satisfies the normal equations") {
  Rng rng(4);
  const RowMatrix X = rng.normal_matrix(30, 4), Y = rng.normal_matrix(30, 2);
  const double lambda = 0.3;
  const Matrix W = ridge_fit(X, Y, lambda).weights();
  const double best = ridge_objective(W, X, Y, lambda);
  for (int i = 0; i < 20; ++i) CHECK(ridge_objective(W + 1e-4 * rng.normal_matrix(2, 5), X, Y, lambda) >= best);

  Matrix Z(30, 5);
  Z << X, Matrix::Ones(30, 1);
  Matrix G = Z.transpose() * Z;
  G.diagonal().head(4).array() += lambda;
  const Matrix residual = G * W.transpose() - Z.transpose() * Y;
  CHECK(residual.norm() <= 1e-8 * (Z.transpose() * Y).norm());
}

TEST_CASE("larger lambda never grows the weights") {
  Rng rng(6);
  const RowMatrix X = rng.normal_matrix(25, 5), Y = rng.normal_matrix(25, 3);
  double previous = std::numeric_limits<double>::infinity();
  for (double lambda : {0.0, 0.01, 0.1, 1.0, 10.0, 100.0}) {
    const double norm = ridge_fit(X, Y, lambda, false).weights().norm();
    CHECK(norm <= previous + 1e-12);
    previous = norm;
  }
}

TEST_CASE("default lambda scales with the input second moment") {
  const RowMatrix X = rows({{1, 2}, {3, 4}});
  // mean diag of [X 1]^T [X 1] / N = ((1+9)/2 + (4+16)/2 + 1) / 3 = 16/3
  CHECK(default_ridge_lambda(X) == doctest::Approx(1e-4 * 16.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("predict edge cases") {
  const LinearModel zero(Matrix::Zero(2, 3), 0.0, true);
  CHECK(zero.predict(vec({4, 5})) == Vector::Zero(2));
  Matrix w = Matrix::Zero(2, 3);
  w.leftCols(2).setIdentity();
  CHECK(LinearModel(w, 0.0, true).predict(vec({4, 5})) == vec({4, 5}));
  CHECK_THROWS_AS(zero.predict(vec({1})), DimensionError);
}

TEST_CASE("RFF features") {
  const RffMap zero(Matrix::Zero(8, 3), Vector::Zero(8));
  CHECK((zero(vec({1, 2, 3})).array() - std::sqrt(2.0 / 8.0)).abs().maxCoeff() <= 1e-15);

  const RffMap a(3, 64, 0.7, 9), b(3, 64, 0.7, 9);
  CHECK(a(vec({0.1, 0.2, 0.3})) == b(vec({0.1, 0.2, 0.3})));
  CHECK(a.digest() == b.digest());
  CHECK(a.digest() != RffMap(3, 64, 0.7, 10).digest());
  CHECK_THROWS_AS(a(vec({1, 2})), DimensionError);

  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    const Vector z = 5.0 * rng.normal_vector(3);
    const Vector f = a(z);
    CHECK(f.norm() <= std::sqrt(2.0) + 1e-12);
    CHECK(f.cwiseAbs().maxCoeff() <= std::sqrt(2.0 / 64.0) + 1e-15);
  }
  CHECK(a.phases().minCoeff() >= 0.0);
  CHECK(a.phases().maxCoeff() < 2.0 * 3.14159265358979323846);
}

TEST_CASE("RFF inner products approximate the Gaussian kernel") {
  // Sampling error at D=2000 is about 0.02 per pair; the maximum over 1225
  // pairs concentrates near 0.065, so 0.1 is the tight deterministic bound.
  Rng rng(42);
  RowMatrix points(50, 4);
  for (Index i = 0; i < 50; ++i)
    for (Index j = 0; j < 4; ++j) points(i, j) = rng.uniform(-1.0, 1.0);
  const RowMatrix features = RffMap(4, 2000, 1.0, 42).apply_rows(points);
  double worst = 0.0, mean_abs = 0.0;
  for (Index i = 0; i < 50; ++i)
    for (Index j = 0; j < 50; ++j) {
      const double exact = std::exp(-(points.row(i) - points.row(j)).squaredNorm() / 2.0);
      const double diff = std::abs(features.row(i).dot(features.row(j)) - exact);
      worst = std::max(worst, diff);
      mean_abs += diff / 2500.0;
    }
  CHECK(worst <= 0.1);
  CHECK(mean_abs <= 0.03);
}

TEST_CASE("median heuristic") {
  CHECK(median_heuristic(rows({{0}, {2}})) == 2.0);
  CHECK(median_heuristic(rows({{0}, {1}, {2}})) == 1.0);
  CHECK(median_heuristic(rows({{0}, {1}, {3}, {6}})) == doctest::Approx(3.0));
  CHECK_THROWS_AS(median_heuristic(rows({{1, 1}, {1, 1}, {1, 1}})), DimensionError);
  CHECK_THROWS_AS(median_heuristic(rows({{1}})), DimensionError);
}

TEST_CASE("learner_fit recovers linear maps and kills zero targets") {
  Rng rng(12);
  const RowMatrix Z = rng.normal_matrix(60, 4);
  const Matrix M = rng.normal_matrix(3, 4);
  Dataset data{Z, Z * M.transpose()};
  LearnerConfig config;
  config.lambda = 1e-8;
  const Hypothesis h = learner_fit(config, data);
  CHECK((h.linear_model().weights().leftCols(4) - M).cwiseAbs().maxCoeff() <= 1e-6);

  Dataset zeros{Z, RowMatrix::Zero(60, 3)};
  config.lambda = 0.5;
  CHECK(learner_fit(config, zeros).linear_model().weights().cwiseAbs().maxCoeff() == 0.0);

  const std::vector<TrainingPair> single = {{vec({1, 2}), vec({3})}};
  // The unpenalized bias interpolates a single pair for every lambda.
  for (double lambda : {1.0, 1e-2, 1e-4, 1e-8}) {
    config.lambda = lambda;
    CHECK(std::abs(learner_fit(config, single)(vec({1, 2}))(0) - 3.0) <= 1e-12);
  }
}

TEST_CASE("learner_fit is insensitive to pair order") {
  Rng rng(13);
  Dataset data{rng.normal_matrix(40, 3), rng.normal_matrix(40, 2)};
  Dataset reversed{data.inputs.colwise().reverse(), data.targets.colwise().reverse()};
  for (LearnerKind kind : {LearnerKind::linear, LearnerKind::rff}) {
    LearnerConfig config;
    config.kind = kind;
    config.rff_dim = 50;
    config.bandwidth = 1.5;
    config.lambda = 1e-3;
    const Matrix a = learner_fit(config, data).linear_model().weights();
    const Matrix b = learner_fit(config, reversed).linear_model().weights();
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("resolve_learner fills lambda and bandwidth") {
  Rng rng(14);
  const RowMatrix inputs = rng.normal_matrix(30, 3);
  LearnerConfig linear;
  CHECK(resolve_learner(linear, inputs).lambda.value() == default_ridge_lambda(inputs));
  LearnerConfig rff;
  rff.kind = LearnerKind::rff;
  rff.rff_dim = 20;
  const LearnerConfig r = resolve_learner(rff, inputs);
  CHECK(r.bandwidth.value() == median_heuristic(inputs));
  CHECK(r.lambda.has_value());
  rff.bandwidth = 2.0;
  CHECK(resolve_learner(rff, inputs).bandwidth.value() == 2.0);
  CHECK(parse_learner("rff") == LearnerKind::rff);
  CHECK_THROWS_AS(parse_learner("svm"), ConfigError);
}
