#include "psim/regression.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "psim/rng.hpp"

namespace psim {

LinearModel::LinearModel(Matrix weights, double lambda, bool intercept)
    : weights_(std::move(weights)), lambda_(lambda), intercept_(intercept) {
  if (intercept_ && weights_.cols() < 1) throw DimensionError("intercept model needs a bias column");
}

Vector LinearModel::predict(const Eigen::Ref<const Vector>& z) const {
  Vector out(output_dim());
  predict_into(z, out);
  return out;
}

void LinearModel::predict_into(const Eigen::Ref<const Vector>& z, Eigen::Ref<Vector> out) const {
  const Index d = input_dim();
  if (z.size() != d)
    throw DimensionError("model expects input of size " + std::to_string(d) + ", got " +
                         std::to_string(z.size()));
  out.noalias() = weights_.leftCols(d) * z;
  if (intercept_) out += weights_.col(d);
}

RowMatrix LinearModel::predict_rows(const RowMatrix& inputs) const {
  const Index d = input_dim();
  if (inputs.cols() != d) throw DimensionError("model input size mismatch");
  RowMatrix out = inputs * weights_.leftCols(d).transpose();
  if (intercept_) out.rowwise() += weights_.col(d).transpose();
  return out;
}

namespace {

Matrix augmented(const RowMatrix& inputs, bool intercept) {
  const Index d = inputs.cols();
  Matrix z(inputs.rows(), intercept ? d + 1 : d);
  z.leftCols(d) = inputs;
  if (intercept) z.col(d).setOnes();
  return z;
}

}  // namespace

LinearModel ridge_fit(const RowMatrix& inputs, const RowMatrix& targets, double lambda,
                      bool fit_intercept) {
  if (inputs.rows() < 1) throw DimensionError("ridge_fit needs at least one sample");
  if (inputs.rows() != targets.rows())
    throw DimensionError("ridge_fit: " + std::to_string(inputs.rows()) + " inputs but " +
                         std::to_string(targets.rows()) + " targets");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DimensionError("ridge lambda must be >= 0");

  const Matrix z = augmented(inputs, fit_intercept);
  const Index cols = z.cols();
  Matrix gram = Matrix::Zero(cols, cols);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(z.transpose());
  gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
  const Index penalized = fit_intercept ? cols - 1 : cols;
  gram.diagonal().head(penalized).array() += lambda;
  const Matrix rhs = z.transpose() * targets;

  Eigen::LLT<Matrix> llt(gram);
  const bool llt_ok = llt.info() == Eigen::Success && (lambda > 0.0 || llt.rcond() > 1e-13);
  Matrix solution;
  if (llt_ok) {
    solution = llt.solve(rhs);
  } else {
    Eigen::ColPivHouseholderQR<Matrix> qr(gram);
    qr.setThreshold(1e-12);
    if (lambda == 0.0 && qr.rank() < cols)
      throw SolverError("ridge normal equations are singular (rank " + std::to_string(qr.rank()) +
                        " < " + std::to_string(cols) + "); use lambda > 0");
    solution = qr.solve(rhs);
  }
  return LinearModel(solution.transpose(), lambda, fit_intercept);
}

double default_ridge_lambda(const RowMatrix& inputs) {
  if (inputs.rows() < 1) throw DimensionError("default lambda needs at least one sample");
  // diag(Z~^T Z~)/N: column mean squares, plus 1 for the bias column.
  const double diag_sum = inputs.array().square().colwise().sum().sum() /
                              static_cast<double>(inputs.rows()) +
                          1.0;
  return 1e-4 * diag_sum / static_cast<double>(inputs.cols() + 1);
}

RffMap::RffMap(Index input_dim, Index feature_dim, double bandwidth, std::uint64_t seed)
    : bandwidth_(bandwidth), seed_(seed) {
  if (input_dim < 1 || feature_dim < 1) throw DimensionError("RFF map needs d >= 1 and D >= 1");
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
    throw DimensionError("RFF bandwidth must be positive");
  Rng rng(seed);
  frequencies_ = rng.normal_matrix(feature_dim, input_dim) / bandwidth;
  phases_.resize(feature_dim);
  for (Index j = 0; j < feature_dim; ++j) phases_(j) = rng.uniform(0.0, 2.0 * std::numbers::pi);
}

RffMap::RffMap(Matrix frequencies, Vector phases)
    : frequencies_(std::move(frequencies)), phases_(std::move(phases)) {
  if (frequencies_.rows() != phases_.size())
    throw DimensionError("RFF phases must match the number of frequencies");
}

std::uint64_t RffMap::digest() const {
  std::uint64_t hash = 14695981039346656037ull;
  for (Index i = 0; i < frequencies_.rows(); ++i)
    for (Index j = 0; j < frequencies_.cols(); ++j) {
      const double v = frequencies_(i, j);
      hash = fnv1a(&v, sizeof v, hash);
    }
  return fnv1a(phases_.data(), sizeof(double) * static_cast<std::size_t>(phases_.size()), hash);
}

Vector RffMap::operator()(const Eigen::Ref<const Vector>& z) const {
  if (z.size() != input_dim())
    throw DimensionError("RFF map expects input of size " + std::to_string(input_dim()));
  const double scale = std::sqrt(2.0 / static_cast<double>(feature_dim()));
  return scale * ((frequencies_ * z + phases_).array().cos()).matrix();
}

RowMatrix RffMap::apply_rows(const RowMatrix& inputs) const {
  if (inputs.cols() != input_dim()) throw DimensionError("RFF map input size mismatch");
  const double scale = std::sqrt(2.0 / static_cast<double>(feature_dim()));
  RowMatrix out = inputs * frequencies_.transpose();
  out.rowwise() += phases_.transpose();
  return scale * out.array().cos().matrix();
}

double median_heuristic(const RowMatrix& samples) {
  const Index total = samples.rows();
  if (total < 2) throw DimensionError("median heuristic needs at least 2 samples");
  const Index used = std::min<Index>(total, 1000);
  std::vector<Index> picks(static_cast<std::size_t>(used));
  for (Index i = 0; i < used; ++i) picks[static_cast<std::size_t>(i)] = i * total / used;

  std::vector<double> distances;
  distances.reserve(static_cast<std::size_t>(used * (used - 1) / 2));
  for (Index a = 0; a < used; ++a)
    for (Index b = a + 1; b < used; ++b)
      distances.push_back((samples.row(picks[a]) - samples.row(picks[b])).norm());

  const std::size_t mid = distances.size() / 2;
  std::nth_element(distances.begin(), distances.begin() + mid, distances.end());
  double median = distances[mid];
  if (distances.size() % 2 == 0) {
    const double lower = *std::max_element(distances.begin(), distances.begin() + mid);
    median = 0.5 * (median + lower);
  }
  if (!(median > 0.0)) throw DimensionError("median heuristic: samples are all identical");
  return median;
}

std::string_view to_string(LearnerKind kind) {
  return kind == LearnerKind::linear ? "linear" : "rff";
}

LearnerKind parse_learner(std::string_view name) {
  if (name == "linear") return LearnerKind::linear;
  if (name == "rff") return LearnerKind::rff;
  throw ConfigError("unknown learner '" + std::string(name) + "'");
}

LearnerConfig resolve_learner(LearnerConfig config, const RowMatrix& inputs) {
  if (config.kind == LearnerKind::linear) {
    if (!config.lambda) config.lambda = default_ridge_lambda(inputs);
    return config;
  }
  if (!config.bandwidth) config.bandwidth = median_heuristic(inputs);
  if (!config.lambda) {
    const RffMap map(inputs.cols(), config.rff_dim, *config.bandwidth, config.seed);
    config.lambda = default_ridge_lambda(map.apply_rows(inputs));
  }
  return config;
}

Hypothesis::Hypothesis(LinearModel model) : model_(std::move(model)) {}

Hypothesis::Hypothesis(RffMap map, LinearModel model) : rff_(std::move(map)), model_(std::move(model)) {
  if (rff_->feature_dim() != model_.input_dim())
    throw DimensionError("RFF feature size does not match the linear model");
}

Vector Hypothesis::operator()(const Eigen::Ref<const Vector>& z) const {
  if (rff_) return model_.predict((*rff_)(z));
  return model_.predict(z);
}

Vector Hypothesis::operator()(const Eigen::Ref<const Vector>& m,
                              const Eigen::Ref<const Vector>& x) const {
  Vector z(m.size() + x.size());
  z << m, x;
  return (*this)(z);
}

RowMatrix Hypothesis::apply_rows(const RowMatrix& inputs) const {
  if (rff_) return model_.predict_rows(rff_->apply_rows(inputs));
  return model_.predict_rows(inputs);
}

Hypothesis learner_fit(const LearnerConfig& config, const Dataset& data) {
  if (data.size() < 1) throw DimensionError("learner_fit needs at least one training pair");
  const LearnerConfig resolved = resolve_learner(config, data.inputs);
  if (resolved.kind == LearnerKind::linear)
    return Hypothesis(ridge_fit(data.inputs, data.targets, *resolved.lambda));
  RffMap map(data.inputs.cols(), resolved.rff_dim, *resolved.bandwidth, resolved.seed);
  LinearModel model = ridge_fit(map.apply_rows(data.inputs), data.targets, *resolved.lambda);
  return Hypothesis(std::move(map), std::move(model));
}

Hypothesis learner_fit(const LearnerConfig& config, std::span<const TrainingPair> pairs) {
  return learner_fit(config, Dataset::from_pairs(pairs));
}

double mean_loss(const Hypothesis& h, const Dataset& data) {
  if (data.size() == 0) return 0.0;
  const RowMatrix predicted = h.apply_rows(data.inputs);
  return (predicted - data.targets).rowwise().squaredNorm().sum() / static_cast<double>(data.size());
}

}  // namespace psim
