#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "psim/core.hpp"

namespace psim {

/// Affine map y = W [z; 1] (or y = W z without intercept).
class LinearModel {
 public:
  LinearModel(Matrix weights, double lambda, bool intercept);

  Index input_dim() const { return intercept_ ? weights_.cols() - 1 : weights_.cols(); }
  Index output_dim() const { return weights_.rows(); }
  bool intercept() const { return intercept_; }
  double lambda() const { return lambda_; }
  /// p x (d+1) with the bias in the last column when intercept() is set.
  const Matrix& weights() const { return weights_; }

  Vector predict(const Eigen::Ref<const Vector>& z) const;
  void predict_into(const Eigen::Ref<const Vector>& z, Eigen::Ref<Vector> out) const;
  RowMatrix predict_rows(const RowMatrix& inputs) const;

 private:
  Matrix weights_;
  double lambda_;
  bool intercept_;
};

/// Closed-form ridge: minimizes sum ||W z~ - y||^2 + lambda ||W_z||_F^2, with
/// the bias column left unregularized. Cholesky on the normal equations,
/// falling back to a rank-revealing QR; a rank-deficient system with
/// lambda = 0 throws SolverError.
LinearModel ridge_fit(const RowMatrix& inputs, const RowMatrix& targets, double lambda,
                      bool fit_intercept = true);

/// 1e-4 times the mean diagonal of Z~^T Z~ / N.
double default_ridge_lambda(const RowMatrix& inputs);

/// Random Fourier features for the Gaussian kernel exp(-||z-z'||^2 / (2 sigma^2)):
/// psi_j(z) = sqrt(2/D) cos(omega_j . z + b_j), omega_j ~ N(0, sigma^-2 I),
/// b_j ~ U[0, 2 pi). Frequencies are a pure function of (d, D, sigma, seed).
class RffMap {
 public:
  RffMap(Index input_dim, Index feature_dim, double bandwidth, std::uint64_t seed);
  /// Explicit frequencies/phases; bandwidth and seed are not meaningful.
  RffMap(Matrix frequencies, Vector phases);

  Index input_dim() const { return frequencies_.cols(); }
  Index feature_dim() const { return frequencies_.rows(); }
  double bandwidth() const { return bandwidth_; }
  std::uint64_t seed() const { return seed_; }
  const Matrix& frequencies() const { return frequencies_; }
  const Vector& phases() const { return phases_; }
  /// FNV-1a digest over frequencies then phases.
  std::uint64_t digest() const;

  Vector operator()(const Eigen::Ref<const Vector>& z) const;
  RowMatrix apply_rows(const RowMatrix& inputs) const;

 private:
  Matrix frequencies_;  // D x d
  Vector phases_;
  double bandwidth_ = 0.0;
  std::uint64_t seed_ = 0;
};

/// Median pairwise Euclidean distance over at most 1000 evenly strided samples.
double median_heuristic(const RowMatrix& samples);

enum class LearnerKind { linear, rff };
std::string_view to_string(LearnerKind kind);
LearnerKind parse_learner(std::string_view name);

struct LearnerConfig {
  LearnerKind kind = LearnerKind::linear;
  std::optional<double> lambda;     ///< default_ridge_lambda when unset
  Index rff_dim = 1000;
  std::optional<double> bandwidth;  ///< median heuristic when unset
  std::uint64_t seed = 0;
};

/// Fills unset lambda/bandwidth from `inputs` (the first training set), so
/// every later fit shares them.
LearnerConfig resolve_learner(LearnerConfig config, const RowMatrix& inputs);

/// A fitted, immutable filter hypothesis z -> y.
class Hypothesis {
 public:
  explicit Hypothesis(LinearModel model);
  Hypothesis(RffMap map, LinearModel model);

  LearnerKind kind() const { return rff_ ? LearnerKind::rff : LearnerKind::linear; }
  Index input_dim() const { return rff_ ? rff_->input_dim() : model_.input_dim(); }
  Index output_dim() const { return model_.output_dim(); }
  const LinearModel& linear_model() const { return model_; }
  const std::optional<RffMap>& rff_map() const { return rff_; }

  Vector operator()(const Eigen::Ref<const Vector>& z) const;
  /// F(m, x) on the concatenated input [m; x].
  Vector operator()(const Eigen::Ref<const Vector>& m, const Eigen::Ref<const Vector>& x) const;
  RowMatrix apply_rows(const RowMatrix& inputs) const;

 private:
  std::optional<RffMap> rff_;
  LinearModel model_;
};

/// Fits a hypothesis on row-stacked pairs. Unset config fields are resolved
/// from this dataset.
Hypothesis learner_fit(const LearnerConfig& config, const Dataset& data);
Hypothesis learner_fit(const LearnerConfig& config, std::span<const TrainingPair> pairs);

/// Mean squared loss of a hypothesis over a dataset.
double mean_loss(const Hypothesis& h, const Dataset& data);

}  // namespace psim
