#pragma once

#include <optional>
#include <span>

#include "psim/core.hpp"
#include "psim/error_report.hpp"
#include "psim/regression.hpp"

namespace psim {

/// AR-k baseline: ridge map from the last `history` true observations
/// [x_{t-h+1}; ...; x_t] to phi(f_{t+1}). It never consumes its own
/// predictions.
class ArModel {
 public:
  ArModel(Index history, FeatureMap phi, LinearModel model);

  Index history() const { return history_; }
  const FeatureMap& phi() const { return phi_; }
  const LinearModel& model() const { return model_; }

  /// Predicted phi(f_s) from x_{s-h}..x_{s-1}; requires s >= history.
  Vector predict(const Trajectory& traj, Index s) const;

 private:
  Index history_;
  FeatureMap phi_;
  LinearModel model_;
};

/// Fits on every (history, future) pair with h <= t+1 and t + k < L.
/// `lambda` defaults to default_ridge_lambda of the stacked histories.
ArModel ar_train(std::span<const Trajectory> trajs, Index history, const FeatureMap& phi,
                 std::optional<double> lambda = std::nullopt);

/// Scores AR predictions on states s in [history, L-k): the first `history`
/// states of each trajectory have no full history and are reported as
/// skipped_steps.
ErrorReport ar_predict_errors(const ArModel& model, std::span<const Trajectory> trajs,
                              Index horizon);

/// Stacked histories and targets used by ar_train (exposed for tests).
Dataset ar_pairs(std::span<const Trajectory> trajs, Index history, const FeatureMap& phi);

}  // namespace psim
