#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "psim/core.hpp"
#include "psim/filter.hpp"
#include "psim/regression.hpp"

namespace psim {

struct IterationRecord {
  Index iteration = 0;       ///< 1-based DAgger iteration or forward-training step
  double train_loss = 0.0;   ///< mean loss of the fitted hypothesis on its training set
  double val_error = 0.0;    ///< validation objective; NaN when not evaluated
  Index dataset_size = 0;    ///< pairs the hypothesis was fit on
  Index diverged = 0;        ///< trajectories dropped from this iteration's collection
};

struct TrainReport {
  Algorithm algorithm = Algorithm::dagger;
  std::vector<IterationRecord> records;
  Index selected_iteration = 0;  ///< 1-based; 0 when no selection took place
  LearnerConfig learner;         ///< with lambda/bandwidth resolved

  /// CSV with header iteration,train_loss,val_error,dataset_size.
  void write_csv(std::ostream& out) const;
};

struct TrainResult {
  Filter filter;
  TrainReport report;
};

/// Forward training: one hypothesis per step t = 0..steps-1, each fit on the
/// states produced by rolling out its predecessors. Every trajectory must
/// hold at least steps + k observations.
TrainResult forward_train(std::span<const Trajectory> trajs, const LearnerConfig& learner,
                          const FeatureMap& phi, Index steps);

struct DaggerOptions {
  Index iterations = 10;
  /// Rollouts whose state norm exceeds this multiple of max(||m_0||, 1) are
  /// dropped from collection.
  double divergence_factor = 1e6;
};

/// Dataset aggregation for a stationary filter. F_0 is fit with the initial
/// state held fixed at every step; iteration n rolls F_{n-1} over the
/// training trajectories, appends the visited pairs, and refits from
/// scratch. Returns the iterate with the lowest validation objective
/// (earliest on ties).
TrainResult dagger_train(std::span<const Trajectory> train, std::span<const Trajectory> validation,
                         const LearnerConfig& learner, const FeatureMap& phi,
                         const DaggerOptions& options = {});

/// Mean over trajectories and steps of ||F(m_t, x_t) - phi(f_{t+1})||^2
/// along the filter's own rollout.
double filtering_objective(const Filter& filter, std::span<const Trajectory> trajs);

struct Split {
  std::vector<Trajectory> train;
  std::vector<Trajectory> validation;
};

/// Seeded shuffle, then round(fraction * M) trajectories (at least 1) held out.
Split split_validation(std::span<const Trajectory> trajs, double fraction, std::uint64_t seed);

/// Seeded permutation of [0, count).
std::vector<Index> seeded_permutation(Index count, std::uint64_t seed);

}  // namespace psim
