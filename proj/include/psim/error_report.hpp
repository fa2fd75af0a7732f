#pragma once

#include <span>
#include <vector>

#include "psim/linalg.hpp"

namespace psim {

/// Squared prediction error per look-ahead horizon.
struct ErrorReport {
  std::vector<double> mse;      ///< entry i is horizon i+1
  std::vector<Index> counts;    ///< comparisons behind each entry
  double overall = 0.0;         ///< count-weighted mean over horizons
  Index trajectories = 0;
  Index steps = 0;              ///< scored predictive states
  Index skipped_steps = 0;      ///< warm-up states excluded from scoring
  double trajectory_power = 0.0;
  bool per_coordinate = false;  ///< mse divided by the observation dimension

  Index horizon() const { return static_cast<Index>(mse.size()); }
};

/// Pairwise (cascade) summation in index order.
double pairwise_sum(std::span<const double> values);

/// Reduces per-trajectory error sums (rows = trajectories, cols = horizons)
/// in trajectory order. `scored` holds the number of scored states per
/// trajectory; every horizon contributes one comparison per scored state.
ErrorReport summarize_errors(const RowMatrix& sums, std::span<const Index> scored,
                             Index skipped_steps);

/// Accumulates sum_s ||x_hat_{s,i} - x_{s+i}||^2 for s in [first_step, stop),
/// reading x_hat_{s,i} from columns [i n, (i+1) n) of row s of `states`.
/// Returns the number of scored states.
Index accumulate_errors(const RowMatrix& states, const RowMatrix& observations, Index first_step,
                        Index stop, Index horizon, Eigen::Ref<Eigen::RowVectorXd> sums);

}  // namespace psim
