#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "psim/core.hpp"
#include "psim/error_report.hpp"
#include "psim/filter.hpp"
#include "psim/lds.hpp"

namespace psim {

struct EvalOptions {
  Index first_step = 0;         ///< states before this index are excluded
  bool per_coordinate = false;  ///< divide errors by the observation dimension
};

/// Rolls `filter` over every trajectory and compares block i of m_s with
/// x_{s+i} for s in [first_step, L-k) and i < horizon. Requires
/// 1 <= horizon <= k.
ErrorReport filtering_error(const Filter& filter, std::span<const Trajectory> trajs, Index horizon,
                            const EvalOptions& options = {});

/// Natural log of e / e_F.
double error_ratio(double e, double e_oracle);

/// Mean over all (trajectory, step) of ||x_t||^2.
double trajectory_power(std::span<const Trajectory> trajs);

/// Divides every mse entry by the observation dimension.
ErrorReport per_coordinate(ErrorReport report, Index obs_dim);

/// The predictive oracle as a stationary phi1 filter with a bias-free
/// linear hypothesis, so it can be saved and scored like a learned filter.
Filter oracle_filter(const PredictiveOracle& oracle, Index obs_dim);

/// One labelled row block of the error CSV.
struct ErrorTable {
  std::string method;
  ErrorReport report;
  /// e_F per horizon; when set a log_ratio column is emitted.
  std::optional<std::vector<double>> oracle;
};

/// Header method,horizon,mse,n_samples[,log_ratio]; one row per horizon.
void write_error_csv(std::ostream& out, std::span<const ErrorTable> tables);

}  // namespace psim
