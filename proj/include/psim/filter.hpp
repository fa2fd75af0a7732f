#pragma once

#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "psim/core.hpp"
#include "psim/regression.hpp"

namespace psim {

enum class Algorithm { forward, dagger, oracle };
std::string_view to_string(Algorithm algo);
Algorithm parse_algorithm(std::string_view name);

/// A learned predictive-state filter m_{t+1} = F_t(m_t, x_t).
///
/// Stationary filters hold a single hypothesis applied at every step;
/// non-stationary filters (forward training) hold one hypothesis per step
/// and are only defined for the steps they were trained on.
class Filter {
 public:
  static Filter stationary(Hypothesis hypothesis, Vector initial_state, FeatureMap phi,
                           Algorithm algorithm = Algorithm::dagger, Index selected_iteration = 0);
  static Filter non_stationary(std::vector<Hypothesis> hypotheses, Vector initial_state,
                               FeatureMap phi);

  bool is_stationary() const { return stationary_; }
  /// Number of steps this filter can propagate; unbounded when stationary.
  Index max_steps() const {
    return stationary_ ? std::numeric_limits<Index>::max()
                       : static_cast<Index>(hypotheses_.size());
  }
  const Hypothesis& at(Index t) const;
  const std::vector<Hypothesis>& hypotheses() const { return hypotheses_; }
  const Vector& initial_state() const { return initial_; }
  const FeatureMap& phi() const { return phi_; }
  Algorithm algorithm() const { return algorithm_; }
  Index selected_iteration() const { return selected_iteration_; }

  /// F_t(m, x).
  Vector step(Index t, const Eigen::Ref<const Vector>& m, const Eigen::Ref<const Vector>& x) const;

 private:
  Filter(std::vector<Hypothesis> hypotheses, Vector initial, FeatureMap phi, bool stationary,
         Algorithm algorithm, Index selected);

  std::vector<Hypothesis> hypotheses_;
  Vector initial_;
  FeatureMap phi_;
  bool stationary_;
  Algorithm algorithm_;
  Index selected_iteration_;
};

/// Predictive states m_0..m_T with T = L - k, one row per state.
/// Throws DataError for trajectories shorter than k+1 and DivergedRollout
/// when a state becomes non-finite.
RowMatrix rollout(const Filter& filter, const Trajectory& traj);

struct RolloutResult {
  RowMatrix states;
  std::optional<Index> diverged_at;  ///< set when the rollout was aborted
};

/// Like rollout(), but reports divergence (non-finite state, or norm above
/// `divergence_factor` times max(||m_0||, 1)) instead of throwing.
RolloutResult try_rollout(const Filter& filter, const Trajectory& traj,
                          double divergence_factor = std::numeric_limits<double>::infinity());

}  // namespace psim
