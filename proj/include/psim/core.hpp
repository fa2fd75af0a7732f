#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "psim/error.hpp"
#include "psim/linalg.hpp"

namespace psim {

/// An ordered sequence of fixed-dimension observations x_0..x_{L-1}.
///
/// Time indices throughout the library are 0-based. Observations are stored
/// time-major, so the k rows starting at t form the flat window f_t without
/// copying.
class Trajectory {
 public:
  /// Throws DataError on an empty matrix, zero-width rows, or non-finite entries.
  explicit Trajectory(RowMatrix observations);
  static Trajectory from_rows(const std::vector<std::vector<double>>& rows);

  Index length() const { return obs_.rows(); }
  Index dim() const { return obs_.cols(); }

  /// Observation x_t.
  Eigen::Map<const Vector> at(Index t) const {
    return Eigen::Map<const Vector>(obs_.row(t).data(), obs_.cols());
  }
  /// `count` consecutive observations starting at t, flattened in time order.
  Eigen::Map<const Vector> flat(Index t, Index count) const {
    return Eigen::Map<const Vector>(obs_.row(t).data(), count * obs_.cols());
  }

  const RowMatrix& observations() const { return obs_; }

 private:
  RowMatrix obs_;
};

/// Number of training steps a trajectory offers for window length k: the
/// target f_{t+1} needs observations through t+k, so T = L - k.
inline Index usable_steps(const Trajectory& traj, Index k) { return traj.length() - k; }

/// Throws DimensionError if the trajectories do not share one observation dimension.
Index common_dim(std::span<const Trajectory> trajs);

struct FutureWindow {
  Vector values;  ///< k*n entries, x_t first
  Index k = 0;
  Index n = 0;
  Index origin = 0;
};

/// Observations t..t+k-1. Throws WindowUnavailable past the end.
FutureWindow future_window(const Trajectory& traj, Index t, Index k);

enum class PhiKind { phi1, phi2 };

std::string_view to_string(PhiKind kind);
PhiKind parse_phi(std::string_view name);

/// Feature map over a k-step window of n-dimensional observations.
/// phi1 stacks the window; phi2 appends the elementwise squares.
class FeatureMap {
 public:
  FeatureMap(PhiKind kind, Index k, Index n);

  PhiKind kind() const { return kind_; }
  Index k() const { return k_; }
  Index n() const { return n_; }
  /// Length of the stacked first-moment block, k*n.
  Index first_moment_dim() const { return k_ * n_; }
  /// Output dimension p.
  Index dim() const { return kind_ == PhiKind::phi1 ? k_ * n_ : 2 * k_ * n_; }

  Vector operator()(const FutureWindow& f) const;
  /// phi applied to the raw flat window, without the FutureWindow wrapper.
  Vector apply_flat(const Eigen::Ref<const Vector>& window) const;
  /// phi(f_t) for trajectory `traj`.
  Vector at(const Trajectory& traj, Index t) const;
  /// Writes phi(f_t) into `out` (length dim()).
  void write(const Trajectory& traj, Index t, Eigen::Ref<Vector> out) const;

  bool operator==(const FeatureMap&) const = default;

 private:
  PhiKind kind_;
  Index k_;
  Index n_;
};

inline Vector apply_feature_map(const FeatureMap& phi, const FutureWindow& f) { return phi(f); }

/// Mean over trajectories of phi(f_0).
Vector initial_state(std::span<const Trajectory> trajs, const FeatureMap& phi);

/// ||m - phi(f)||^2.
double loss(const Eigen::Ref<const Vector>& m, const FutureWindow& f, const FeatureMap& phi);
double squared_distance(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b);

/// Predicted observation x_{t+i} read from the first-moment block of m.
Vector extract_prediction(const Eigen::Ref<const Vector>& m, Index i, const FeatureMap& phi);

/// One supervised example: z = [m; x], target = phi(f_{t+1}).
struct TrainingPair {
  Vector z;
  Vector target;
};

/// Row-stacked training pairs.
struct Dataset {
  RowMatrix inputs;
  RowMatrix targets;

  Index size() const { return inputs.rows(); }
  static Dataset from_pairs(std::span<const TrainingPair> pairs);
  void append(const Dataset& other);
};

}  // namespace psim
