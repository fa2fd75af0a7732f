#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "psim/core.hpp"
#include "psim/error_report.hpp"

namespace psim {

/// Linear-Gaussian system
///   s_{t+1} = A s_t + e_s,  e_s ~ N(0, Q)
///   x_t     = C s_t + e_x,  e_x ~ N(0, R)
/// with s_0 ~ N(initial_mean, initial_cov).
class LdsModel {
 public:
  /// Throws DimensionError on inconsistent shapes and DataError when a
  /// covariance is not symmetric positive semidefinite.
  LdsModel(Matrix A, Matrix C, Matrix Q, Matrix R, Vector initial_mean, Matrix initial_cov);

  Index state_dim() const { return A_.rows(); }
  Index obs_dim() const { return C_.rows(); }

  const Matrix& A() const { return A_; }
  const Matrix& C() const { return C_; }
  const Matrix& Q() const { return Q_; }
  const Matrix& R() const { return R_; }
  const Vector& initial_mean() const { return initial_mean_; }
  const Matrix& initial_cov() const { return initial_cov_; }

  LdsModel with_initial(Vector mean, Matrix cov) const;
  double spectral_radius() const;

 private:
  Matrix A_, C_, Q_, R_;
  Vector initial_mean_;
  Matrix initial_cov_;
};

/// Symmetric square root of a PSD matrix (negative eigenvalues clamped).
Matrix psd_sqrt(const Matrix& cov);

/// Draws x_0..x_{length-1}; x_t = C s_t + e_x, so with zero noise x_t = C A^t s_0.
Trajectory simulate(const LdsModel& model, Index length, std::uint64_t seed);

/// Fixed-point iteration of the predictive Riccati map
///   S <- A S A^T + Q - A S C^T (C S C^T + R)^{-1} C S A^T
/// starting from S = Q, until ||S' - S||_F <= tol.
Matrix stationary_covariance(const LdsModel& model, double tol = 1e-12, Index max_iter = 100000);

/// One application of the Riccati map above.
Matrix riccati_step(const LdsModel& model, const Matrix& cov);

/// L = A S C^T (C S C^T + R)^{-1}. Zero when S C^T vanishes.
Matrix stationary_gain(const LdsModel& model, const Matrix& cov);

/// s' = A s - L (C s - x).
Vector kalman_step(const LdsModel& model, const Matrix& gain, const Eigen::Ref<const Vector>& state,
                   const Eigen::Ref<const Vector>& x);

struct Observability {
  Matrix matrix;  ///< [C; CA; ...; CA^{k-1}], kn x m
  Index rank = 0;
  bool full_rank = false;
  double condition = 0.0;  ///< sigma_max / sigma_min, infinite when rank deficient
};

Observability observability(const LdsModel& model, Index k);

/// Moore-Penrose pseudo-inverse, singular values below 1e-10 sigma_max dropped.
Matrix pseudo_inverse(const Matrix& m);

/// Stationary Kalman filter expressed on predictive states f = O s:
///   f' = (A~ - L~ C~) f + L~ x,  A~ = O A O^+, C~ = C O^+, L~ = O L.
class PredictiveOracle {
 public:
  /// Throws NotObservable when O lacks full column rank.
  PredictiveOracle(const LdsModel& model, Index k);

  Index k() const { return k_; }
  Index state_dim() const { return transition_.rows(); }
  const Matrix& observability() const { return O_; }
  const Matrix& pinv() const { return O_pinv_; }
  const Matrix& stationary_cov() const { return cov_; }
  const Matrix& gain() const { return gain_; }
  const Matrix& A_tilde() const { return A_tilde_; }
  const Matrix& C_tilde() const { return C_tilde_; }
  const Matrix& L_tilde() const { return L_tilde_; }
  /// [A~ - L~ C~, L~], kn x (kn + n).
  const Matrix& transition() const { return transition_; }
  /// O s_bar_0.
  const Vector& initial_state() const { return initial_; }

  Vector step(const Eigen::Ref<const Vector>& f, const Eigen::Ref<const Vector>& x) const;
  /// f_hat_0 .. f_hat_{T} for T = L - k.
  RowMatrix rollout(const Trajectory& traj) const;

 private:
  Index k_;
  Matrix O_, O_pinv_, cov_, gain_, A_tilde_, C_tilde_, L_tilde_, transition_;
  Vector initial_;
};

struct Benchmark {
  LdsModel model;
  Index k = 2;
  std::uint64_t seed = 0;
  Index attempts = 0;
};

/// 3-state / 2-observation stable benchmark: A full rank with spectral
/// radius 0.9, Q = GG^T + 0.1 I, R = HH^T + 0.1 I, 2-observable with
/// cond(O) <= 1e3, s_0 ~ N(1, S_stationary).
Benchmark make_benchmark(std::uint64_t seed);

/// Prediction error of the predictive oracle on `trajs`: at each scored step
/// s in [first_step, L-k) compares the i-th block of f_hat_s with x_{s+i}.
ErrorReport oracle_filter_error(const LdsModel& model, Index k, std::span<const Trajectory> trajs,
                                Index horizon, Index first_step = 0);

}  // namespace psim
