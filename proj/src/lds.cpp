#include "psim/lds.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "psim/kernels.hpp"
#include "psim/rng.hpp"

namespace psim {
namespace {

void require_square(const Matrix& m, Index size, const char* name) {
  if (m.rows() != size || m.cols() != size)
    throw DimensionError(std::string(name) + " must be " + std::to_string(size) + "x" +
                         std::to_string(size));
}

void require_psd(const Matrix& m, const char* name) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (!m.allFinite()) throw DataError(std::string(name) + " has non-finite entries");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw DataError(std::string(name) + " is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-9 * scale)
    throw DataError(std::string(name) + " is not positive semidefinite");
}

// A S C^T (C S C^T + R)^{-1}, or zero when S C^T vanishes (noise-free systems).
Matrix gain_for(const LdsModel& model, const Matrix& cov) {
  const Matrix cov_ct = cov * model.C().transpose();
  if (cov_ct.cwiseAbs().maxCoeff() == 0.0) return Matrix::Zero(model.state_dim(), model.obs_dim());
  const Matrix innovation = model.C() * cov_ct + model.R();
  Eigen::LDLT<Matrix> ldlt(innovation);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.rcond() < 1e-14)
    throw SolverError("innovation covariance C S C^T + R is singular");
  return ldlt.solve((model.A() * cov_ct).transpose()).transpose();
}

}  // namespace

LdsModel::LdsModel(Matrix A, Matrix C, Matrix Q, Matrix R, Vector initial_mean, Matrix initial_cov)
    : A_(std::move(A)),
      C_(std::move(C)),
      Q_(std::move(Q)),
      R_(std::move(R)),
      initial_mean_(std::move(initial_mean)),
      initial_cov_(std::move(initial_cov)) {
  const Index m = A_.rows();
  if (m < 1) throw DimensionError("state dimension must be at least 1");
  require_square(A_, m, "A");
  if (C_.cols() != m || C_.rows() < 1) throw DimensionError("C must be n x m with n >= 1");
  require_square(Q_, m, "Q");
  require_square(R_, C_.rows(), "R");
  require_square(initial_cov_, m, "initial covariance");
  if (initial_mean_.size() != m) throw DimensionError("initial mean must have m entries");
  if (!A_.allFinite() || !C_.allFinite() || !initial_mean_.allFinite())
    throw DataError("system matrices contain non-finite entries");
  require_psd(Q_, "Q");
  require_psd(R_, "R");
  require_psd(initial_cov_, "initial covariance");
}

LdsModel LdsModel::with_initial(Vector mean, Matrix cov) const {
  return LdsModel(A_, C_, Q_, R_, std::move(mean), std::move(cov));
}

double LdsModel::spectral_radius() const {
  Eigen::EigenSolver<Matrix> eig(A_, false);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix psd_sqrt(const Matrix& cov) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  const Vector roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();
}

Trajectory simulate(const LdsModel& model, Index length, std::uint64_t seed) {
  if (length < 1) throw DimensionError("simulation length must be at least 1");
  const Matrix init_factor = psd_sqrt(model.initial_cov());
  const Matrix q_factor = psd_sqrt(model.Q());
  const Matrix r_factor = psd_sqrt(model.R());
  Rng rng(seed);
  Vector state = model.initial_mean() + init_factor * rng.normal_vector(model.state_dim());
  RowMatrix obs(length, model.obs_dim());
  for (Index t = 0; t < length; ++t) {
    obs.row(t) = (model.C() * state + r_factor * rng.normal_vector(model.obs_dim())).transpose();
    state = model.A() * state + q_factor * rng.normal_vector(model.state_dim());
  }
  return Trajectory(std::move(obs));
}

Matrix riccati_step(const LdsModel& model, const Matrix& cov) {
  const Matrix& A = model.A();
  const Matrix gain = gain_for(model, cov);
  Matrix next = A * cov * A.transpose() + model.Q() - gain * model.C() * cov * A.transpose();
  return 0.5 * (next + next.transpose());
}

Matrix stationary_covariance(const LdsModel& model, double tol, Index max_iter) {
  Matrix cov = model.Q();
  double residual = 0.0;
  for (Index iter = 0; iter < max_iter; ++iter) {
    Matrix next = riccati_step(model, cov);
    residual = (next - cov).norm();
    cov = std::move(next);
    if (!std::isfinite(residual)) break;
    if (residual <= tol) return cov;
  }
  throw ConvergenceError("Riccati iteration did not converge in " + std::to_string(max_iter) +
                             " iterations",
                         residual);
}

Matrix stationary_gain(const LdsModel& model, const Matrix& cov) {
  require_square(cov, model.state_dim(), "stationary covariance");
  return gain_for(model, cov);
}

Vector kalman_step(const LdsModel& model, const Matrix& gain, const Eigen::Ref<const Vector>& state,
                   const Eigen::Ref<const Vector>& x) {
  if (state.size() != model.state_dim() || x.size() != model.obs_dim())
    throw DimensionError("kalman_step: state or observation size mismatch");
  if (gain.rows() != model.state_dim() || gain.cols() != model.obs_dim())
    throw DimensionError("kalman_step: gain must be m x n");
  return model.A() * state - gain * (model.C() * state - x);
}

Observability observability(const LdsModel& model, Index k) {
  if (k < 1) throw DimensionError("observability needs k >= 1");
  const Index n = model.obs_dim();
  const Index m = model.state_dim();
  Observability out;
  out.matrix.resize(k * n, m);
  Matrix block = model.C();
  for (Index i = 0; i < k; ++i) {
    out.matrix.middleRows(i * n, n) = block;
    block = block * model.A();
  }
  Eigen::JacobiSVD<Matrix> svd(out.matrix);
  const Vector& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  out.rank = 0;
  if (top > 0.0)
    for (Index i = 0; i < sv.size(); ++i)
      if (sv(i) > 1e-10 * top) ++out.rank;
  out.full_rank = out.rank == m;
  out.condition = out.full_rank ? top / sv(m - 1) : std::numeric_limits<double>::infinity();
  return out;
}

Matrix pseudo_inverse(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? 1e-10 * sv(0) : 0.0;
  Vector inv = Vector::Zero(sv.size());
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff && sv(i) > 0.0) inv(i) = 1.0 / sv(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

PredictiveOracle::PredictiveOracle(const LdsModel& model, Index k) : k_(k) {
  const Observability obs = psim::observability(model, k);
  if (!obs.full_rank)
    throw NotObservable("system is not " + std::to_string(k) + "-observable (rank " +
                        std::to_string(obs.rank) + " < " + std::to_string(model.state_dim()) + ")");
  O_ = obs.matrix;
  O_pinv_ = pseudo_inverse(O_);
  cov_ = stationary_covariance(model);
  gain_ = stationary_gain(model, cov_);
  A_tilde_ = O_ * model.A() * O_pinv_;
  C_tilde_ = model.C() * O_pinv_;
  L_tilde_ = O_ * gain_;
  const Index p = O_.rows();
  const Index n = model.obs_dim();
  transition_.resize(p, p + n);
  transition_.leftCols(p) = A_tilde_ - L_tilde_ * C_tilde_;
  transition_.rightCols(n) = L_tilde_;
  initial_ = O_ * model.initial_mean();
}

Vector PredictiveOracle::step(const Eigen::Ref<const Vector>& f, const Eigen::Ref<const Vector>& x) const {
  const Index p = transition_.rows();
  if (f.size() != p || x.size() != transition_.cols() - p)
    throw DimensionError("oracle step: predictive state or observation size mismatch");
  return transition_.leftCols(p) * f + transition_.rightCols(x.size()) * x;
}

RowMatrix PredictiveOracle::rollout(const Trajectory& traj) const {
  const Index steps = usable_steps(traj, k_);
  if (steps < 1) throw DataError("trajectory too short for oracle rollout");
  RowMatrix states(steps + 1, state_dim());
  Vector f = initial_;
  states.row(0) = f.transpose();
  for (Index t = 0; t < steps; ++t) {
    f = step(f, traj.at(t));
    states.row(t + 1) = f.transpose();
  }
  return states;
}

Benchmark make_benchmark(std::uint64_t seed) {
  constexpr Index kStates = 3;
  constexpr Index kObs = 2;
  constexpr Index kWindow = 2;
  constexpr Index kBudget = 1000;
  Rng rng(seed);
  for (Index attempt = 1; attempt <= kBudget; ++attempt) {
    Matrix A = rng.normal_matrix(kStates, kStates);
    Matrix C = rng.normal_matrix(kObs, kStates);
    const Matrix G = rng.normal_matrix(kStates, kStates);
    const Matrix H = rng.normal_matrix(kObs, kObs);

    Eigen::JacobiSVD<Matrix> svd(A);
    if (svd.singularValues().minCoeff() < 1e-3 * svd.singularValues()(0)) continue;
    const double radius = Eigen::EigenSolver<Matrix>(A, false).eigenvalues().cwiseAbs().maxCoeff();
    A *= 0.9 / radius;

    const Matrix Q = G * G.transpose() + 0.1 * Matrix::Identity(kStates, kStates);
    const Matrix R = H * H.transpose() + 0.1 * Matrix::Identity(kObs, kObs);
    LdsModel draft(A, C, Q, R, Vector::Ones(kStates), Matrix::Zero(kStates, kStates));
    const Observability obs = observability(draft, kWindow);
    if (!obs.full_rank || obs.condition > 1e3) continue;

    Matrix cov = stationary_covariance(draft);
    return Benchmark{draft.with_initial(Vector::Ones(kStates), std::move(cov)), kWindow, seed, attempt};
  }
  throw Error("make_benchmark: no admissible system within " + std::to_string(kBudget) + " draws");
}

ErrorReport oracle_filter_error(const LdsModel& model, Index k, std::span<const Trajectory> trajs,
                                Index horizon, Index first_step) {
  if (horizon < 1 || horizon > k)
    throw DimensionError("horizon must lie in [1, k=" + std::to_string(k) + "]");
  if (trajs.empty()) throw DataError("oracle_filter_error needs trajectories");
  const PredictiveOracle oracle(model, k);
  const auto states = kernels::map_trajectories<RowMatrix>(
      kernels::Exec::parallel, static_cast<Index>(trajs.size()),
      [&](Index i) { return oracle.rollout(trajs[static_cast<std::size_t>(i)]); });
  ErrorReport report =
      kernels::error_sums_report(kernels::Exec::parallel, states, trajs, k, horizon, first_step);
  return report;
}

}  // namespace psim
