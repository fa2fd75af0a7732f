#include "psim/core.hpp"

#include <cmath>
#include <string>

namespace psim {

Trajectory::Trajectory(RowMatrix observations) : obs_(std::move(observations)) {
  if (obs_.rows() < 1) throw DataError("trajectory has no observations");
  if (obs_.cols() < 1) throw DataError("observation dimension must be at least 1");
  if (!obs_.allFinite()) throw DataError("trajectory contains non-finite values");
}

Trajectory Trajectory::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw DataError("trajectory has no observations");
  const auto n = static_cast<Index>(rows.front().size());
  RowMatrix obs(static_cast<Index>(rows.size()), n);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    if (static_cast<Index>(rows[t].size()) != n)
      throw DataError("observation " + std::to_string(t) + " has dimension " +
                      std::to_string(rows[t].size()) + ", expected " + std::to_string(n));
    for (Index j = 0; j < n; ++j) obs(static_cast<Index>(t), j) = rows[t][j];
  }
  return Trajectory(std::move(obs));
}

Index common_dim(std::span<const Trajectory> trajs) {
  if (trajs.empty()) throw DataError("empty trajectory list");
  const Index n = trajs.front().dim();
  for (const auto& traj : trajs)
    if (traj.dim() != n) throw DimensionError("trajectories disagree on observation dimension");
  return n;
}

FutureWindow future_window(const Trajectory& traj, Index t, Index k) {
  if (k < 1 || t < 0 || t + k > traj.length()) throw WindowUnavailable(t, k, traj.length());
  return FutureWindow{traj.flat(t, k), k, traj.dim(), t};
}

std::string_view to_string(PhiKind kind) {
  return kind == PhiKind::phi1 ? "phi1" : "phi2";
}

PhiKind parse_phi(std::string_view name) {
  if (name == "phi1") return PhiKind::phi1;
  if (name == "phi2") return PhiKind::phi2;
  throw ConfigError("unknown feature map '" + std::string(name) + "'");
}

FeatureMap::FeatureMap(PhiKind kind, Index k, Index n) : kind_(kind), k_(k), n_(n) {
  if (k < 1 || n < 1) throw DimensionError("feature map needs k >= 1 and n >= 1");
}

Vector FeatureMap::operator()(const FutureWindow& f) const {
  if (f.k != k_ || f.n != n_ || f.values.size() != k_ * n_)
    throw DimensionError("window shape does not match feature map");
  return apply_flat(f.values);
}

Vector FeatureMap::apply_flat(const Eigen::Ref<const Vector>& window) const {
  const Index q = first_moment_dim();
  if (window.size() != q) throw DimensionError("window length does not match feature map");
  Vector out(dim());
  out.head(q) = window;
  if (kind_ == PhiKind::phi2) out.tail(q) = window.array().square();
  return out;
}

Vector FeatureMap::at(const Trajectory& traj, Index t) const {
  Vector out(dim());
  write(traj, t, out);
  return out;
}

void FeatureMap::write(const Trajectory& traj, Index t, Eigen::Ref<Vector> out) const {
  if (traj.dim() != n_) throw DimensionError("trajectory dimension does not match feature map");
  if (t < 0 || t + k_ > traj.length()) throw WindowUnavailable(t, k_, traj.length());
  const Index q = first_moment_dim();
  const auto window = traj.flat(t, k_);
  out.head(q) = window;
  if (kind_ == PhiKind::phi2) out.tail(q) = window.array().square();
}

Vector initial_state(std::span<const Trajectory> trajs, const FeatureMap& phi) {
  if (trajs.empty()) throw DataError("initial_state needs at least one trajectory");
  Vector sum = Vector::Zero(phi.dim());
  Vector scratch(phi.dim());
  for (const auto& traj : trajs) {
    if (traj.length() < phi.k())
      throw DataError("trajectory of length " + std::to_string(traj.length()) +
                      " is shorter than the window k=" + std::to_string(phi.k()));
    phi.write(traj, 0, scratch);
    sum += scratch;
  }
  return sum / static_cast<double>(trajs.size());
}

double squared_distance(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
  if (a.size() != b.size()) throw DimensionError("squared_distance: size mismatch");
  return (a - b).squaredNorm();
}

double loss(const Eigen::Ref<const Vector>& m, const FutureWindow& f, const FeatureMap& phi) {
  const Vector target = phi(f);
  if (m.size() != target.size()) throw DimensionError("predictive state does not match feature map");
  return squared_distance(m, target);
}

Vector extract_prediction(const Eigen::Ref<const Vector>& m, Index i, const FeatureMap& phi) {
  if (m.size() != phi.dim()) throw DimensionError("predictive state does not match feature map");
  if (i < 0 || i >= phi.k())
    throw DimensionError("prediction offset " + std::to_string(i) + " outside [0, " +
                         std::to_string(phi.k()) + ")");
  return m.segment(i * phi.n(), phi.n());
}

Dataset Dataset::from_pairs(std::span<const TrainingPair> pairs) {
  if (pairs.empty()) return {};
  const Index d = pairs.front().z.size();
  const Index p = pairs.front().target.size();
  Dataset out{RowMatrix(static_cast<Index>(pairs.size()), d),
              RowMatrix(static_cast<Index>(pairs.size()), p)};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].z.size() != d || pairs[i].target.size() != p)
      throw DimensionError("training pairs have inconsistent dimensions");
    out.inputs.row(static_cast<Index>(i)) = pairs[i].z.transpose();
    out.targets.row(static_cast<Index>(i)) = pairs[i].target.transpose();
  }
  return out;
}

void Dataset::append(const Dataset& other) {
  if (other.size() == 0) return;
  if (size() == 0) {
    *this = other;
    return;
  }
  if (other.inputs.cols() != inputs.cols() || other.targets.cols() != targets.cols())
    throw DimensionError("cannot aggregate datasets of different shapes");
  const Index old = size();
  inputs.conservativeResize(old + other.size(), Eigen::NoChange);
  targets.conservativeResize(old + other.size(), Eigen::NoChange);
  inputs.bottomRows(other.size()) = other.inputs;
  targets.bottomRows(other.size()) = other.targets;
}

}  // namespace psim
