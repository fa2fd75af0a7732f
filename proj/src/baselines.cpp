#include "psim/baselines.hpp"

#include <string>

#include "psim/kernels.hpp"

namespace psim {

using kernels::Exec;

ArModel::ArModel(Index history, FeatureMap phi, LinearModel model)
    : history_(history), phi_(phi), model_(std::move(model)) {
  if (history_ < 1) throw DimensionError("AR history must be at least 1");
  if (model_.input_dim() != history_ * phi_.n() || model_.output_dim() != phi_.dim())
    throw DimensionError("AR model shape does not match history and feature map");
}

Vector ArModel::predict(const Trajectory& traj, Index s) const {
  if (s < history_ || s > traj.length())
    throw DimensionError("AR prediction at step " + std::to_string(s) + " needs " +
                         std::to_string(history_) + " past observations");
  return model_.predict(traj.flat(s - history_, history_));
}

Dataset ar_pairs(std::span<const Trajectory> trajs, Index history, const FeatureMap& phi) {
  if (history < 1) throw DimensionError("AR history must be at least 1");
  if (trajs.empty()) throw DataError("ar_train needs trajectories");
  if (common_dim(trajs) != phi.n()) throw DimensionError("trajectory dimension does not match phi");
  // Targets phi(f_s) for s in [history, L-k].
  std::vector<Index> offsets(trajs.size() + 1, 0);
  for (std::size_t i = 0; i < trajs.size(); ++i)
    offsets[i + 1] = offsets[i] + std::max<Index>(0, trajs[i].length() - phi.k() - history + 1);
  if (offsets.back() == 0)
    throw DataError("no AR training pairs: trajectories need length >= history + k = " +
                    std::to_string(history + phi.k()));

  Dataset data{RowMatrix(offsets.back(), history * phi.n()), RowMatrix(offsets.back(), phi.dim())};
  kernels::map_trajectories<bool>(Exec::parallel, static_cast<Index>(trajs.size()), [&](Index i) {
    const auto& traj = trajs[static_cast<std::size_t>(i)];
    Index row = offsets[static_cast<std::size_t>(i)];
    for (Index s = history; s + phi.k() <= traj.length(); ++s, ++row) {
      data.inputs.row(row) = traj.flat(s - history, history).transpose();
      Eigen::Map<Vector> target(data.targets.row(row).data(), phi.dim());
      phi.write(traj, s, target);
    }
    return true;
  });
  return data;
}

ArModel ar_train(std::span<const Trajectory> trajs, Index history, const FeatureMap& phi,
                 std::optional<double> lambda) {
  const Dataset data = ar_pairs(trajs, history, phi);
  const double ridge = lambda ? *lambda : default_ridge_lambda(data.inputs);
  return ArModel(history, phi, ridge_fit(data.inputs, data.targets, ridge));
}

ErrorReport ar_predict_errors(const ArModel& model, std::span<const Trajectory> trajs,
                              Index horizon) {
  const FeatureMap& phi = model.phi();
  if (horizon < 1 || horizon > phi.k())
    throw DimensionError("horizon must lie in [1, k=" + std::to_string(phi.k()) + "]");
  if (trajs.empty()) throw DataError("ar_predict_errors needs trajectories");
  if (common_dim(trajs) != phi.n()) throw DimensionError("trajectory dimension does not match phi");

  // Prediction rows aligned with predictive-state indices; warm-up rows stay unused.
  const auto predictions = kernels::map_trajectories<RowMatrix>(
      Exec::parallel, static_cast<Index>(trajs.size()), [&](Index i) {
        const auto& traj = trajs[static_cast<std::size_t>(i)];
        const Index steps = std::max<Index>(0, usable_steps(traj, phi.k()));
        RowMatrix rows = RowMatrix::Zero(steps, phi.dim());
        for (Index s = model.history(); s < steps; ++s) rows.row(s) = model.predict(traj, s).transpose();
        return rows;
      });
  return kernels::error_sums_report(Exec::parallel, predictions, trajs, phi.k(), horizon,
                                    model.history());
}

}  // namespace psim
