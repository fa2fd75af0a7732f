#include "psim/eval.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "psim/kernels.hpp"

namespace psim {

ErrorReport filtering_error(const Filter& filter, std::span<const Trajectory> trajs, Index horizon,
                            const EvalOptions& options) {
  const FeatureMap& phi = filter.phi();
  if (horizon < 1 || horizon > phi.k())
    throw DimensionError("horizon " + std::to_string(horizon) + " must lie in [1, k=" +
                         std::to_string(phi.k()) + "]");
  if (trajs.empty()) throw DataError("filtering_error needs trajectories");
  if (options.first_step < 0) throw DimensionError("first_step must be nonnegative");

  const auto states = kernels::rollout_all(kernels::Exec::parallel, filter, trajs);
  ErrorReport report = kernels::error_sums_report(kernels::Exec::parallel, states, trajs, phi.k(),
                                                  horizon, options.first_step);
  report.trajectory_power = trajectory_power(trajs);
  return options.per_coordinate ? per_coordinate(std::move(report), phi.n()) : report;
}

double error_ratio(double e, double e_oracle) {
  if (!(e > 0.0) || !(e_oracle > 0.0))
    throw DataError("error_ratio needs positive errors, got " + std::to_string(e) + " and " +
                    std::to_string(e_oracle));
  if (e == e_oracle) return 0.0;
  return std::log(e) - std::log(e_oracle);
}

double trajectory_power(std::span<const Trajectory> trajs) {
  if (trajs.empty()) throw DataError("trajectory_power needs trajectories");
  std::vector<double> sums;
  sums.reserve(trajs.size());
  Index steps = 0;
  for (const auto& traj : trajs) {
    sums.push_back(traj.observations().squaredNorm());
    steps += traj.length();
  }
  return pairwise_sum(sums) / static_cast<double>(steps);
}

ErrorReport per_coordinate(ErrorReport report, Index obs_dim) {
  if (report.per_coordinate) return report;
  const auto n = static_cast<double>(obs_dim);
  for (double& e : report.mse) e /= n;
  report.overall /= n;
  report.per_coordinate = true;
  return report;
}

Filter oracle_filter(const PredictiveOracle& oracle, Index obs_dim) {
  const FeatureMap phi(PhiKind::phi1, oracle.k(), obs_dim);
  Hypothesis h(LinearModel(oracle.transition(), 0.0, false));
  return Filter::stationary(std::move(h), oracle.initial_state(), phi, Algorithm::oracle, 0);
}

void write_error_csv(std::ostream& out, std::span<const ErrorTable> tables) {
  bool ratio = !tables.empty();
  for (const auto& t : tables) ratio = ratio && t.oracle.has_value();
  out << "method,horizon,mse,n_samples" << (ratio ? ",log_ratio" : "") << '\n';
  const auto old_precision = out.precision(17);
  for (const auto& t : tables) {
    for (Index i = 0; i < t.report.horizon(); ++i) {
      const auto slot = static_cast<std::size_t>(i);
      out << t.method << ',' << i + 1 << ',' << t.report.mse[slot] << ',' << t.report.counts[slot];
      if (ratio) {
        if (t.oracle->size() <= slot) throw DimensionError("oracle errors shorter than horizon");
        out << ',' << error_ratio(t.report.mse[slot], (*t.oracle)[slot]);
      }
      out << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace psim
