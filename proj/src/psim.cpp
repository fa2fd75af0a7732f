#include "psim/psim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>

#include "psim/kernels.hpp"
#include "psim/rng.hpp"

namespace psim {

using kernels::Exec;

void TrainReport::write_csv(std::ostream& out) const {
  out << "iteration,train_loss,val_error,dataset_size\n";
  const auto old_precision = out.precision(17);
  for (const auto& r : records)
    out << r.iteration << ',' << r.train_loss << ',' << r.val_error << ',' << r.dataset_size << '\n';
  out.precision(old_precision);
}

TrainResult forward_train(std::span<const Trajectory> trajs, const LearnerConfig& learner,
                          const FeatureMap& phi, Index steps) {
  if (trajs.empty()) throw DataError("forward_train needs at least one trajectory");
  if (steps < 1) throw DataError("forward_train needs at least one step");
  if (common_dim(trajs) != phi.n()) throw DimensionError("trajectory dimension does not match phi");
  for (std::size_t i = 0; i < trajs.size(); ++i)
    if (trajs[i].length() < steps + phi.k())
      throw DataError("trajectory " + std::to_string(i) + " has length " +
                      std::to_string(trajs[i].length()) + " < T + k = " +
                      std::to_string(steps + phi.k()));

  const Vector initial = initial_state(trajs, phi);
  RowMatrix states = initial.transpose().replicate(static_cast<Index>(trajs.size()), 1);

  TrainReport report;
  report.algorithm = Algorithm::forward;
  std::vector<Hypothesis> hypotheses;
  hypotheses.reserve(static_cast<std::size_t>(steps));
  LearnerConfig resolved = learner;

  for (Index t = 0; t < steps; ++t) {
    const Dataset data = kernels::step_pairs(Exec::parallel, states, trajs, t, phi);
    if (t == 0) resolved = resolve_learner(learner, data.inputs);
    Hypothesis h = learner_fit(resolved, data);
    states = kernels::apply_rowwise(Exec::parallel, h, data.inputs);
    if (!states.allFinite()) throw DivergedRollout(t + 1);

    IterationRecord record;
    record.iteration = t + 1;
    record.train_loss =
        (states - data.targets).rowwise().squaredNorm().sum() / static_cast<double>(data.size());
    record.val_error = std::numeric_limits<double>::quiet_NaN();
    record.dataset_size = data.size();
    report.records.push_back(record);
    hypotheses.push_back(std::move(h));
  }
  report.selected_iteration = steps;
  report.learner = resolved;
  return {Filter::non_stationary(std::move(hypotheses), initial, phi), std::move(report)};
}

TrainResult dagger_train(std::span<const Trajectory> train, std::span<const Trajectory> validation,
                         const LearnerConfig& learner, const FeatureMap& phi,
                         const DaggerOptions& options) {
  if (train.empty()) throw DataError("dagger_train needs training trajectories");
  if (validation.empty()) throw DataError("dagger_train needs at least one validation trajectory");
  if (options.iterations < 1) throw DataError("dagger_train needs at least one iteration");
  if (common_dim(train) != phi.n() || common_dim(validation) != phi.n())
    throw DimensionError("trajectory dimension does not match phi");
  for (std::size_t i = 0; i < train.size(); ++i)
    if (usable_steps(train[i], phi.k()) < 1)
      throw DataError("training trajectory " + std::to_string(i) + " is shorter than k + 1");

  const Vector initial = initial_state(train, phi);

  // Warm start: every step sees the mean initial state.
  const Dataset warm = kernels::constant_state_pairs(Exec::parallel, initial, train, phi);
  const LearnerConfig resolved = resolve_learner(learner, warm.inputs);
  Filter current = Filter::stationary(learner_fit(resolved, warm), initial, phi, Algorithm::dagger, 0);

  TrainReport report;
  report.algorithm = Algorithm::dagger;
  report.learner = resolved;
  Dataset aggregate;
  std::optional<Filter> best;
  double best_error = std::numeric_limits<double>::infinity();

  for (Index n = 1; n <= options.iterations; ++n) {
    kernels::PairCollection fresh =
        kernels::collect_pairs(Exec::parallel, current, train, options.divergence_factor);
    aggregate.append(fresh.data);
    if (aggregate.size() == 0) throw DivergedRollout(0);

    Filter next = Filter::stationary(learner_fit(resolved, aggregate), initial, phi,
                                     Algorithm::dagger, n);
    IterationRecord record;
    record.iteration = n;
    record.train_loss = mean_loss(next.at(0), aggregate);
    record.dataset_size = aggregate.size();
    record.diverged = fresh.diverged;
    try {
      record.val_error = filtering_objective(next, validation);
    } catch (const DivergedRollout&) {
      record.val_error = std::numeric_limits<double>::infinity();
    }
    if (!std::isfinite(record.val_error)) record.val_error = std::numeric_limits<double>::infinity();
    report.records.push_back(record);

    if (record.val_error < best_error || !best) {
      best_error = record.val_error;
      best = next;
      report.selected_iteration = n;
    }
    current = std::move(next);
  }
  return {std::move(*best), std::move(report)};
}

double filtering_objective(const Filter& filter, std::span<const Trajectory> trajs) {
  if (trajs.empty()) throw DataError("filtering_objective needs trajectories");
  const auto sums = kernels::objective_sums(Exec::parallel, filter, trajs);
  Index pairs = 0;
  for (const auto& traj : trajs) pairs += usable_steps(traj, filter.phi().k());
  return pairwise_sum(sums) / static_cast<double>(pairs);
}

std::vector<Index> seeded_permutation(Index count, std::uint64_t seed) {
  std::vector<Index> order(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) order[static_cast<std::size_t>(i)] = i;
  Rng rng(seed);
  for (Index i = count - 1; i > 0; --i) {
    const auto j = static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  return order;
}

Split split_validation(std::span<const Trajectory> trajs, double fraction, std::uint64_t seed) {
  const auto total = static_cast<Index>(trajs.size());
  if (total < 2) throw DataError("need at least 2 trajectories to hold out a validation set");
  if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("validation fraction must lie in (0, 1)");
  const Index held = std::clamp<Index>(static_cast<Index>(std::llround(fraction * static_cast<double>(total))),
                                       1, total - 1);
  const auto order = seeded_permutation(total, seed);
  Split split;
  for (Index i = 0; i < total; ++i) {
    const auto& traj = trajs[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    (i < held ? split.validation : split.train).push_back(traj);
  }
  return split;
}

}  // namespace psim
