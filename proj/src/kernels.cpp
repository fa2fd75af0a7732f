#include "psim/kernels.hpp"

#include "psim/rng.hpp"

namespace psim::kernels {

std::vector<Trajectory> simulate_many(Exec exec, const LdsModel& model, Index count, Index length,
                                      std::uint64_t seed) {
  return map_trajectories<Trajectory>(exec, count, [&](Index i) {
    return simulate(model, length, derive_seed(seed, static_cast<std::uint64_t>(i)));
  });
}

std::vector<RowMatrix> rollout_all(Exec exec, const Filter& filter,
                                   std::span<const Trajectory> trajs) {
  return map_trajectories<RowMatrix>(exec, static_cast<Index>(trajs.size()), [&](Index i) {
    return rollout(filter, trajs[static_cast<std::size_t>(i)]);
  });
}

std::vector<RolloutResult> try_rollout_all(Exec exec, const Filter& filter,
                                           std::span<const Trajectory> trajs,
                                           double divergence_factor) {
  return map_trajectories<RolloutResult>(exec, static_cast<Index>(trajs.size()), [&](Index i) {
    return try_rollout(filter, trajs[static_cast<std::size_t>(i)], divergence_factor);
  });
}

namespace {

// Writes the T pairs of one trajectory into rows [offset, offset + T).
void write_pairs(const RowMatrix& states, bool constant_state, const Trajectory& traj,
                 const FeatureMap& phi, Index offset, Dataset& out) {
  const Index p = phi.dim();
  const Index n = traj.dim();
  const Index steps = usable_steps(traj, phi.k());
  for (Index t = 0; t < steps; ++t) {
    auto input = out.inputs.row(offset + t);
    input.head(p) = states.row(constant_state ? 0 : t);
    input.tail(n) = traj.at(t).transpose();
    Eigen::Map<Vector> target(out.targets.row(offset + t).data(), p);
    phi.write(traj, t + 1, target);
  }
}

Dataset allocate(Index rows, const FeatureMap& phi) {
  return Dataset{RowMatrix(rows, phi.dim() + phi.n()), RowMatrix(rows, phi.dim())};
}

std::vector<Index> step_offsets(std::span<const Trajectory> trajs, const FeatureMap& phi,
                                const std::vector<bool>* skip) {
  std::vector<Index> offsets(trajs.size() + 1, 0);
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    const bool skipped = skip && (*skip)[i];
    offsets[i + 1] = offsets[i] + (skipped ? 0 : std::max<Index>(0, usable_steps(trajs[i], phi.k())));
  }
  return offsets;
}

}  // namespace

PairCollection collect_pairs(Exec exec, const Filter& filter, std::span<const Trajectory> trajs,
                             double divergence_factor) {
  const auto rollouts = try_rollout_all(exec, filter, trajs, divergence_factor);
  std::vector<bool> skip(trajs.size());
  PairCollection out;
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    skip[i] = rollouts[i].diverged_at.has_value();
    if (skip[i]) ++out.diverged;
  }
  const auto offsets = step_offsets(trajs, filter.phi(), &skip);
  out.data = allocate(offsets.back(), filter.phi());
  map_trajectories<bool>(exec, static_cast<Index>(trajs.size()), [&](Index i) {
    const auto slot = static_cast<std::size_t>(i);
    if (!skip[slot])
      write_pairs(rollouts[slot].states, false, trajs[slot], filter.phi(), offsets[slot], out.data);
    return true;
  });
  return out;
}

Dataset step_pairs(Exec exec, const RowMatrix& states, std::span<const Trajectory> trajs, Index t,
                   const FeatureMap& phi) {
  if (states.rows() != static_cast<Index>(trajs.size()) || states.cols() != phi.dim())
    throw DimensionError("step_pairs: one predictive state per trajectory expected");
  Dataset out = allocate(states.rows(), phi);
  map_trajectories<bool>(exec, states.rows(), [&](Index i) {
    const auto& traj = trajs[static_cast<std::size_t>(i)];
    if (t + 1 + phi.k() > traj.length()) throw WindowUnavailable(t + 1, phi.k(), traj.length());
    auto input = out.inputs.row(i);
    input.head(phi.dim()) = states.row(i);
    input.tail(phi.n()) = traj.at(t).transpose();
    Eigen::Map<Vector> target(out.targets.row(i).data(), phi.dim());
    phi.write(traj, t + 1, target);
    return true;
  });
  return out;
}

Dataset constant_state_pairs(Exec exec, const Vector& state, std::span<const Trajectory> trajs,
                             const FeatureMap& phi) {
  const auto offsets = step_offsets(trajs, phi, nullptr);
  Dataset out = allocate(offsets.back(), phi);
  const RowMatrix row = state.transpose();
  map_trajectories<bool>(exec, static_cast<Index>(trajs.size()), [&](Index i) {
    const auto slot = static_cast<std::size_t>(i);
    write_pairs(row, true, trajs[slot], phi, offsets[slot], out);
    return true;
  });
  return out;
}

RowMatrix apply_rowwise(Exec exec, const Hypothesis& h, const RowMatrix& inputs) {
  RowMatrix out(inputs.rows(), h.output_dim());
  map_trajectories<bool>(exec, inputs.rows(), [&](Index i) {
    out.row(i) = h(inputs.row(i).transpose()).transpose();
    return true;
  });
  return out;
}

std::vector<double> objective_sums(Exec exec, const Filter& filter,
                                   std::span<const Trajectory> trajs) {
  const FeatureMap& phi = filter.phi();
  return map_trajectories<double>(exec, static_cast<Index>(trajs.size()), [&](Index i) {
    const auto& traj = trajs[static_cast<std::size_t>(i)];
    const RowMatrix states = rollout(filter, traj);
    Vector target(phi.dim());
    double sum = 0.0;
    for (Index t = 0; t < usable_steps(traj, phi.k()); ++t) {
      phi.write(traj, t + 1, target);
      sum += (states.row(t + 1).transpose() - target).squaredNorm();
    }
    return sum;
  });
}

ErrorReport error_sums_report(Exec exec, std::span<const RowMatrix> states,
                              std::span<const Trajectory> trajs, Index k, Index horizon,
                              Index first_step) {
  if (states.size() != trajs.size()) throw DimensionError("one state sequence per trajectory expected");
  const auto count = static_cast<Index>(trajs.size());
  RowMatrix sums = RowMatrix::Zero(count, horizon);
  const auto scored = map_trajectories<Index>(exec, count, [&](Index i) {
    const auto slot = static_cast<std::size_t>(i);
    return accumulate_errors(states[slot], trajs[slot].observations(), first_step,
                             usable_steps(trajs[slot], k), horizon, sums.row(i));
  });
  Index skipped = 0;
  for (const auto& traj : trajs)
    skipped += std::min(first_step, std::max<Index>(0, usable_steps(traj, k)));
  return summarize_errors(sums, scored, skipped);
}

}  // namespace psim::kernels
