#pragma once

// Trajectory-parallel kernels. Every kernel runs the same per-trajectory body
// under either a plain loop (Exec::serial, the reference) or an OpenMP loop
// (Exec::parallel). Results are written into per-trajectory slots and reduced
// in trajectory order, so both paths produce bit-identical output.

#include <cstdint>
#include <exception>
#include <optional>
#include <span>
#include <vector>

#include "psim/core.hpp"
#include "psim/error_report.hpp"
#include "psim/filter.hpp"
#include "psim/lds.hpp"

namespace psim::kernels {

enum class Exec { serial, parallel };

/// Evaluates fn(i) for i in [0, count) into slot i. The first exception (by
/// index) is rethrown after the loop.
template <class Result, class Fn>
std::vector<Result> map_trajectories(Exec exec, Index count, Fn&& fn) {
  std::vector<std::optional<Result>> slots(static_cast<std::size_t>(count));
  if (exec == Exec::serial) {
    for (Index i = 0; i < count; ++i) slots[static_cast<std::size_t>(i)].emplace(fn(i));
  } else {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(dynamic, 8)
    for (Index i = 0; i < count; ++i) {
      try {
        slots[static_cast<std::size_t>(i)].emplace(fn(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
    for (auto& error : errors)
      if (error) std::rethrow_exception(error);
  }
  std::vector<Result> out;
  out.reserve(slots.size());
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

/// `count` trajectories of `length` steps; trajectory i uses derive_seed(seed, i).
std::vector<Trajectory> simulate_many(Exec exec, const LdsModel& model, Index count, Index length,
                                      std::uint64_t seed);

std::vector<RowMatrix> rollout_all(Exec exec, const Filter& filter,
                                   std::span<const Trajectory> trajs);

std::vector<RolloutResult> try_rollout_all(Exec exec, const Filter& filter,
                                           std::span<const Trajectory> trajs,
                                           double divergence_factor);

struct PairCollection {
  Dataset data;
  Index diverged = 0;  ///< trajectories whose rollout was aborted
};

/// Rolls `filter` over every trajectory and gathers ((m_t, x_t), phi(f_{t+1}))
/// for t in [0, L-k), trajectories in order. Diverged trajectories
/// contribute nothing.
PairCollection collect_pairs(Exec exec, const Filter& filter, std::span<const Trajectory> trajs,
                             double divergence_factor);

/// Pairs built from fixed per-trajectory states: input row i is
/// [states.row(i), x_t^i], target phi(f_{t+1}^i).
Dataset step_pairs(Exec exec, const RowMatrix& states, std::span<const Trajectory> trajs, Index t,
                   const FeatureMap& phi);

/// Pairs ((m, x_t), phi(f_{t+1})) with the same state m at every step.
Dataset constant_state_pairs(Exec exec, const Vector& state, std::span<const Trajectory> trajs,
                             const FeatureMap& phi);

/// Row i of the result is h(inputs.row(i)).
RowMatrix apply_rowwise(Exec exec, const Hypothesis& h, const RowMatrix& inputs);

/// Per-trajectory sum over t of ||m_{t+1} - phi(f_{t+1})||^2 along the rollout.
std::vector<double> objective_sums(Exec exec, const Filter& filter,
                                   std::span<const Trajectory> trajs);

/// Scores predictive-state rows against the observations they predict;
/// see accumulate_errors. Each trajectory is scored on states
/// [first_step, L-k).
ErrorReport error_sums_report(Exec exec, std::span<const RowMatrix> states,
                              std::span<const Trajectory> trajs, Index k, Index horizon,
                              Index first_step);

}  // namespace psim::kernels
