#include "psim/filter.hpp"

#include <cmath>
#include <string>

namespace psim {

std::string_view to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::forward: return "forward";
    case Algorithm::dagger: return "dagger";
    case Algorithm::oracle: return "oracle";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "forward") return Algorithm::forward;
  if (name == "dagger") return Algorithm::dagger;
  if (name == "oracle") return Algorithm::oracle;
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

Filter::Filter(std::vector<Hypothesis> hypotheses, Vector initial, FeatureMap phi, bool stationary,
               Algorithm algorithm, Index selected)
    : hypotheses_(std::move(hypotheses)),
      initial_(std::move(initial)),
      phi_(phi),
      stationary_(stationary),
      algorithm_(algorithm),
      selected_iteration_(selected) {
  if (hypotheses_.empty()) throw DimensionError("filter needs at least one hypothesis");
  if (initial_.size() != phi_.dim()) throw DimensionError("initial state does not match feature map");
  for (const auto& h : hypotheses_)
    if (h.input_dim() != phi_.dim() + phi_.n() || h.output_dim() != phi_.dim())
      throw DimensionError("hypothesis shape does not match (p + n) -> p for the feature map");
}

Filter Filter::stationary(Hypothesis hypothesis, Vector initial_state, FeatureMap phi,
                          Algorithm algorithm, Index selected_iteration) {
  std::vector<Hypothesis> hs;
  hs.push_back(std::move(hypothesis));
  return Filter(std::move(hs), std::move(initial_state), phi, true, algorithm, selected_iteration);
}

Filter Filter::non_stationary(std::vector<Hypothesis> hypotheses, Vector initial_state,
                              FeatureMap phi) {
  const auto count = static_cast<Index>(hypotheses.size());
  return Filter(std::move(hypotheses), std::move(initial_state), phi, false, Algorithm::forward,
                count);
}

const Hypothesis& Filter::at(Index t) const {
  if (stationary_) return hypotheses_.front();
  if (t < 0 || t >= static_cast<Index>(hypotheses_.size()))
    throw DimensionError("non-stationary filter has no hypothesis for step " + std::to_string(t));
  return hypotheses_[static_cast<std::size_t>(t)];
}

Vector Filter::step(Index t, const Eigen::Ref<const Vector>& m, const Eigen::Ref<const Vector>& x) const {
  return at(t)(m, x);
}

namespace {

RolloutResult rollout_impl(const Filter& filter, const Trajectory& traj, double divergence_factor) {
  const FeatureMap& phi = filter.phi();
  if (traj.dim() != phi.n()) throw DimensionError("trajectory dimension does not match the filter");
  const Index steps = usable_steps(traj, phi.k());
  if (steps < 1)
    throw DataError("trajectory of length " + std::to_string(traj.length()) +
                    " is too short for a rollout with k=" + std::to_string(phi.k()));
  if (steps > filter.max_steps())
    throw DimensionError("trajectory needs " + std::to_string(steps) +
                         " filter steps but the filter was trained for " +
                         std::to_string(filter.max_steps()));

  const double limit = divergence_factor * std::max(filter.initial_state().norm(), 1.0);
  RolloutResult result;
  result.states.resize(steps + 1, phi.dim());
  result.states.row(0) = filter.initial_state().transpose();
  Vector z(phi.dim() + phi.n());
  for (Index t = 0; t < steps; ++t) {
    z.head(phi.dim()) = result.states.row(t).transpose();
    z.tail(phi.n()) = traj.at(t);
    const Vector next = filter.at(t)(z);
    if (!next.allFinite() || next.norm() > limit) {
      result.diverged_at = t + 1;
      return result;
    }
    result.states.row(t + 1) = next.transpose();
  }
  return result;
}

}  // namespace

RowMatrix rollout(const Filter& filter, const Trajectory& traj) {
  RolloutResult result = rollout_impl(filter, traj, std::numeric_limits<double>::infinity());
  if (result.diverged_at) throw DivergedRollout(*result.diverged_at);
  return std::move(result.states);
}

RolloutResult try_rollout(const Filter& filter, const Trajectory& traj, double divergence_factor) {
  return rollout_impl(filter, traj, divergence_factor);
}

}  // namespace psim
