#include "psim/error_report.hpp"

#include "psim/error.hpp"

namespace psim {

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

ErrorReport summarize_errors(const RowMatrix& sums, std::span<const Index> scored,
                             Index skipped_steps) {
  if (sums.rows() != static_cast<Index>(scored.size()))
    throw DimensionError("summarize_errors: one count per trajectory expected");
  ErrorReport report;
  const Index horizon = sums.cols();
  report.trajectories = sums.rows();
  report.skipped_steps = skipped_steps;
  for (Index s : scored) report.steps += s;

  std::vector<double> column(static_cast<std::size_t>(sums.rows()));
  double total = 0.0;
  for (Index i = 0; i < horizon; ++i) {
    for (Index r = 0; r < sums.rows(); ++r) column[static_cast<std::size_t>(r)] = sums(r, i);
    const double sum = pairwise_sum(column);
    total += sum;
    report.counts.push_back(report.steps);
    report.mse.push_back(report.steps > 0 ? sum / static_cast<double>(report.steps) : 0.0);
  }
  const double comparisons = static_cast<double>(report.steps * horizon);
  report.overall = comparisons > 0 ? total / comparisons : 0.0;
  return report;
}

Index accumulate_errors(const RowMatrix& states, const RowMatrix& observations, Index first_step,
                        Index stop, Index horizon, Eigen::Ref<Eigen::RowVectorXd> sums) {
  const Index n = observations.cols();
  if (states.cols() < horizon * n) throw DimensionError("predictive state too short for horizon");
  if (stop > states.rows() || stop + horizon - 1 > observations.rows())
    throw DimensionError("not enough states or observations to score");
  Index scored = 0;
  for (Index s = first_step; s < stop; ++s, ++scored)
    for (Index i = 0; i < horizon; ++i)
      sums(i) += (states.row(s).segment(i * n, n) - observations.row(s + i)).squaredNorm();
  return scored;
}

}  // namespace psim
