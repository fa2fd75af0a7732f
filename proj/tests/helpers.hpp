#pragma once

#include <cmath>
#include <initializer_list>
#include <vector>

#include "psim/core.hpp"
#include "psim/kernels.hpp"
#include "psim/lds.hpp"

namespace psim::test {

inline Trajectory traj(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<double>> data;
  for (const auto& r : rows) data.emplace_back(r);
  return Trajectory::from_rows(data);
}

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

inline Matrix mat1(double value) { return Matrix::Constant(1, 1, value); }

/// Independent ridge oracle: Gaussian elimination with partial pivoting on
/// the normal equations, bias column last and unregularized.
inline Matrix normal_equations(const RowMatrix& X, const RowMatrix& Y, double lambda, bool intercept = true) {
  const Index n = X.rows(), d = X.cols(), p = Y.cols(), m = intercept ? d + 1 : d;
  std::vector<std::vector<double>> a(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m + p)));
  auto z = [&](Index r, Index c) { return c < d ? X(r, c) : 1.0; };
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      double s = 0.0;
      for (Index r = 0; r < n; ++r) s += z(r, i) * z(r, j);
      a[i][j] = s + (i == j && i < d ? lambda : 0.0);
    }
    for (Index j = 0; j < p; ++j) {
      double s = 0.0;
      for (Index r = 0; r < n; ++r) s += z(r, i) * Y(r, j);
      a[i][m + j] = s;
    }
  }
  for (Index col = 0; col < m; ++col) {
    Index pivot = col;
    for (Index r = col + 1; r < m; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    std::swap(a[col], a[pivot]);
    for (Index r = 0; r < m; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (Index c = col; c < m + p; ++c) a[r][c] -= f * a[col][c];
    }
  }
  Matrix w(p, m);
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < m; ++i) w(j, i) = a[i][m + j] / a[i][i];
  return w;
}

/// Noisy benchmark trajectories with the default k = 2.
inline std::vector<Trajectory> benchmark_trajs(std::uint64_t seed, Index count, Index length,
                                               std::uint64_t data_seed) {
  const Benchmark bench = make_benchmark(seed);
  return kernels::simulate_many(kernels::Exec::serial, bench.model, count, length, data_seed);
}

}  // namespace psim::test
