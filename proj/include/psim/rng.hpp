#pragma once

#include <cstdint>
#include <random>

#include "psim/linalg.hpp"

namespace psim {

/// Seeded generator with a fixed sampling algorithm, so draws are identical
/// across standard library implementations (model files regenerate RFF
/// frequencies from the stored seed).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 bits of mantissa.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller.
  double normal();
  std::uint64_t next_u64() { return engine_(); }

  Matrix normal_matrix(Index rows, Index cols);
  Vector normal_vector(Index size);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Derives an independent stream seed for item `index` of a seeded batch.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// FNV-1a over raw bytes; used for model digests and config hashes.
std::uint64_t fnv1a(const void* data, std::size_t size,
                    std::uint64_t hash = 14695981039346656037ull);

}  // namespace psim
