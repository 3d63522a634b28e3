#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "lrs/matrix.hpp"

namespace lrs {

/// Deterministic random source used everywhere in the library.
///
/// The generator algorithm is fixed (std::mt19937_64 with explicit 53-bit
/// uniform extraction and Box-Muller normals) so that identical seeds give
/// bit-identical streams on every platform; std::*_distribution is avoided
/// on purpose because its output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (pairs cached).
  double normal();

  std::uint64_t next_u64() { return gen_(); }

  /// Child generator with a seed derived from (seed, tag); independent
  /// streams for independent purposes without consuming this generator.
  Rng fork(std::string_view tag) const;

  Matrix gaussian_matrix(Index rows, Index cols);

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace lrs
