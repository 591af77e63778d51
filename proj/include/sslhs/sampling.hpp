#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "sslhs/stratification.hpp"

namespace sslhs {

/// Reproducible pseudo-random stream.
///
/// The engine is std::mt19937_64 seeded through std::seed_seq; both are fully
/// specified by the standard, and the conversions below avoid the
/// implementation-defined standard distributions, so the same key yields the
/// same sequence with any conforming standard library.
class RngStream {
 public:
  explicit RngStream(std::span<const std::uint64_t> key);
  explicit RngStream(std::uint64_t seed) : RngStream(std::span<const std::uint64_t>(&seed, 1)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Uniformly random permutation of {0, ..., n-1} (Fisher-Yates).
  std::vector<std::size_t> permutation(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

/// Independent stream for stage `stage` and stratum `stratum` of a run seeded
/// by `master_seed`.
RngStream derive_stream(std::uint64_t master_seed, std::uint64_t stage, std::int64_t stratum);

/// Mixes a base seed with a replication/method tag (SplitMix64 finaliser).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

enum class Design { LHS, SMC };

/// n points in a stratum, stored row-major.
struct SampleBatch {
  std::size_t n = 0;
  std::size_t dim = 0;
  StratumId stratum_id = 0;
  Design design = Design::SMC;
  std::vector<double> points;

  std::span<const double> point(std::size_t j) const { return {points.data() + j * dim, dim}; }
};

/// i.i.d. uniform points on `rect`. Throws std::invalid_argument if n == 0.
SampleBatch uniform_sample(const HyperRectangle& rect, std::size_t n, RngStream& rng,
                           StratumId stratum_id = 0);

/// Jittered Latin hypercube of n points on `rect`: per dimension an
/// independent random permutation of the n cells plus a uniform offset inside
/// each cell. Throws std::invalid_argument if n == 0.
SampleBatch lhs_sample(const HyperRectangle& rect, std::size_t n, RngStream& rng,
                       StratumId stratum_id = 0);

/// LHS cell of coordinate y in dimension k: floor(n (y - lower) / extent).
std::int64_t lhs_cell_index(const HyperRectangle& rect, std::size_t k, std::size_t n, double y);

}  // namespace sslhs
