#include "sslhs/sampling.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sslhs {

namespace {

std::mt19937_64 seeded_engine(std::span<const std::uint64_t> key) {
  // seed_seq consumes 32-bit words.
  std::vector<std::uint32_t> words;
  words.reserve(2 * key.size() + 1);
  words.push_back(static_cast<std::uint32_t>(key.size()));
  for (std::uint64_t k : key) {
    words.push_back(static_cast<std::uint32_t>(k & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(k >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::span<const std::uint64_t> key) : engine_(seeded_engine(key)) {}

std::uint64_t RngStream::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("RngStream::below: bound must be positive");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= threshold) return x % bound;
  }
}

std::vector<std::size_t> RngStream::permutation(std::size_t n) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(below(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t stage, std::int64_t stratum) {
  const std::uint64_t key[] = {master_seed, stage, static_cast<std::uint64_t>(stratum),
                               0x53534c4853ull};
  return RngStream(std::span<const std::uint64_t>(key));
}

SampleBatch uniform_sample(const HyperRectangle& rect, std::size_t n, RngStream& rng,
                           StratumId stratum_id) {
  if (n == 0) throw std::invalid_argument("uniform_sample: n must be positive");
  SampleBatch batch{n, rect.dim(), stratum_id, Design::SMC, std::vector<double>(n * rect.dim())};
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < rect.dim(); ++k) {
      batch.points[j * rect.dim() + k] = rect.lower(k) + rng.uniform() * rect.extent(k);
    }
  }
  return batch;
}

std::int64_t lhs_cell_index(const HyperRectangle& rect, std::size_t k, std::size_t n, double y) {
  return static_cast<std::int64_t>(
      std::floor(static_cast<double>(n) * (y - rect.lower(k)) / rect.extent(k)));
}

SampleBatch lhs_sample(const HyperRectangle& rect, std::size_t n, RngStream& rng,
                       StratumId stratum_id) {
  if (n == 0) throw std::invalid_argument("lhs_sample: n must be positive");
  const std::size_t dim = rect.dim();
  SampleBatch batch{n, dim, stratum_id, Design::LHS, std::vector<double>(n * dim)};
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < dim; ++k) {
    const auto perm = rng.permutation(n);
    const double lo = rect.lower(k);
    const double hi = rect.upper(k);
    for (std::size_t j = 0; j < n; ++j) {
      const auto cell = static_cast<std::int64_t>(perm[j]);
      double y = lo + (static_cast<double>(cell) + rng.uniform()) * inv_n * rect.extent(k);
      // Rounding can push y across a cell boundary; nudge it back so the
      // marginal occupancy is an exact permutation.
      while (y >= hi || lhs_cell_index(rect, k, n, y) > cell) y = std::nextafter(y, lo);
      while (y < lo || lhs_cell_index(rect, k, n, y) < cell) y = std::nextafter(y, hi);
      batch.points[j * dim + k] = y;
    }
  }
  return batch;
}

}  // namespace sslhs
