#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sslhs {

using StratumId = std::int64_t;

/// Axis-aligned box inside the unit hypercube.
///
/// Membership is half-open, [lower, upper), except that an upper bound equal
/// to 1 is inclusive. Under this convention any stratification produced by
/// bisection is an exact partition of [0,1]^d.
class HyperRectangle {
 public:
  /// Empty (zero-dimensional) placeholder.
  HyperRectangle() = default;

  /// Throws std::invalid_argument unless 0 <= lower[k] < upper[k] <= 1.
  HyperRectangle(std::vector<double> lower, std::vector<double> upper);

  /// The whole unit hypercube [0,1]^d.
  static HyperRectangle unit(std::size_t dim);

  std::size_t dim() const { return lower_.size(); }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  double lower(std::size_t k) const { return lower_[k]; }
  double upper(std::size_t k) const { return upper_[k]; }
  double extent(std::size_t k) const { return upper_[k] - lower_[k]; }
  double center(std::size_t k) const { return 0.5 * (lower_[k] + upper_[k]); }

  /// Probability mass p_S of the box under the uniform law, i.e. its volume.
  double volume() const;

  /// Throws std::invalid_argument on dimension mismatch.
  bool contains(std::span<const double> point) const;

  /// Splits at the midpoint of dimension `dim`; returns {lower half, upper half}.
  std::pair<HyperRectangle, HyperRectangle> split(std::size_t dim) const;

  friend bool operator==(const HyperRectangle&, const HyperRectangle&) = default;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

double volume(const HyperRectangle& rect);
bool contains(const HyperRectangle& rect, std::span<const double> point);

struct Stratum {
  StratumId id = 0;
  std::optional<StratumId> parent;
  HyperRectangle rect;

  friend bool operator==(const Stratum&, const Stratum&) = default;
};

struct ValidationResult {
  bool ok = true;
  std::string diagnostic;

  explicit operator bool() const { return ok; }
};

/// A disjoint cover of [0,1]^d by hyperrectangles.
///
/// Values are immutable; bisect() returns a new stratification. Stratum ids
/// increase monotonically: children of a bisection receive fresh ids and
/// remember their parent.
class Stratification {
 public:
  Stratification() = default;

  /// The trivial stratification {[0,1]^d} with stratum id 0.
  static Stratification trivial(std::size_t dim);

  /// Assembles a stratification from explicit strata without checking the
  /// partition property; run validate() on the result. Throws
  /// std::invalid_argument on duplicate ids or inconsistent dimensions.
  static Stratification from_strata(std::size_t dim, std::vector<Stratum> strata);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return strata_.size(); }
  const std::vector<Stratum>& strata() const { return strata_; }
  StratumId next_id() const { return next_id_; }

  /// Throws std::out_of_range for an unknown id.
  const Stratum& find(StratumId id) const;

  /// Index of the stratum containing `point`, or nullopt.
  std::optional<std::size_t> locate(std::span<const double> point) const;

  /// Replaces stratum `id` by its two halves along `dim` (0-based). The lower
  /// half takes the parent's position and the upper half follows it.
  /// Throws std::out_of_range for an unknown id or dimension.
  Stratification bisect(StratumId id, std::size_t dim) const;

  friend bool operator==(const Stratification&, const Stratification&) = default;

 private:
  Stratification(std::size_t dim, std::vector<Stratum> strata, StratumId next_id)
      : dim_(dim), strata_(std::move(strata)), next_id_(next_id) {}

  std::size_t dim_ = 0;
  std::vector<Stratum> strata_;
  StratumId next_id_ = 0;
};

inline Stratification bisect(const Stratification& strat, StratumId id, std::size_t dim) {
  return strat.bisect(id, dim);
}

inline constexpr double kVolumeTolerance = 1e-12;

/// Checks pairwise interior-disjointness and unit total volume. Never throws;
/// the diagnostic names the first offending pair or the volume deficit.
ValidationResult validate(const Stratification& strat);

}  // namespace sslhs
