#include "sslhs/stratification.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace sslhs {

HyperRectangle::HyperRectangle(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size() || lower_.empty()) {
    throw std::invalid_argument("HyperRectangle: bounds must be non-empty and of equal length");
  }
  for (std::size_t k = 0; k < lower_.size(); ++k) {
    if (!(lower_[k] >= 0.0 && upper_[k] <= 1.0 && lower_[k] < upper_[k])) {
      std::ostringstream msg;
      msg << "HyperRectangle: invalid extent [" << lower_[k] << ", " << upper_[k]
          << ") in dimension " << k;
      throw std::invalid_argument(msg.str());
    }
  }
}

HyperRectangle HyperRectangle::unit(std::size_t dim) {
  return HyperRectangle(std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0));
}

double HyperRectangle::volume() const {
  double v = 1.0;
  for (std::size_t k = 0; k < dim(); ++k) v *= extent(k);
  return v;
}

bool HyperRectangle::contains(std::span<const double> point) const {
  if (point.size() != dim()) {
    throw std::invalid_argument("HyperRectangle::contains: dimension mismatch");
  }
  for (std::size_t k = 0; k < dim(); ++k) {
    const double y = point[k];
    if (y < lower_[k]) return false;
    if (upper_[k] == 1.0 ? y > 1.0 : y >= upper_[k]) return false;
  }
  return true;
}

std::pair<HyperRectangle, HyperRectangle> HyperRectangle::split(std::size_t dim) const {
  if (dim >= this->dim()) throw std::out_of_range("HyperRectangle::split: dimension out of range");
  const double mid = center(dim);
  HyperRectangle lo = *this;
  HyperRectangle hi = *this;
  lo.upper_[dim] = mid;
  hi.lower_[dim] = mid;
  return {std::move(lo), std::move(hi)};
}

double volume(const HyperRectangle& rect) { return rect.volume(); }

bool contains(const HyperRectangle& rect, std::span<const double> point) {
  return rect.contains(point);
}

Stratification Stratification::trivial(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("Stratification: dimension must be positive");
  return Stratification(dim, {Stratum{0, std::nullopt, HyperRectangle::unit(dim)}}, 1);
}

Stratification Stratification::from_strata(std::size_t dim, std::vector<Stratum> strata) {
  if (dim == 0) throw std::invalid_argument("Stratification: dimension must be positive");
  std::unordered_set<StratumId> seen;
  StratumId next = 0;
  for (const auto& s : strata) {
    if (s.rect.dim() != dim) throw std::invalid_argument("Stratification: stratum dimension mismatch");
    if (!seen.insert(s.id).second) {
      throw std::invalid_argument("Stratification: duplicate stratum id " + std::to_string(s.id));
    }
    next = std::max(next, s.id + 1);
  }
  return Stratification(dim, std::move(strata), next);
}

const Stratum& Stratification::find(StratumId id) const {
  for (const auto& s : strata_) {
    if (s.id == id) return s;
  }
  throw std::out_of_range("unknown stratum id " + std::to_string(id));
}

std::optional<std::size_t> Stratification::locate(std::span<const double> point) const {
  for (std::size_t i = 0; i < strata_.size(); ++i) {
    if (strata_[i].rect.contains(point)) return i;
  }
  return std::nullopt;
}

Stratification Stratification::bisect(StratumId id, std::size_t dim) const {
  if (dim >= dim_) {
    throw std::out_of_range("bisect: dimension " + std::to_string(dim) + " out of range");
  }
  auto it = std::find_if(strata_.begin(), strata_.end(), [id](const Stratum& s) { return s.id == id; });
  if (it == strata_.end()) throw std::out_of_range("bisect: unknown stratum id " + std::to_string(id));

  auto [lo, hi] = it->rect.split(dim);
  std::vector<Stratum> out;
  out.reserve(strata_.size() + 1);
  for (const auto& s : strata_) {
    if (s.id != id) {
      out.push_back(s);
      continue;
    }
    out.push_back(Stratum{next_id_, id, std::move(lo)});
    out.push_back(Stratum{next_id_ + 1, id, std::move(hi)});
  }
  return Stratification(dim_, std::move(out), next_id_ + 2);
}

namespace {

bool interiors_overlap(const HyperRectangle& a, const HyperRectangle& b) {
  for (std::size_t k = 0; k < a.dim(); ++k) {
    if (a.upper(k) <= b.lower(k) || b.upper(k) <= a.lower(k)) return false;
  }
  return true;
}

}  // namespace

ValidationResult validate(const Stratification& strat) {
  const auto& strata = strat.strata();
  if (strata.empty()) return {false, "stratification is empty"};
  for (std::size_t i = 0; i < strata.size(); ++i) {
    for (std::size_t j = i + 1; j < strata.size(); ++j) {
      if (interiors_overlap(strata[i].rect, strata[j].rect)) {
        std::ostringstream msg;
        msg << "strata " << strata[i].id << " and " << strata[j].id << " overlap";
        return {false, msg.str()};
      }
    }
  }
  double total = 0.0;
  for (const auto& s : strata) total += s.rect.volume();
  if (std::abs(total - 1.0) > kVolumeTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "total volume " << total << " differs from 1 by " << (1.0 - total);
    return {false, msg.str()};
  }
  return {};
}

}  // namespace sslhs
