#include "transport/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <utility>

namespace transport {

Point::Point(std::vector<double> c) : coords(std::move(c)) {
  for (double v : coords) {
    if (!std::isfinite(v)) throw ValidationError("point coordinates must be finite");
  }
}

double ground_distance(const Point& x, const Point& y) {
  if (x.dim() != y.dim()) {
    throw ValidationError("ground_distance: dimension mismatch (" + std::to_string(x.dim()) +
                          " vs " + std::to_string(y.dim()) + ")");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    double d = x.coords[i] - y.coords[i];
    s += d * d;
  }
  return std::sqrt(s);
}

WeightVector::WeightVector(std::vector<Rational> w) : entries(std::move(w)) {
  Rational total;
  for (const auto& e : entries) {
    if (e.is_negative()) throw ValidationError("weight vector entries must be nonnegative");
    total += e;
  }
  if (total != Rational(1)) {
    throw ValidationError("weight vector must sum to 1, got " + total.str());
  }
}

DiscreteMeasure::DiscreteMeasure(std::vector<Point> atoms, std::vector<Rational> weights) {
  if (atoms.size() != weights.size()) {
    throw ValidationError("measure: atom and weight counts differ");
  }
  if (atoms.empty()) throw ValidationError("measure must carry at least one atom");
  dim_ = atoms.front().dim();
  for (const auto& a : atoms) {
    if (a.dim() != dim_) throw ValidationError("measure atoms have mixed dimensions");
  }
  // Merge exact duplicates, keeping first-occurrence order.
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (weights[i].is_negative() || weights[i].is_zero()) {
      throw ValidationError("measure weights must be strictly positive");
    }
    auto found = std::find(atoms_.begin(), atoms_.end(), atoms[i]);
    if (found == atoms_.end()) {
      atoms_.push_back(atoms[i]);
      weights_.push_back(weights[i]);
    } else {
      weights_[static_cast<std::size_t>(found - atoms_.begin())] += weights[i];
    }
  }
  Rational total;
  for (const auto& w : weights_) total += w;
  if (total != Rational(1)) {
    throw ValidationError("measure weights must sum exactly to 1, got " + total.str());
  }
}

Rational DiscreteMeasure::mass_at(const Point& x) const {
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i] == x) return weights_[i];
  }
  return Rational(0);
}

bool operator==(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (a.dim_ != b.dim_ || a.size() != b.size()) return false;
  auto canonical = [](const DiscreteMeasure& m) {
    std::vector<std::size_t> order(m.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return m.atoms_[i] < m.atoms_[j]; });
    return order;
  };
  auto oa = canonical(a);
  auto ob = canonical(b);
  for (std::size_t k = 0; k < oa.size(); ++k) {
    if (a.atoms_[oa[k]] != b.atoms_[ob[k]] || a.weights_[oa[k]] != b.weights_[ob[k]]) return false;
  }
  return true;
}

SubMeasure::SubMeasure(std::vector<Point> atoms, std::vector<Rational> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (atoms_.size() != weights_.size()) {
    throw ValidationError("sub-measure: atom and weight counts differ");
  }
  if (atoms_.empty()) throw ValidationError("sub-measure must carry at least one atom");
  dim_ = atoms_.front().dim();
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].dim() != dim_) throw ValidationError("sub-measure atoms have mixed dimensions");
    if (weights_[i].is_negative() || weights_[i].is_zero()) {
      throw ValidationError("sub-measure weights must be strictly positive");
    }
    for (std::size_t j = i + 1; j < atoms_.size(); ++j) {
      if (atoms_[i] == atoms_[j]) throw ValidationError("sub-measure atoms must be distinct");
    }
    total_ += weights_[i];
  }
  if (total_ > Rational(1)) {
    throw ValidationError("sub-measure total mass exceeds 1: " + total_.str());
  }
}

bool SubMeasure::dominated_by(const DiscreteMeasure& mu) const {
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (mu.mass_at(atoms_[i]) < weights_[i]) return false;
  }
  return true;
}

GenericityResult is_generic(const WeightVector& a, std::size_t cap) {
  const std::size_t m = a.size();
  if (m > cap) {
    throw CapacityError("is_generic: " + std::to_string(m) + " weights exceed the cap of " +
                        std::to_string(cap) + " (2^m subset sums are enumerated)");
  }
  // Scale to a common denominator; subset sums then live in [0, L] with L
  // the lcm, so plain 64-bit sums cannot overflow.
  std::int64_t lcm = 1;
  for (const auto& w : a.entries) lcm = checked_lcm(lcm, w.den());
  std::vector<std::int64_t> scaled(m);
  for (std::size_t i = 0; i < m; ++i) {
    scaled[i] = checked_mul(a.entries[i].num(), lcm / a.entries[i].den());
  }

  const std::uint32_t count = 1u << m;
  std::vector<std::pair<std::int64_t, std::uint32_t>> sums(count);
  sums[0] = {0, 0};
  for (std::uint32_t mask = 1; mask < count; ++mask) {
    std::uint32_t low = mask & (~mask + 1u);
    unsigned idx = static_cast<unsigned>(__builtin_ctz(low));
    sums[mask] = {sums[mask ^ low].first + scaled[idx], mask};
  }
  std::sort(sums.begin(), sums.end());

  GenericityResult result;
  for (std::uint32_t k = 1; k < count; ++k) {
    if (sums[k].first == sums[k - 1].first) {
      std::uint32_t m1 = sums[k - 1].second;
      std::uint32_t m2 = sums[k].second;
      std::uint32_t common = m1 & m2;
      m1 &= ~common;
      m2 &= ~common;
      for (std::size_t i = 0; i < m; ++i) {
        if (m1 & (1u << i)) result.witness_first.push_back(i);
        if (m2 & (1u << i)) result.witness_second.push_back(i);
      }
      result.generic = false;
      return result;
    }
  }
  result.generic = true;
  return result;
}

WeightVector generic_weights(std::size_t m) {
  if (m == 0) throw ValidationError("generic_weights: m must be positive");
  if (m > 62) throw OverflowError("generic_weights: 2^m - 1 is not representable for m > 62");
  std::int64_t den = (std::int64_t{1} << m) - 1;
  std::vector<Rational> w;
  w.reserve(m);
  for (std::size_t i = 0; i < m; ++i) w.emplace_back(std::int64_t{1} << i, den);
  return WeightVector(std::move(w));
}

WeightVector nearest_generic(const WeightVector& a, const Rational& tolerance, std::size_t cap) {
  if (tolerance <= Rational(0)) throw ValidationError("nearest_generic: tolerance must be > 0");
  if (is_generic(a, cap).generic) return a;

  const std::size_t m = a.size();
  WeightVector g = generic_weights(m);
  // Dyadic schedule t = 2^{-j} * tolerance * m; a candidate is accepted once
  // it is generic and within tolerance in sup norm.
  constexpr int kMaxRetries = 80;
  Rational t = tolerance * Rational(static_cast<std::int64_t>(m));
  for (int j = 0; j < kMaxRetries; ++j, t /= Rational(2)) {
    if (t > Rational(1)) continue;  // the mix must stay inside the simplex
    std::vector<Rational> mixed(m);
    Rational dev(0);
    bool usable = true;
    try {
      for (std::size_t i = 0; i < m; ++i) {
        mixed[i] = (Rational(1) - t) * a.entries[i] + t * g.entries[i];
        Rational d = mixed[i] - a.entries[i];
        if (d.is_negative()) d = -d;
        if (d > dev) dev = d;
      }
    } catch (const OverflowError&) {
      usable = false;
    }
    if (!usable || dev > tolerance) continue;
    WeightVector candidate(std::move(mixed));
    if (is_generic(candidate, cap).generic) return candidate;
  }
  throw Error("nearest_generic: dyadic schedule exhausted without finding a generic vector");
}

double support_separation(const DiscreteMeasure& mu) {
  if (mu.size() < 2) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = i + 1; j < mu.size(); ++j) {
      best = std::min(best, ground_distance(mu.atom(i), mu.atom(j)));
    }
  }
  return best;
}

}  // namespace transport
