#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "transport/rational.hpp"

namespace transport {

/// A point of the Euclidean ground space.
struct Point {
  std::vector<double> coords;

  Point() = default;
  explicit Point(std::vector<double> c);
  Point(std::initializer_list<double> c) : Point(std::vector<double>(c)) {}

  std::size_t dim() const { return coords.size(); }
  double operator[](std::size_t i) const { return coords[i]; }

  friend bool operator==(const Point& a, const Point& b) { return a.coords == b.coords; }
  friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
  /// Lexicographic coordinate order; used to canonicalize measures.
  friend bool operator<(const Point& a, const Point& b) { return a.coords < b.coords; }
};

/// Euclidean distance between two points of the same dimension.
double ground_distance(const Point& x, const Point& y);

/// A vector of exact rational weights in the simplex.
struct WeightVector {
  std::vector<Rational> entries;

  WeightVector() = default;
  explicit WeightVector(std::vector<Rational> w);

  std::size_t size() const { return entries.size(); }
  const Rational& operator[](std::size_t i) const { return entries[i]; }

  friend bool operator==(const WeightVector& a, const WeightVector& b) {
    return a.entries == b.entries;
  }
};

/// A finitely supported probability measure with exact rational weights.
///
/// Atoms are pairwise distinct under exact coordinate equality; duplicates
/// passed to the constructor are merged and their weights summed. Weights are
/// strictly positive and sum exactly to one.
class DiscreteMeasure {
 public:
  DiscreteMeasure(std::vector<Point> atoms, std::vector<Rational> weights);

  static DiscreteMeasure dirac(Point x) { return DiscreteMeasure({std::move(x)}, {Rational(1)}); }

  std::size_t size() const { return atoms_.size(); }
  std::size_t dim() const { return dim_; }
  const Point& atom(std::size_t i) const { return atoms_[i]; }
  const Rational& weight(std::size_t i) const { return weights_[i]; }
  const std::vector<Point>& atoms() const { return atoms_; }
  const std::vector<Rational>& weights() const { return weights_; }
  WeightVector weight_vector() const { return WeightVector(weights_); }

  /// Exact mass carried by the point x (zero if x is not an atom).
  Rational mass_at(const Point& x) const;

  /// Equality as measures: same atom/weight pairs regardless of ordering.
  friend bool operator==(const DiscreteMeasure& a, const DiscreteMeasure& b);
  friend bool operator!=(const DiscreteMeasure& a, const DiscreteMeasure& b) { return !(a == b); }

 private:
  std::vector<Point> atoms_;
  std::vector<Rational> weights_;
  std::size_t dim_ = 0;
};

/// A finite positive measure with total mass at most one, used for common
/// lower bounds of probability measures. Atoms are pairwise distinct.
class SubMeasure {
 public:
  SubMeasure(std::vector<Point> atoms, std::vector<Rational> weights);

  std::size_t size() const { return atoms_.size(); }
  std::size_t dim() const { return dim_; }
  const Point& atom(std::size_t i) const { return atoms_[i]; }
  const Rational& weight(std::size_t i) const { return weights_[i]; }
  const Rational& total_mass() const { return total_; }

  /// True when every atom of this measure carries at least as much mass in mu.
  bool dominated_by(const DiscreteMeasure& mu) const;

 private:
  std::vector<Point> atoms_;
  std::vector<Rational> weights_;
  Rational total_;
  std::size_t dim_ = 0;
};

inline constexpr std::size_t kDefaultGenericCap = 22;

struct GenericityResult {
  bool generic = false;
  // On failure, two distinct index sets with equal weight sums (disjoint,
  // common indices stripped). Empty sets are possible when zero weights occur.
  std::vector<std::size_t> witness_first;
  std::vector<std::size_t> witness_second;
};

/// Decides whether all 2^m subset sums of `a` are pairwise distinct.
/// Exact rational comparison; m above `cap` raises CapacityError.
GenericityResult is_generic(const WeightVector& a, std::size_t cap = kDefaultGenericCap);

/// The canonical generic family (2^{i-1} / (2^m - 1))_{i=1..m}: subset sums
/// are distinct by uniqueness of binary representations.
WeightVector generic_weights(std::size_t m);

/// Returns a generic weight vector within `tolerance` of `a` in sup norm,
/// obtained by mixing `a` with generic_weights(m) along a dyadic schedule.
WeightVector nearest_generic(const WeightVector& a, const Rational& tolerance,
                             std::size_t cap = kDefaultGenericCap);

/// Minimal pairwise distance between atoms; +infinity for a single atom.
double support_separation(const DiscreteMeasure& mu);

}  // namespace transport
