#pragma once

#include <cstddef>
#include <vector>

#include "transport/measure.hpp"

namespace transport {

struct PlanEntry {
  std::size_t source = 0;
  std::size_t target = 0;
  Rational mass;
};

/// A coupling of two discrete measures: sparse joint masses with exact
/// marginal conservation.
struct TransportPlan {
  DiscreteMeasure source;
  DiscreteMeasure target;
  std::vector<PlanEntry> entries;

  TransportPlan(DiscreteMeasure src, DiscreteMeasure tgt, std::vector<PlanEntry> e);

  /// Throws unless masses are positive and row/column sums equal the
  /// marginals exactly.
  void validate() const;

  /// Weighted ground cost sum((mass) * d(x_i, y_j)^p).
  double ground_cost(double p) const;
};

/// A solved transport problem: cost is the minimal value of the p-th power
/// objective, distance its p-th root.
struct OtResult {
  double cost = 0.0;
  double distance = 0.0;
  TransportPlan plan;
};

}  // namespace transport
