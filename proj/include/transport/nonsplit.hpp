#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "transport/measure.hpp"
#include "transport/oracle.hpp"

namespace transport {

inline constexpr std::size_t kDefaultPartitionCap = 20;

/// One target atom index per source atom index; the induced pushforward
/// matches the target weights exactly.
struct AtomAssignment {
  std::vector<std::size_t> target_index;
};

/// Decides whether nu is the pushforward of mu by some map: an exact multiway
/// partition of the source weights into groups summing to each target weight.
/// Backtracking over atoms in decreasing weight order with exact rational
/// residuals and memoized infeasible states; the returned assignment is
/// deterministic (first solution in the fixed search order). Returns
/// nullopt when no assignment exists.
std::optional<AtomAssignment> feasible_pushforward(const DiscreteMeasure& mu,
                                                   const DiscreteMeasure& nu,
                                                   std::size_t cap = kDefaultPartitionCap);

/// Collects up to `limit` distinct assignments; used to certify uniqueness.
std::vector<AtomAssignment> enumerate_pushforward_assignments(
    const DiscreteMeasure& mu, const DiscreteMeasure& nu, std::size_t limit,
    std::size_t cap = kDefaultPartitionCap);

enum class FeasibilityStatus { kFeasible, kInfeasible, kOverCap, kOracleError };

struct FeasibilityRow {
  FeasibilityStatus status = FeasibilityStatus::kInfeasible;
  std::optional<AtomAssignment> assignment;
  std::string detail;  // populated for over-cap and oracle errors
};

struct FeasibilityReport {
  std::vector<FeasibilityRow> rows;
  // A finite test family never certifies the non-splitting property on all
  // empirical measures; this flag only summarizes the supplied inputs.
  bool all_feasible = false;
};

/// Evaluates F on each input and checks pushforward feasibility of the pair.
FeasibilityReport feasible_all_pairs(const std::vector<DiscreteMeasure>& inputs,
                                     const MeasureMapOracle& oracle,
                                     std::size_t cap = kDefaultPartitionCap);

}  // namespace transport
