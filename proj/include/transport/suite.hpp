#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "transport/measure.hpp"

namespace transport {
namespace suite {

struct SuiteConfig {
  std::uint64_t seed = 42;
  std::string only;  // substring filter on criterion names; empty runs all
  int jobs = 1;
};

struct CriterionResult {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

/// Runs every built-in acceptance criterion matching the filter; rows are
/// pure and may be evaluated concurrently (`jobs`).
std::vector<CriterionResult> run_acceptance_suite(const SuiteConfig& config);

/// Monotone-rearrangement Wasserstein distance for measures on the line;
/// independent of the network simplex path.
double quantile_wasserstein_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p);

/// Deterministic uniform double in [0, 1); distribution-object free so that
/// sampled values are identical across platforms.
double unit_uniform(std::uint64_t& state);

}  // namespace suite
}  // namespace transport
