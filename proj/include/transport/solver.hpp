#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "transport/plan.hpp"

namespace transport {

struct SolverOptions {
  std::size_t max_total_atoms = 2000;
  double tolerance = 1e-9;
};

/// Exact p-Wasserstein distance and an optimal plan between two discrete
/// measures, computed by a network simplex on the complete bipartite
/// transportation polytope. Masses are exact rationals; costs are doubles and
/// optimality is certified by complementary slackness at `tolerance`.
/// Deterministic: fixed block pricing with lexicographic (i, j) tie-breaking.
OtResult wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                     const SolverOptions& options = {});

/// Independent small-instance oracle. For uniform weights 1/n on both sides
/// with n <= 8 it minimizes over all n! permutation couplings; otherwise it
/// requires at most 6 atoms in total and enumerates the basic feasible
/// solutions of the transportation polytope.
OtResult brute_force_wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p);

/// Generic balanced transportation solve with an arbitrary cost function.
/// `supply` and `demand` are positive rationals with equal exact totals (not
/// necessarily probabilities). Entries are returned in lexicographic order.
std::vector<PlanEntry> solve_transport(const std::vector<Rational>& supply,
                                       const std::vector<Rational>& demand,
                                       const std::function<double(std::size_t, std::size_t)>& cost,
                                       double tolerance = 1e-9);

struct CycleCheckResult {
  bool monotone = true;
  // Indices into the plan's entry list forming a violating cycle, if any.
  std::vector<std::size_t> violating_cycle;
};

struct CycleCheckOptions {
  std::size_t max_support = 64;       // cap for exhaustive short-cycle search
  std::size_t sampled_cycles = 1000;  // longer cycles, seeded sampling
  std::uint64_t seed = 42;
  double tolerance = 1e-9;
};

/// c-cyclical monotonicity check with cost d(x, y)^p: cycles of length 2..4
/// over distinct support points are enumerated exhaustively, longer cycles
/// are sampled. Returns the first violating cycle found.
CycleCheckResult check_cyclical_monotonicity(const TransportPlan& plan, double p,
                                             const CycleCheckOptions& options = {});

/// Weighted l_p cost of the index-aligned coupling:
/// (sum_i a_i d(x_i, x'_i)^p)^{1/p}. Always an upper bound for the
/// Wasserstein distance between the induced measures.
double trivial_coupling_cost(const WeightVector& a, const std::vector<Point>& xs,
                             const std::vector<Point>& xs_prime, double p);

/// theta(mu) * r(a)^{1/p} / 2: below this trivial-coupling cost the
/// index-aligned coupling is optimal. Requires generic weights; +infinity for
/// a single atom.
double local_isometry_threshold(const DiscreteMeasure& mu, double p,
                                std::size_t generic_cap = kDefaultGenericCap);

/// The self-coupling of mu that exchanges the mass of the balls B(x0, r) and
/// B(x1, r) (closed balls) and is the identity elsewhere. Requires both balls
/// to carry mass and r < d(x0, x1) / 2.
TransportPlan swap_coupling(const DiscreteMeasure& mu, const Point& x0, const Point& x1, double r);

/// Coupling of mu and mu' built from an optimal plan by rerouting the common
/// lower bound lambda restricted to the closed ball S = B(center, radius)
/// through the diagonal. lambda must satisfy lambda <= mu and lambda <= mu'
/// atomwise and lambda(S) > 0. The p-th power cost is at most 3 W_p(mu,mu')^p.
TransportPlan lower_bound_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& mu_prime,
                                   const SubMeasure& lambda, const Point& ball_center,
                                   double ball_radius, double p, const SolverOptions& options = {});

}  // namespace transport
