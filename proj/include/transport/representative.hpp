#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "transport/nonsplit.hpp"
#include "transport/oracle.hpp"
#include "transport/solver.hpp"

namespace transport {

/// A map recovered on the support of a generic measure: pushing `base`
/// forward through `values` reproduces the oracle image exactly.
struct ReconstructedMap {
  DiscreteMeasure base;
  std::vector<Point> values;
  AtomAssignment assignment;
};

/// Values of a transport representative f(x, mu) as a plain callable.
using TransportFamily = std::function<Point(const Point&, const DiscreteMeasure&)>;

/// A transformation of finite uniform samples (random variables on
/// {1..N} with equal mass).
using LagrangianLift = std::function<std::vector<Point>(const std::vector<Point>&)>;

/// Recovers the unique map carrying mu onto F(mu): each image atom's weight
/// is an exact subset sum of the (generic) source weights, and genericity
/// makes the subset unique. Refuses non-generic weights rather than
/// perturbing them; callers wanting a nearby generic measure use
/// nearest_generic explicitly.
ReconstructedMap reconstruct_on_generic(const MeasureMapOracle& oracle, const DiscreteMeasure& mu,
                                        std::size_t partition_cap = kDefaultPartitionCap,
                                        std::size_t generic_cap = kDefaultGenericCap);

struct LipschitzReport {
  bool ok = true;
  double worst_ratio = 0.0;  // max over atom pairs of d_Y / d_X
  std::size_t worst_i = 0;
  std::size_t worst_j = 0;
};

/// Checks d_Y(values_i, values_j) <= L d_X(x_i, x_j) + 1e-9 over all pairs.
LipschitzReport verify_pointwise_lipschitz(const ReconstructedMap& rm, double lipschitz);

struct CouplingEstimateReport {
  bool ok = false;
  double lhs = 0.0;  // ||d_Y(f(x,mu), f'(x',mu'))||_{L^p(eta)}
  double rhs = 0.0;  // L ||d_X(x, x')||_{L^p(eta)}
};

/// Reconstructs the maps on both generic marginals of eta and evaluates the
/// coupling estimate lhs <= rhs + 1e-9.
CouplingEstimateReport verify_coupling_estimate(const MeasureMapOracle& oracle,
                                                const DiscreteMeasure& mu,
                                                const DiscreteMeasure& mu_prime,
                                                const TransportPlan& eta, double lipschitz,
                                                double p,
                                                std::size_t partition_cap = kDefaultPartitionCap);

/// max over sample pairs of W_p(F(mu), F(mu')) / W_p(mu, mu'); a certified
/// lower bound for the Lipschitz constant. Pairs closer than 1e-12 are
/// skipped; all pairs degenerate is an error.
double estimate_lipschitz_constant(const MeasureMapOracle& oracle,
                                   const std::vector<std::pair<DiscreteMeasure, DiscreteMeasure>>& sample,
                                   double p, const SolverOptions& options = {});

/// mu_alpha = (1 - alpha) mu + alpha lambda with
/// alpha = min(1, eps / (3 L W_p(mu, lambda)))^p, alpha rounded to a dyadic
/// rational with `denominator_bits` bits. The postcondition
/// W_p(mu, mu_alpha) <= eps / (3L) + 1e-9 is verified by a solver call.
DiscreteMeasure mix_with_reference(const DiscreteMeasure& mu, const DiscreteMeasure& lambda,
                                   double eps, double lipschitz, double p,
                                   int denominator_bits = 20, const SolverOptions& options = {});

struct HolderRow {
  double sup_deviation = 0.0;  // sup over supp(lambda) of d_Y(f(x,mu), f(x,mu'))
  double wp = 0.0;             // W_p(mu, mu')
  double ratio = 0.0;          // sup / (L * W_p^{p/(p+k)}), 0 when both vanish
};

struct HolderReport {
  std::vector<HolderRow> rows;
  double max_ratio = 0.0;  // an empirical constant, not a proven one
  bool below_ceiling = true;
};

/// For pairs dominated below by lambda, compares the uniform deviation of the
/// reconstructed maps on supp(lambda) against L W_p(mu, mu')^{p/(p+k)}.
/// `c` and `k` describe the assumed lower bound lambda(B(x, r)) >= c r^k and
/// are reported, not verified.
HolderReport holder_stability_check(const MeasureMapOracle& oracle, const SubMeasure& lambda,
                                    double c, double k,
                                    const std::vector<std::pair<DiscreteMeasure, DiscreteMeasure>>& pairs,
                                    double p, double ratio_ceiling,
                                    std::size_t partition_cap = kDefaultPartitionCap,
                                    const SolverOptions& options = {});

/// Y(omega) = f(X(omega), mu_X) where mu_X is the empirical measure of X
/// (duplicates merged, weights summed).
std::vector<Point> lagrangian_lift(const TransportFamily& family, const std::vector<Point>& sample);

/// The canonical lift induced by a transport family.
LagrangianLift make_lift(TransportFamily family);

struct EquivarianceResult {
  bool ok = true;
  std::size_t failing_permutation = 0;
};

/// Verifies lift(X o sigma) == lift(X) o sigma with exact coordinate
/// equality for every supplied permutation.
EquivarianceResult check_mpi_equivariance(const LagrangianLift& lift,
                                          const std::vector<Point>& sample,
                                          const std::vector<std::vector<std::size_t>>& permutations);

}  // namespace transport
