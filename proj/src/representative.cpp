#include "transport/representative.hpp"

#include <algorithm>
#include <cmath>

namespace transport {

namespace {

double pow_cost(double d, double p) {
  if (p == 1.0) return d;
  if (p == 2.0) return d * d;
  return std::pow(d, p);
}

constexpr double kTol = 1e-9;

}  // namespace

ReconstructedMap reconstruct_on_generic(const MeasureMapOracle& oracle, const DiscreteMeasure& mu,
                                        std::size_t partition_cap, std::size_t generic_cap) {
  auto genericity = is_generic(mu.weight_vector(), generic_cap);
  if (!genericity.generic) {
    throw NonGenericError("reconstruct_on_generic requires generic weights",
                          genericity.witness_first, genericity.witness_second);
  }
  DiscreteMeasure image = oracle(mu);
  auto assignment = feasible_pushforward(mu, image, partition_cap);
  if (!assignment) {
    throw NonSplittingError(
        "non-splitting violated: no exact atom partition carries the measure onto its image");
  }
  std::vector<Point> values(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    values[i] = image.atom(assignment->target_index[i]);
  }
  return ReconstructedMap{mu, std::move(values), std::move(*assignment)};
}

LipschitzReport verify_pointwise_lipschitz(const ReconstructedMap& rm, double lipschitz) {
  LipschitzReport report;
  for (std::size_t i = 0; i < rm.base.size(); ++i) {
    for (std::size_t j = i + 1; j < rm.base.size(); ++j) {
      double dx = ground_distance(rm.base.atom(i), rm.base.atom(j));
      double dy = ground_distance(rm.values[i], rm.values[j]);
      if (dy > lipschitz * dx + kTol) report.ok = false;
      if (dx > 0 && dy / dx > report.worst_ratio) {
        report.worst_ratio = dy / dx;
        report.worst_i = i;
        report.worst_j = j;
      }
    }
  }
  return report;
}

CouplingEstimateReport verify_coupling_estimate(const MeasureMapOracle& oracle,
                                                const DiscreteMeasure& mu,
                                                const DiscreteMeasure& mu_prime,
                                                const TransportPlan& eta, double lipschitz,
                                                double p, std::size_t partition_cap) {
  eta.validate();
  if (eta.source != mu || eta.target != mu_prime) {
    throw ValidationError("verify_coupling_estimate: eta does not couple the given measures");
  }
  ReconstructedMap f = reconstruct_on_generic(oracle, mu, partition_cap);
  ReconstructedMap f_prime = reconstruct_on_generic(oracle, mu_prime, partition_cap);

  double lhs_pow = 0.0, rhs_pow = 0.0;
  for (const auto& e : eta.entries) {
    double mass = e.mass.to_double();
    lhs_pow += mass * pow_cost(ground_distance(f.values[e.source], f_prime.values[e.target]), p);
    rhs_pow += mass * pow_cost(ground_distance(mu.atom(e.source), mu_prime.atom(e.target)), p);
  }
  CouplingEstimateReport report;
  report.lhs = std::pow(lhs_pow, 1.0 / p);
  report.rhs = lipschitz * std::pow(rhs_pow, 1.0 / p);
  report.ok = report.lhs <= report.rhs + kTol;
  return report;
}

double estimate_lipschitz_constant(
    const MeasureMapOracle& oracle,
    const std::vector<std::pair<DiscreteMeasure, DiscreteMeasure>>& sample, double p,
    const SolverOptions& options) {
  if (sample.empty()) throw ValidationError("estimate_lipschitz_constant: empty sample");
  double best = 0.0;
  bool any = false;
  for (const auto& [mu, mu_prime] : sample) {
    double denom = wasserstein(mu, mu_prime, p, options).distance;
    if (denom < 1e-12) continue;
    double numer = wasserstein(oracle(mu), oracle(mu_prime), p, options).distance;
    best = std::max(best, numer / denom);
    any = true;
  }
  if (!any) {
    throw ValidationError("estimate_lipschitz_constant: all sample pairs are degenerate");
  }
  return best;
}

DiscreteMeasure mix_with_reference(const DiscreteMeasure& mu, const DiscreteMeasure& lambda,
                                   double eps, double lipschitz, double p, int denominator_bits,
                                   const SolverOptions& options) {
  if (eps <= 0 || lipschitz <= 0) {
    throw ValidationError("mix_with_reference: eps and L must be positive");
  }
  if (denominator_bits < 1 || denominator_bits > 40) {
    throw ValidationError("mix_with_reference: denominator bits out of range");
  }
  double wp = wasserstein(mu, lambda, p, options).distance;
  double alpha_exact =
      wp <= 0 ? 1.0 : std::pow(std::min(1.0, eps / (3.0 * lipschitz * wp)), p);

  // The convexity bound W_p(mu, mu_alpha)^p <= alpha W_p(mu, lambda)^p is
  // monotone in alpha, so rounding down keeps it intact.
  std::int64_t denom = std::int64_t{1} << denominator_bits;
  std::int64_t numer = static_cast<std::int64_t>(std::floor(alpha_exact * static_cast<double>(denom)));
  numer = std::clamp<std::int64_t>(numer, 0, denom);
  Rational alpha(numer, denom);

  DiscreteMeasure mixed = [&]() {
    if (alpha == Rational(1)) return lambda;
    if (alpha.is_zero()) return mu;
    std::vector<Point> atoms;
    std::vector<Rational> weights;
    Rational keep = Rational(1) - alpha;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      atoms.push_back(mu.atom(i));
      weights.push_back(keep * mu.weight(i));
    }
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      atoms.push_back(lambda.atom(i));
      weights.push_back(alpha * lambda.weight(i));
    }
    return DiscreteMeasure(std::move(atoms), std::move(weights));
  }();

  double check = wasserstein(mu, mixed, p, options).distance;
  if (check > eps / (3.0 * lipschitz) + kTol) {
    throw Error("mix_with_reference: verified distance " + std::to_string(check) +
                " exceeds eps/(3L)");
  }
  return mixed;
}

HolderReport holder_stability_check(
    const MeasureMapOracle& oracle, const SubMeasure& lambda, double c, double k,
    const std::vector<std::pair<DiscreteMeasure, DiscreteMeasure>>& pairs, double p,
    double ratio_ceiling, std::size_t partition_cap, const SolverOptions& options) {
  if (c <= 0 || k <= 0) throw ValidationError("holder_stability_check: c and k must be positive");
  HolderReport report;
  for (const auto& [mu, mu_prime] : pairs) {
    if (!lambda.dominated_by(mu) || !lambda.dominated_by(mu_prime)) {
      throw ValidationError("holder_stability_check: a pair is not dominated below by lambda");
    }
    ReconstructedMap f = reconstruct_on_generic(oracle, mu, partition_cap);
    ReconstructedMap f_prime = reconstruct_on_generic(oracle, mu_prime, partition_cap);
    double lip = oracle.lipschitz.value_or(1.0);

    HolderRow row;
    for (std::size_t a = 0; a < lambda.size(); ++a) {
      const Point& x = lambda.atom(a);
      std::size_t i = 0, j = 0;
      for (; i < mu.size(); ++i) {
        if (mu.atom(i) == x) break;
      }
      for (; j < mu_prime.size(); ++j) {
        if (mu_prime.atom(j) == x) break;
      }
      row.sup_deviation =
          std::max(row.sup_deviation, ground_distance(f.values[i], f_prime.values[j]));
    }
    row.wp = wasserstein(mu, mu_prime, p, options).distance;
    double scale = lip * std::pow(row.wp, p / (p + k));
    row.ratio = (row.sup_deviation <= kTol && row.wp <= kTol) ? 0.0 : row.sup_deviation / scale;
    report.max_ratio = std::max(report.max_ratio, row.ratio);
    report.rows.push_back(row);
  }
  report.below_ceiling = report.max_ratio <= ratio_ceiling;
  return report;
}

std::vector<Point> lagrangian_lift(const TransportFamily& family,
                                   const std::vector<Point>& sample) {
  if (sample.empty()) throw ValidationError("lagrangian_lift: empty sample");
  if (!family) throw OracleError("lagrangian_lift: empty transport family");
  // Atoms are sorted before building the empirical measure, so reorderings
  // of the sample produce bitwise-identical measure objects and the lift
  // commutes with permutations exactly.
  std::vector<Point> sorted(sample);
  std::sort(sorted.begin(), sorted.end());
  Rational mass(1, static_cast<std::int64_t>(sample.size()));
  std::vector<Rational> weights(sample.size(), mass);
  DiscreteMeasure empirical(std::move(sorted), std::move(weights));
  std::vector<Point> lifted;
  lifted.reserve(sample.size());
  for (const auto& x : sample) lifted.push_back(family(x, empirical));
  return lifted;
}

LagrangianLift make_lift(TransportFamily family) {
  return [family = std::move(family)](const std::vector<Point>& sample) {
    return lagrangian_lift(family, sample);
  };
}

EquivarianceResult check_mpi_equivariance(
    const LagrangianLift& lift, const std::vector<Point>& sample,
    const std::vector<std::vector<std::size_t>>& permutations) {
  std::vector<Point> base = lift(sample);
  EquivarianceResult result;
  for (std::size_t t = 0; t < permutations.size(); ++t) {
    const auto& sigma = permutations[t];
    if (sigma.size() != sample.size()) {
      throw ValidationError("check_mpi_equivariance: permutation size mismatch");
    }
    std::vector<Point> permuted(sample.size());
    std::vector<Point> expected(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
      permuted[i] = sample[sigma[i]];
      expected[i] = base[sigma[i]];
    }
    if (lift(permuted) != expected) {
      result.ok = false;
      result.failing_permutation = t;
      return result;
    }
  }
  return result;
}

}  // namespace transport
