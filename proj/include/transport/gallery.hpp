#pragma once

#include <functional>

#include "transport/representative.hpp"

namespace transport {
namespace gallery {

/// A one-dimensional interval split into equal cells with atoms at the cell
/// midpoints.
struct GridDiscretizer {
  double lo = 0.0;
  double hi = 1.0;
  int cells = 256;

  DiscreteMeasure uniform() const;

  /// Atoms weighted by `density` at the midpoints, rationalized to dyadic
  /// weights with `denominator_bits` bits and renormalized exactly to total
  /// mass one.
  DiscreteMeasure with_density(const std::function<double(double)>& density,
                               int denominator_bits = 20) const;
};

/// 1-periodic tent map g(x) = 2 min(frac(x), 1 - frac(x)); g pushes the unit
/// Lebesgue measure to itself and is 2-Lipschitz.
double periodic_tent(double x);

/// F(mu) = g_# mu for a fixed pointwise map; collisions merge exactly.
MeasureMapOracle pushforward_oracle(std::function<Point(const Point&)> g, double p,
                                    std::string name, std::optional<double> lipschitz);

/// Convenience wrapper for 1-d maps.
MeasureMapOracle pushforward_oracle_1d(std::function<double(double)> g, double p, std::string name,
                                       std::optional<double> lipschitz);

/// The transport family behind periodic_scaling_oracle:
/// f(x, mu) = g(x / W_p(mu, lambda)^alpha) away from lambda, identity at
/// lambda (exact measure equality with the grid reference).
TransportFamily periodic_scaling_family(double alpha, DiscreteMeasure lambda_ref, double p);
MeasureMapOracle periodic_scaling_oracle(double alpha, DiscreteMeasure lambda_ref, double p);

/// f(x, mu) = tanh(x / W_p(mu, lambda)) away from lambda; at lambda the
/// image collapses onto (delta_{-1} + delta_{+1}) / 2.
TransportFamily tanh_family(DiscreteMeasure lambda_ref, double p);
MeasureMapOracle tanh_oracle(DiscreteMeasure lambda_ref, double p);

/// s(mu) = int x dmu / int |x| dmu on measures over [-1, 1] (s = 0 at
/// delta_0); f(x, mu) = s(mu) x. The induced F is 3-Lipschitz for W_1.
double sign_ratio(const DiscreteMeasure& mu);
TransportFamily sign_ratio_family();
MeasureMapOracle sign_ratio_oracle();

/// mu_n^{+-} = (1/n) delta_1 + (1 - 1/n) delta_{+-1/sqrt(n)} for n = 3..n_max.
/// Every element is generic.
struct WitnessSequences {
  std::vector<DiscreteMeasure> plus;
  std::vector<DiscreteMeasure> minus;
};
WitnessSequences discontinuity_witness_sequences(int n_max);

/// The constant map onto (delta_0 + delta_1) / 2: the basic obstruction to
/// any pushforward representation.
MeasureMapOracle splitting_counterexample_oracle();

}  // namespace gallery
}  // namespace transport
