#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "transport/solver.hpp"

namespace transport {

/// A measure together with one output point per atom: the values of a map on
/// the support.
struct LabeledMeasure {
  DiscreteMeasure base;
  std::vector<Point> labels;

  LabeledMeasure(DiscreteMeasure base_measure, std::vector<Point> label_points);

  std::size_t label_dim() const { return labels.empty() ? 0 : labels.front().dim(); }
};

/// The product-space measure sum a_i delta_{(x_i, y_i)}. The first-coordinate
/// projection recovers the base exactly and each input atom carries exactly
/// one label.
struct GraphMeasure {
  DiscreteMeasure product;
  std::size_t input_dim = 0;
};

GraphMeasure embed(const LabeledMeasure& lm);

/// True iff no first coordinate of the product-space measure carries two
/// distinct second coordinates; the finite criterion for being concentrated
/// on the graph of a map.
bool graph_property_check(const DiscreteMeasure& product, std::size_t input_dim);

/// Wasserstein distance between measures on a product space with the l_p
/// product ground metric (d_X^p + d_Y^p)^{1/p}, where the first `input_dim`
/// coordinates form the X block.
OtResult product_wasserstein(const DiscreteMeasure& gamma, const DiscreteMeasure& gamma_prime,
                             std::size_t input_dim, double p, const SolverOptions& options = {});

/// The TL_p distance between (mu, f) and (mu', f'): the Wasserstein distance
/// between the embedded graph measures. The returned plan couples the base
/// measures.
OtResult tlp_distance(const LabeledMeasure& lm, const LabeledMeasure& lm_prime, double p,
                      const SolverOptions& options = {});

/// For each budget delta: the largest label transport cost
/// (sum eta_{ij} d_Y(f_i, f_j)^p)^{1/p} over self-couplings eta of the base
/// whose input cost satisfies sum eta_{ij} d_X(x_i, x_j)^p <= delta^p.
/// Solved exactly as a linear program over the transportation polytope with
/// one budget row. Nondecreasing in delta.
std::vector<std::pair<double, double>> equidispersivity_profile(const LabeledMeasure& lm, double p,
                                                                const std::vector<double>& budgets,
                                                                const SolverOptions& options = {});

struct StagnationRow {
  double input_cost = 0.0;  // ||d_X(x, x')||_{L^p(eta_n)} along the optimal plan
  double label_cost = 0.0;  // ||d_Y(f_n(x), f(x'))||_{L^p(eta_n)}
};

struct StagnationReport {
  std::vector<StagnationRow> rows;
  // Whether the final row falls below the supplied thresholds.
  bool input_converged = false;
  bool labels_converged = false;
};

/// Couples each element of the sequence with the limit through an optimal
/// plan between the bases and reports both cost components.
StagnationReport stagnating_convergence_check(const std::vector<LabeledMeasure>& sequence,
                                              const LabeledMeasure& limit, double p,
                                              double input_threshold, double label_threshold,
                                              const SolverOptions& options = {});

/// max(max_a min_b d(a, b), max_b min_a d(a, b)) over finite point sets.
double hausdorff_distance(const std::vector<Point>& a, const std::vector<Point>& b);

}  // namespace transport
