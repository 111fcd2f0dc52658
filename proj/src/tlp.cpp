#include "transport/tlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace transport {

namespace {

double pow_cost(double d, double p) {
  if (p == 1.0) return d;
  if (p == 2.0) return d * d;
  return std::pow(d, p);
}

}  // namespace

LabeledMeasure::LabeledMeasure(DiscreteMeasure base_measure, std::vector<Point> label_points)
    : base(std::move(base_measure)), labels(std::move(label_points)) {
  if (labels.size() != base.size()) {
    throw ValidationError("labeled measure: one label per atom is required (" +
                          std::to_string(labels.size()) + " labels for " +
                          std::to_string(base.size()) + " atoms)");
  }
  for (const auto& y : labels) {
    if (y.dim() != labels.front().dim()) {
      throw ValidationError("labeled measure: labels have mixed dimensions");
    }
  }
}

GraphMeasure embed(const LabeledMeasure& lm) {
  std::vector<Point> atoms;
  atoms.reserve(lm.base.size());
  for (std::size_t i = 0; i < lm.base.size(); ++i) {
    std::vector<double> coords = lm.base.atom(i).coords;
    coords.insert(coords.end(), lm.labels[i].coords.begin(), lm.labels[i].coords.end());
    atoms.emplace_back(std::move(coords));
  }
  GraphMeasure g{DiscreteMeasure(std::move(atoms), lm.base.weights()), lm.base.dim()};
  return g;
}

bool graph_property_check(const DiscreteMeasure& product, std::size_t input_dim) {
  if (input_dim == 0 || input_dim >= product.dim()) {
    throw ValidationError("graph_property_check: input dimension must split the product space");
  }
  auto first_block = [&](std::size_t i) {
    return std::vector<double>(product.atom(i).coords.begin(),
                               product.atom(i).coords.begin() + static_cast<long>(input_dim));
  };
  std::map<std::vector<double>, std::size_t> seen;
  for (std::size_t i = 0; i < product.size(); ++i) {
    auto [it, inserted] = seen.emplace(first_block(i), i);
    if (!inserted) {
      const auto& other = product.atom(it->second).coords;
      const auto& mine = product.atom(i).coords;
      if (!std::equal(other.begin() + static_cast<long>(input_dim), other.end(),
                      mine.begin() + static_cast<long>(input_dim))) {
        return false;
      }
    }
  }
  return true;
}

namespace {

struct ProductCost {
  const DiscreteMeasure& a;
  const DiscreteMeasure& b;
  std::size_t input_dim;
  double p;

  double operator()(std::size_t i, std::size_t j) const {
    const auto& xa = a.atom(i).coords;
    const auto& xb = b.atom(j).coords;
    double sx = 0.0, sy = 0.0;
    for (std::size_t k = 0; k < input_dim; ++k) {
      double d = xa[k] - xb[k];
      sx += d * d;
    }
    for (std::size_t k = input_dim; k < xa.size(); ++k) {
      double d = xa[k] - xb[k];
      sy += d * d;
    }
    return pow_cost(std::sqrt(sx), p) + pow_cost(std::sqrt(sy), p);
  }
};

}  // namespace

OtResult product_wasserstein(const DiscreteMeasure& gamma, const DiscreteMeasure& gamma_prime,
                             std::size_t input_dim, double p, const SolverOptions& options) {
  if (p < 1.0) throw ValidationError("product_wasserstein: exponent p must be >= 1");
  if (gamma.dim() != gamma_prime.dim()) {
    throw ValidationError("product_wasserstein: dimensions differ");
  }
  if (input_dim == 0 || input_dim >= gamma.dim()) {
    throw ValidationError("product_wasserstein: input dimension must split the product space");
  }
  if (gamma.size() + gamma_prime.size() > options.max_total_atoms) {
    throw CapacityError("product_wasserstein: size cap exceeded");
  }
  ProductCost cost{gamma, gamma_prime, input_dim, p};
  auto entries = solve_transport(gamma.weights(), gamma_prime.weights(), cost, options.tolerance);
  double total = 0.0;
  for (const auto& e : entries) total += e.mass.to_double() * cost(e.source, e.target);
  OtResult result{total, std::pow(std::max(total, 0.0), 1.0 / p),
                  TransportPlan(gamma, gamma_prime, std::move(entries))};
  result.plan.validate();
  return result;
}

OtResult tlp_distance(const LabeledMeasure& lm, const LabeledMeasure& lm_prime, double p,
                      const SolverOptions& options) {
  if (lm.base.dim() != lm_prime.base.dim() || lm.label_dim() != lm_prime.label_dim()) {
    throw ValidationError("tlp_distance: dimension mismatch between the two pairs");
  }
  GraphMeasure g = embed(lm);
  GraphMeasure g_prime = embed(lm_prime);
  // Base atoms are pairwise distinct, so the embedding is atom-for-atom and
  // the optimal plan between graph measures couples the bases directly.
  OtResult product = product_wasserstein(g.product, g_prime.product, g.input_dim, p, options);
  TransportPlan base_plan(lm.base, lm_prime.base, product.plan.entries);
  base_plan.validate();
  return OtResult{product.cost, product.distance, std::move(base_plan)};
}

std::vector<std::pair<double, double>> equidispersivity_profile(const LabeledMeasure& lm, double p,
                                                                const std::vector<double>& budgets,
                                                                const SolverOptions& options) {
  if (p < 1.0) throw ValidationError("equidispersivity_profile: exponent p must be >= 1");
  const std::size_t m = lm.base.size();
  if (2 * m > options.max_total_atoms) {
    throw CapacityError("equidispersivity_profile: size cap exceeded");
  }

  std::vector<double> cx(m * m), cy(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      cx[i * m + j] = pow_cost(ground_distance(lm.base.atom(i), lm.base.atom(j)), p);
      cy[i * m + j] = pow_cost(ground_distance(lm.labels[i], lm.labels[j]), p);
    }
  }
  const auto& weights = lm.base.weights();

  // Inner oracle: maximize sum eta * (cy - t*cx) over the transportation
  // polytope. Shifting every cell by a constant only shifts the value (total
  // mass is one), so costs are made nonnegative for the min solver.
  auto maximize = [&](double t, double& obj_y, double& obj_x) {
    double max_cell = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < m * m; ++a) {
      max_cell = std::max(max_cell, cy[a] - t * cx[a]);
    }
    auto entries = solve_transport(
        weights, weights,
        [&](std::size_t i, std::size_t j) { return max_cell - (cy[i * m + j] - t * cx[i * m + j]); },
        options.tolerance);
    obj_y = 0.0;
    obj_x = 0.0;
    for (const auto& e : entries) {
      obj_y += e.mass.to_double() * cy[e.source * m + e.target];
      obj_x += e.mass.to_double() * cx[e.source * m + e.target];
    }
  };

  // The budget row is dualized: phi(t) = max_eta [cy.eta - t(cx.eta - B)] is
  // a convex piecewise-linear function of t >= 0 whose minimum equals the LP
  // value. Each oracle call yields one line; the minimum lies where a line of
  // negative slope meets one of nonnegative slope (Kelley cutting plane,
  // finitely many vertices).
  auto lp_value = [&](double budget_pow) -> double {
    double y0, x0;
    maximize(0.0, y0, x0);
    if (x0 <= budget_pow) return y0;  // budget inactive

    struct Line {
      double y, x;  // phi contribution: y + t*(B - x)
      double at(double t, double b) const { return y + t * (b - x); }
    };
    Line lo{y0, x0};
    // Slope is positive once t exceeds every cy/cx ratio: the diagonal
    // (zero x-cost, zero y-cost) then dominates.
    double t_hi = 1.0;
    for (std::size_t a = 0; a < m * m; ++a) {
      if (cx[a] > 0) t_hi = std::max(t_hi, cy[a] / cx[a]);
    }
    t_hi = 2.0 * t_hi + 1.0;
    double y1, x1;
    maximize(t_hi, y1, x1);
    Line hi{y1, x1};
    if (x1 > budget_pow) {
      // Even the flattest vertex exceeds the budget; with a feasible diagonal
      // this cannot happen, but guard against drift.
      return y1;
    }

    double best_upper = hi.at(t_hi, budget_pow);  // any phi evaluation bounds the value
    for (int iter = 0; iter < 80; ++iter) {
      double denom = hi.x - lo.x;
      if (denom == 0.0) break;
      double t_cross = (hi.y - lo.y) / denom;
      if (!(t_cross >= 0.0) || !std::isfinite(t_cross)) break;
      double bound = lo.at(t_cross, budget_pow);
      double yc, xc;
      maximize(t_cross, yc, xc);
      Line fresh{yc, xc};
      double value = fresh.at(t_cross, budget_pow);
      best_upper = std::min(best_upper, value);
      if (value <= bound + 1e-12 * std::max(1.0, std::abs(bound))) {
        return value;
      }
      if (xc > budget_pow) {
        lo = fresh;
      } else {
        hi = fresh;
      }
    }
    return best_upper;
  };

  std::vector<std::pair<double, double>> profile;
  profile.reserve(budgets.size());
  for (double delta : budgets) {
    if (delta < 0) throw ValidationError("equidispersivity_profile: budgets must be nonnegative");
    double value;
    if (delta == 0.0) {
      // Atoms are pairwise distinct, so zero input cost forces the diagonal.
      value = 0.0;
    } else {
      value = std::pow(std::max(lp_value(pow_cost(delta, p)), 0.0), 1.0 / p);
    }
    profile.emplace_back(delta, value);
  }
  return profile;
}

StagnationReport stagnating_convergence_check(const std::vector<LabeledMeasure>& sequence,
                                              const LabeledMeasure& limit, double p,
                                              double input_threshold, double label_threshold,
                                              const SolverOptions& options) {
  StagnationReport report;
  for (const auto& lm : sequence) {
    OtResult ot = wasserstein(lm.base, limit.base, p, options);
    double label_cost = 0.0;
    for (const auto& e : ot.plan.entries) {
      label_cost +=
          e.mass.to_double() * pow_cost(ground_distance(lm.labels[e.source], limit.labels[e.target]), p);
    }
    report.rows.push_back({ot.distance, std::pow(label_cost, 1.0 / p)});
  }
  if (!report.rows.empty()) {
    report.input_converged = report.rows.back().input_cost <= input_threshold;
    report.labels_converged = report.rows.back().label_cost <= label_threshold;
  }
  return report;
}

double hausdorff_distance(const std::vector<Point>& a, const std::vector<Point>& b) {
  if (a.empty() || b.empty()) {
    throw ValidationError("hausdorff_distance: point sets must be nonempty");
  }
  auto one_sided = [](const std::vector<Point>& from, const std::vector<Point>& to) {
    double worst = 0.0;
    for (const auto& x : from) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& y : to) nearest = std::min(nearest, ground_distance(x, y));
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

}  // namespace transport
