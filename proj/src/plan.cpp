#include "transport/plan.hpp"

#include <cmath>

#include "transport/errors.hpp"

namespace transport {

TransportPlan::TransportPlan(DiscreteMeasure src, DiscreteMeasure tgt, std::vector<PlanEntry> e)
    : source(std::move(src)), target(std::move(tgt)), entries(std::move(e)) {}

void TransportPlan::validate() const {
  std::vector<Rational> row(source.size()), col(target.size());
  for (const auto& entry : entries) {
    if (entry.source >= source.size() || entry.target >= target.size()) {
      throw ValidationError("plan entry indexes outside the marginal supports");
    }
    if (entry.mass.is_negative() || entry.mass.is_zero()) {
      throw ValidationError("plan masses must be strictly positive");
    }
    row[entry.source] += entry.mass;
    col[entry.target] += entry.mass;
  }
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (row[i] != source.weight(i)) {
      throw ValidationError("plan row sum differs from the source weight at atom " +
                            std::to_string(i));
    }
  }
  for (std::size_t j = 0; j < target.size(); ++j) {
    if (col[j] != target.weight(j)) {
      throw ValidationError("plan column sum differs from the target weight at atom " +
                            std::to_string(j));
    }
  }
}

double TransportPlan::ground_cost(double p) const {
  double total = 0.0;
  for (const auto& entry : entries) {
    double d = ground_distance(source.atom(entry.source), target.atom(entry.target));
    total += entry.mass.to_double() * std::pow(d, p);
  }
  return total;
}

}  // namespace transport
