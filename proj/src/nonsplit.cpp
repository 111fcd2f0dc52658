#include "transport/nonsplit.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace transport {

namespace {

struct PartitionSearch {
  const std::vector<Rational>& weights;  // source weights, original order
  std::vector<std::size_t> order;        // atoms in decreasing weight order
  std::vector<Rational> residual;        // remaining capacity per target
  std::vector<std::size_t> choice;       // target chosen per position in `order`
  std::vector<AtomAssignment>& found;
  std::size_t limit;
  std::unordered_set<std::string> dead_states;  // memoized infeasible states

  // Atoms are consumed in a fixed order, so the position together with the
  // multiset of residuals identifies the subproblem exactly.
  std::string state_key(std::size_t pos) const {
    std::vector<Rational> sorted(residual);
    std::sort(sorted.begin(), sorted.end());
    std::string key;
    key.reserve(8 + 16 * sorted.size());
    auto append = [&key](std::int64_t v) {
      key.append(reinterpret_cast<const char*>(&v), sizeof(v));
    };
    append(static_cast<std::int64_t>(pos));
    for (const auto& r : sorted) {
      append(r.num());
      append(r.den());
    }
    return key;
  }

  bool search(std::size_t pos) {
    if (pos == order.size()) {
      AtomAssignment assignment;
      assignment.target_index.resize(order.size());
      for (std::size_t k = 0; k < order.size(); ++k) {
        assignment.target_index[order[k]] = choice[k];
      }
      found.push_back(std::move(assignment));
      return found.size() >= limit;
    }
    std::string key = state_key(pos);
    if (dead_states.count(key)) return false;

    const Rational& w = weights[order[pos]];
    const std::size_t found_before = found.size();
    for (std::size_t t = 0; t < residual.size(); ++t) {
      if (residual[t] < w) continue;
      // Equal residuals admit symmetric completions; when only existence
      // matters the later twins are skipped.
      if (limit == 1) {
        bool twin = false;
        for (std::size_t s = 0; s < t && !twin; ++s) twin = (residual[s] == residual[t]);
        if (twin) continue;
      }
      residual[t] -= w;
      choice[pos] = t;
      bool stop = search(pos + 1);
      residual[t] += w;
      if (stop) return true;
    }
    if (found.size() == found_before) dead_states.insert(std::move(key));
    return false;
  }
};

std::vector<AtomAssignment> run_search(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                       std::size_t limit, std::size_t cap) {
  if (mu.size() > cap) {
    throw CapacityError("feasible_pushforward: " + std::to_string(mu.size()) +
                        " source atoms exceed the cap of " + std::to_string(cap));
  }
  std::vector<AtomAssignment> found;
  PartitionSearch search{mu.weights(), {}, nu.weights(), {}, found, limit, {}};
  search.order.resize(mu.size());
  std::iota(search.order.begin(), search.order.end(), std::size_t{0});
  std::stable_sort(search.order.begin(), search.order.end(), [&](std::size_t a, std::size_t b) {
    return mu.weight(b) < mu.weight(a);
  });
  search.choice.resize(mu.size());
  search.search(0);
  return found;
}

}  // namespace

std::optional<AtomAssignment> feasible_pushforward(const DiscreteMeasure& mu,
                                                   const DiscreteMeasure& nu, std::size_t cap) {
  auto found = run_search(mu, nu, 1, cap);
  if (found.empty()) return std::nullopt;
  return found.front();
}

std::vector<AtomAssignment> enumerate_pushforward_assignments(const DiscreteMeasure& mu,
                                                              const DiscreteMeasure& nu,
                                                              std::size_t limit, std::size_t cap) {
  if (limit == 0) return {};
  return run_search(mu, nu, limit, cap);
}

FeasibilityReport feasible_all_pairs(const std::vector<DiscreteMeasure>& inputs,
                                     const MeasureMapOracle& oracle, std::size_t cap) {
  FeasibilityReport report;
  bool all = !inputs.empty();
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    FeasibilityRow row;
    try {
      DiscreteMeasure image = oracle(inputs[k]);
      auto assignment = feasible_pushforward(inputs[k], image, cap);
      if (assignment) {
        row.status = FeasibilityStatus::kFeasible;
        row.assignment = std::move(assignment);
      } else {
        row.status = FeasibilityStatus::kInfeasible;
        all = false;
      }
    } catch (const CapacityError& e) {
      row.status = FeasibilityStatus::kOverCap;
      row.detail = e.what();
      all = false;
    } catch (const OracleError& e) {
      row.status = FeasibilityStatus::kOracleError;
      row.detail = "input " + std::to_string(k) + ": " + e.what();
      all = false;
    }
    report.rows.push_back(std::move(row));
  }
  report.all_feasible = all;
  return report;
}

}  // namespace transport
