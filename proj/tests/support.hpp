#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "transport/measure.hpp"
#include "transport/suite.hpp"

namespace testsupport {

using transport::DiscreteMeasure;
using transport::Point;
using transport::Rational;

inline double unif(std::uint64_t& state) { return transport::suite::unit_uniform(state); }

inline std::vector<Point> random_points_1d(std::uint64_t& state, std::size_t count, double lo,
                                           double hi) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(Point{lo + (hi - lo) * unif(state)});
  return out;
}

inline std::vector<Rational> random_weights(std::uint64_t& state, std::size_t count) {
  std::vector<std::int64_t> raw(count);
  std::int64_t total = 0;
  for (auto& r : raw) {
    r = 1 + static_cast<std::int64_t>(unif(state) * 12);
    total += r;
  }
  std::vector<Rational> weights;
  for (auto r : raw) weights.emplace_back(r, total);
  return weights;
}

inline DiscreteMeasure random_measure_1d(std::uint64_t& state, std::size_t count, double lo,
                                         double hi) {
  return DiscreteMeasure(random_points_1d(state, count, lo, hi), random_weights(state, count));
}

/// Minimal coupling cost over the transportation polytope for an arbitrary
/// cost matrix, by enumerating spanning-tree vertices with exact rational
/// flows. Independent of the production solver; intended for tiny instances.
inline double brute_force_min_cost(const std::vector<Rational>& a, const std::vector<Rational>& b,
                                   const std::function<double(std::size_t, std::size_t)>& cost) {
  const std::size_t m = a.size(), n = b.size();
  const std::size_t arcs = m * n, tree = m + n - 1;
  std::vector<std::size_t> pick(tree);
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  auto advance = [&]() {
    std::size_t k = tree;
    while (k > 0) {
      --k;
      if (pick[k] + (tree - k) < arcs) {
        ++pick[k];
        for (std::size_t t = k + 1; t < tree; ++t) pick[t] = pick[t - 1] + 1;
        return true;
      }
    }
    return false;
  };
  do {
    std::vector<int> degree(m + n, 0);
    for (std::size_t arc : pick) {
      ++degree[arc / n];
      ++degree[m + arc % n];
    }
    std::vector<Rational> res_a(a), res_b(b);
    std::vector<std::size_t> remaining(pick.begin(), pick.end());
    double total = 0.0;
    bool ok = true;
    while (!remaining.empty() && ok) {
      bool progressed = false;
      for (std::size_t k = 0; k < remaining.size(); ++k) {
        std::size_t arc = remaining[k];
        std::size_t i = arc / n, j = arc % n;
        Rational flow;
        if (degree[i] == 1) {
          flow = res_a[i];
          res_a[i] = Rational(0);
          res_b[j] -= flow;
        } else if (degree[m + j] == 1) {
          flow = res_b[j];
          res_b[j] = Rational(0);
          res_a[i] -= flow;
        } else {
          continue;
        }
        if (flow.is_negative() || res_a[i].is_negative() || res_b[j].is_negative()) ok = false;
        total += flow.to_double() * cost(i, j);
        --degree[i];
        --degree[m + j];
        remaining[k] = remaining.back();
        remaining.pop_back();
        progressed = true;
        break;
      }
      if (!progressed) ok = false;
    }
    if (!ok) continue;
    for (const auto& r : res_a) ok = ok && r.is_zero();
    for (const auto& r : res_b) ok = ok && r.is_zero();
    if (ok) best = std::min(best, total);
  } while (advance());
  return best;
}

}  // namespace testsupport
