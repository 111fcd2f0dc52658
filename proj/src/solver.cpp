#include "transport/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <utility>

namespace transport {

namespace {

double pow_cost(double d, double p) {
  if (p == 1.0) return d;
  if (p == 2.0) return d * d;
  return std::pow(d, p);
}

/// Primal network simplex specialized to the complete bipartite
/// transportation problem. Supplies and demands are positive integers with
/// equal totals (exact rational masses scaled by a common denominator), costs
/// are doubles. The basis is kept strongly feasible: the leaving arc is the
/// last blocking arc met when the cycle is traversed in its own orientation
/// starting from the apex, which rules out cycling under degeneracy. Pricing
/// is deterministic: fixed-size blocks scanned from a cursor, most negative
/// reduced cost wins, ties resolved by the smallest arc id, i.e. the
/// lexicographically smallest (i, j).
class TransportSimplex {
 public:
  TransportSimplex(std::size_t m, std::size_t n, const std::vector<double>& cost,
                   const std::vector<long long>& supply, const std::vector<long long>& demand,
                   double tolerance)
      : m_(m), n_(n), num_nodes_(m + n), root_(m + n), cost_(cost), tolerance_(tolerance) {
    double max_abs = 0.0;
    for (double c : cost_) max_abs = std::max(max_abs, std::abs(c));
    cost_scale_ = std::max(1.0, max_abs);
    big_ = (max_abs + 1.0) * static_cast<double>(num_nodes_ + 1);

    parent_.assign(num_nodes_ + 1, root_);
    dir_.assign(num_nodes_ + 1, 0);
    flow_.assign(num_nodes_ + 1, 0);
    depth_.assign(num_nodes_ + 1, 1);
    pi_.assign(num_nodes_ + 1, 0.0);
    children_.assign(num_nodes_ + 1, {});

    parent_[root_] = root_;
    depth_[root_] = 0;
    for (std::size_t u = 0; u < num_nodes_; ++u) {
      children_[root_].push_back(static_cast<int>(u));
      if (u < m_) {
        dir_[u] = +1;  // source -> root
        flow_[u] = supply[u];
        pi_[u] = -big_;
      } else {
        dir_[u] = -1;  // root -> sink
        flow_[u] = demand[u - m_];
        pi_[u] = big_;
      }
    }
  }

  void run() {
    const std::size_t num_arcs = m_ * n_;
    const std::size_t block = std::max<std::size_t>(
        64, static_cast<std::size_t>(std::sqrt(static_cast<double>(num_arcs))));
    const double eps_enter = 1e-13 * cost_scale_;
    const std::size_t pivot_guard = 10000 + 400 * (num_nodes_ + 1) * 8;

    std::size_t cursor = 0;
    std::size_t pivots = 0;
    while (true) {
      long long entering = find_entering(cursor, block, eps_enter);
      if (entering < 0) break;
      pivot(static_cast<std::size_t>(entering));
      if (++pivots > pivot_guard) {
        throw Error("network simplex exceeded its pivot budget; instance is ill-conditioned");
      }
    }
    certify();
  }

  /// Positive basic flows on real arcs, as (i, j, scaled mass).
  std::vector<std::tuple<std::size_t, std::size_t, long long>> basic_flows() const {
    std::vector<std::tuple<std::size_t, std::size_t, long long>> out;
    for (std::size_t u = 0; u < num_nodes_; ++u) {
      if (parent_[u] == static_cast<int>(root_) || flow_[u] <= 0) continue;
      std::size_t a = u, b = static_cast<std::size_t>(parent_[u]);
      std::size_t i = std::min(a, b);
      std::size_t j = std::max(a, b) - m_;
      out.emplace_back(i, j, flow_[u]);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  double reduced_cost(std::size_t arc) const {
    std::size_t i = arc / n_;
    std::size_t j = arc % n_;
    return cost_[arc] + pi_[i] - pi_[m_ + j];
  }

  long long find_entering(std::size_t& cursor, std::size_t block, double eps) const {
    const std::size_t num_arcs = m_ * n_;
    std::size_t scanned = 0;
    while (scanned < num_arcs) {
      std::size_t len = std::min(block, num_arcs - scanned);
      long long best = -1;
      double best_rc = -eps;
      for (std::size_t k = 0; k < len; ++k) {
        std::size_t a = cursor + k;
        if (a >= num_arcs) a -= num_arcs;
        double rc = reduced_cost(a);
        if (rc < best_rc) {
          best_rc = rc;
          best = static_cast<long long>(a);
        }
      }
      cursor += len;
      if (cursor >= num_arcs) cursor -= num_arcs;
      scanned += len;
      if (best >= 0) return best;
    }
    return -1;
  }

  void pivot(std::size_t arc) {
    const std::size_t u = arc / n_;         // tail (source)
    const std::size_t v = m_ + arc % n_;    // head (sink)
    const double rc = reduced_cost(arc);

    // Apex of the cycle formed by the entering arc and the tree path.
    std::size_t a = u, b = v;
    while (a != b) {
      if (depth_[a] >= depth_[b]) {
        a = static_cast<std::size_t>(parent_[a]);
      } else {
        b = static_cast<std::size_t>(parent_[b]);
      }
    }
    const std::size_t join = a;

    // Bottleneck. Flow enters at v and travels up to the apex, and comes
    // down from the apex to u. Tail side is scanned with a strict
    // comparison, head side with a non-strict one: this selects the last
    // blocking arc in cycle orientation and keeps the basis strongly
    // feasible.
    long long delta = std::numeric_limits<long long>::max();
    std::size_t out_node = num_nodes_ + 1;
    bool out_on_tail_side = true;
    for (std::size_t x = u; x != join; x = static_cast<std::size_t>(parent_[x])) {
      if (dir_[x] == +1 && flow_[x] < delta) {
        delta = flow_[x];
        out_node = x;
        out_on_tail_side = true;
      }
    }
    for (std::size_t x = v; x != join; x = static_cast<std::size_t>(parent_[x])) {
      if (dir_[x] == -1 && flow_[x] <= delta) {
        delta = flow_[x];
        out_node = x;
        out_on_tail_side = false;
      }
    }
    if (out_node > num_nodes_) {
      throw Error("network simplex: unbounded pivot on a bounded polytope");
    }

    // Push delta around the cycle.
    if (delta > 0) {
      for (std::size_t x = u; x != join; x = static_cast<std::size_t>(parent_[x])) {
        flow_[x] += (dir_[x] == -1) ? delta : -delta;
      }
      for (std::size_t x = v; x != join; x = static_cast<std::size_t>(parent_[x])) {
        flow_[x] += (dir_[x] == +1) ? delta : -delta;
      }
    }

    // Re-hang the detached subtree from the entering arc. The leaving arc is
    // the pred arc of out_node; drop it before the chain reversal rewrites
    // out_node's parent data.
    const std::size_t in_node = out_on_tail_side ? u : v;
    const std::size_t out_peer = out_on_tail_side ? v : u;
    detach_child(static_cast<std::size_t>(parent_[out_node]), out_node);
    reroot(in_node, out_node);
    parent_[in_node] = static_cast<int>(out_peer);
    dir_[in_node] = out_on_tail_side ? +1 : -1;
    flow_[in_node] = delta;
    children_[out_peer].push_back(static_cast<int>(in_node));

    // The whole detached subtree shifts potential by a constant.
    const double shift = out_on_tail_side ? -rc : rc;
    refresh_subtree(in_node, shift);
  }

  // Reverses parent pointers along the path in_node -> ... -> stop so that
  // in_node becomes the root of the detached subtree. The stale parent link
  // of `stop` is the removed (leaving) arc.
  void reroot(std::size_t in_node, std::size_t stop) {
    if (in_node == stop) return;
    std::vector<std::size_t> chain;
    for (std::size_t x = in_node;; x = static_cast<std::size_t>(parent_[x])) {
      chain.push_back(x);
      if (x == stop) break;
    }
    for (std::size_t k = chain.size() - 1; k > 0; --k) {
      std::size_t child = chain[k - 1];
      std::size_t par = chain[k];
      detach_child(par, child);
      parent_[par] = static_cast<int>(child);
      dir_[par] = static_cast<signed char>(-dir_[child]);
      flow_[par] = flow_[child];
      children_[child].push_back(static_cast<int>(par));
    }
  }

  void detach_child(std::size_t par, std::size_t child) {
    auto& kids = children_[par];
    auto it = std::find(kids.begin(), kids.end(), static_cast<int>(child));
    if (it != kids.end()) {
      *it = kids.back();
      kids.pop_back();
    }
  }

  void refresh_subtree(std::size_t sub_root, double shift) {
    stack_.clear();
    stack_.push_back(static_cast<int>(sub_root));
    while (!stack_.empty()) {
      std::size_t x = static_cast<std::size_t>(stack_.back());
      stack_.pop_back();
      pi_[x] += shift;
      depth_[x] = depth_[static_cast<std::size_t>(parent_[x])] + 1;
      for (int c : children_[x]) stack_.push_back(c);
    }
  }

  void certify() const {
    const double tol = tolerance_ * cost_scale_;
    for (std::size_t u = 0; u < num_nodes_; ++u) {
      if (parent_[u] == static_cast<int>(root_) && flow_[u] != 0) {
        throw Error("network simplex: artificial arc kept positive flow");
      }
    }
    const std::size_t num_arcs = m_ * n_;
    for (std::size_t arc = 0; arc < num_arcs; ++arc) {
      if (reduced_cost(arc) < -tol) {
        throw Error("network simplex: complementary slackness certificate failed");
      }
    }
    for (std::size_t u = 0; u < num_nodes_; ++u) {
      if (parent_[u] == static_cast<int>(root_) || flow_[u] <= 0) continue;
      std::size_t i = std::min(u, static_cast<std::size_t>(parent_[u]));
      std::size_t j = std::max(u, static_cast<std::size_t>(parent_[u])) - m_;
      if (std::abs(reduced_cost(i * n_ + j)) > tol) {
        throw Error("network simplex: basic arc with nonzero reduced cost");
      }
    }
  }

  std::size_t m_, n_, num_nodes_, root_;
  const std::vector<double>& cost_;
  double tolerance_;
  double cost_scale_ = 1.0;
  double big_ = 0.0;
  std::vector<int> parent_;
  std::vector<signed char> dir_;
  std::vector<long long> flow_;
  std::vector<int> depth_;
  std::vector<double> pi_;
  std::vector<std::vector<int>> children_;
  std::vector<int> stack_;
};

struct ScaledMasses {
  std::vector<long long> supply;
  std::vector<long long> demand;
  std::int64_t denominator = 1;
};

ScaledMasses scale_masses(const std::vector<Rational>& supply, const std::vector<Rational>& demand) {
  Rational total_s, total_d;
  for (const auto& s : supply) {
    if (s.is_negative() || s.is_zero()) throw ValidationError("supplies must be positive");
    total_s += s;
  }
  for (const auto& d : demand) {
    if (d.is_negative() || d.is_zero()) throw ValidationError("demands must be positive");
    total_d += d;
  }
  if (total_s != total_d) {
    throw ValidationError("transportation problem is unbalanced: " + total_s.str() + " vs " +
                          total_d.str());
  }
  ScaledMasses out;
  std::int64_t lcm = 1;
  for (const auto& s : supply) lcm = checked_lcm(lcm, s.den());
  for (const auto& d : demand) lcm = checked_lcm(lcm, d.den());
  out.denominator = lcm;
  out.supply.reserve(supply.size());
  out.demand.reserve(demand.size());
  for (const auto& s : supply) out.supply.push_back(checked_mul(s.num(), lcm / s.den()));
  for (const auto& d : demand) out.demand.push_back(checked_mul(d.num(), lcm / d.den()));
  return out;
}

}  // namespace

std::vector<PlanEntry> solve_transport(const std::vector<Rational>& supply,
                                       const std::vector<Rational>& demand,
                                       const std::function<double(std::size_t, std::size_t)>& cost,
                                       double tolerance) {
  const std::size_t m = supply.size();
  const std::size_t n = demand.size();
  if (m == 0 || n == 0) throw ValidationError("transportation problem with empty side");
  ScaledMasses scaled = scale_masses(supply, demand);

  std::vector<double> cost_matrix(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) cost_matrix[i * n + j] = cost(i, j);
  }

  TransportSimplex simplex(m, n, cost_matrix, scaled.supply, scaled.demand, tolerance);
  simplex.run();

  std::vector<PlanEntry> entries;
  for (const auto& [i, j, f] : simplex.basic_flows()) {
    entries.push_back({i, j, Rational(f, scaled.denominator)});
  }
  return entries;
}

OtResult wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                     const SolverOptions& options) {
  if (p < 1.0) throw ValidationError("wasserstein: exponent p must be >= 1");
  if (mu.dim() != nu.dim()) {
    throw ValidationError("wasserstein: measures live in different dimensions");
  }
  if (mu.size() + nu.size() > options.max_total_atoms) {
    throw CapacityError("wasserstein: " + std::to_string(mu.size() + nu.size()) +
                        " atoms exceed the size cap of " +
                        std::to_string(options.max_total_atoms));
  }

  std::vector<double> dist(mu.size() * nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      dist[i * nu.size() + j] = pow_cost(ground_distance(mu.atom(i), nu.atom(j)), p);
    }
  }
  auto entries = solve_transport(
      mu.weights(), nu.weights(),
      [&](std::size_t i, std::size_t j) { return dist[i * nu.size() + j]; }, options.tolerance);

  double cost = 0.0;
  for (const auto& entry : entries) {
    cost += entry.mass.to_double() * dist[entry.source * nu.size() + entry.target];
  }
  OtResult result{cost, std::pow(std::max(cost, 0.0), 1.0 / p),
                  TransportPlan(mu, nu, std::move(entries))};
  result.plan.validate();
  return result;
}

namespace {

bool is_uniform(const DiscreteMeasure& mu) {
  Rational expected(1, static_cast<std::int64_t>(mu.size()));
  for (const auto& w : mu.weights()) {
    if (w != expected) return false;
  }
  return true;
}

OtResult brute_force_permutations(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  const std::size_t n = mu.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::size_t> best_perm = perm;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      c += pow_cost(ground_distance(mu.atom(i), nu.atom(perm[i])), p);
    }
    if (c < best_cost) {
      best_cost = c;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<PlanEntry> entries;
  Rational mass(1, static_cast<std::int64_t>(n));
  for (std::size_t i = 0; i < n; ++i) entries.push_back({i, best_perm[i], mass});
  double cost = best_cost / static_cast<double>(n);
  OtResult result{cost, std::pow(cost, 1.0 / p), TransportPlan(mu, nu, std::move(entries))};
  result.plan.validate();
  return result;
}

OtResult brute_force_vertices(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  const std::size_t m = mu.size();
  const std::size_t n = nu.size();
  const std::size_t arcs = m * n;
  const std::size_t tree_size = m + n - 1;

  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<PlanEntry> best_entries;

  std::vector<std::size_t> pick(tree_size);
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  auto advance = [&]() {
    std::size_t k = tree_size;
    while (k > 0) {
      --k;
      if (pick[k] + (tree_size - k) < arcs) {
        ++pick[k];
        for (std::size_t t = k + 1; t < tree_size; ++t) pick[t] = pick[t - 1] + 1;
        return true;
      }
    }
    return false;
  };

  do {
    // Solve the flows on the candidate spanning tree by peeling leaves.
    std::vector<int> degree(m + n, 0);
    for (std::size_t a : pick) {
      ++degree[a / n];
      ++degree[m + a % n];
    }
    std::vector<Rational> res_a(mu.weights());
    std::vector<Rational> res_b(nu.weights());
    std::vector<std::size_t> remaining(pick.begin(), pick.end());
    std::vector<std::pair<std::size_t, Rational>> flows;
    bool feasible = true;
    while (!remaining.empty()) {
      bool progressed = false;
      for (std::size_t k = 0; k < remaining.size(); ++k) {
        std::size_t a = remaining[k];
        std::size_t i = a / n, j = a % n;
        Rational x;
        if (degree[i] == 1) {
          x = res_a[i];
          res_a[i] = Rational(0);
          res_b[j] -= x;
        } else if (degree[m + j] == 1) {
          x = res_b[j];
          res_b[j] = Rational(0);
          res_a[i] -= x;
        } else {
          continue;
        }
        if (x.is_negative() || res_a[i].is_negative() || res_b[j].is_negative()) {
          feasible = false;
        }
        --degree[i];
        --degree[m + j];
        flows.emplace_back(a, x);
        remaining[k] = remaining.back();
        remaining.pop_back();
        progressed = true;
        break;
      }
      if (!progressed) {  // the arc set contains a cycle
        feasible = false;
        break;
      }
      if (!feasible) break;
    }
    if (!feasible) continue;
    bool balanced = std::all_of(res_a.begin(), res_a.end(), [](const Rational& r) {
      return r.is_zero();
    }) && std::all_of(res_b.begin(), res_b.end(), [](const Rational& r) { return r.is_zero(); });
    if (!balanced) continue;  // disconnected arc set

    double c = 0.0;
    for (const auto& [a, x] : flows) {
      c += x.to_double() * pow_cost(ground_distance(mu.atom(a / n), nu.atom(a % n)), p);
    }
    if (c < best_cost) {
      best_cost = c;
      best_entries.clear();
      for (const auto& [a, x] : flows) {
        if (!x.is_zero()) best_entries.push_back({a / n, a % n, x});
      }
      std::sort(best_entries.begin(), best_entries.end(), [](const PlanEntry& l, const PlanEntry& r) {
        return std::tie(l.source, l.target) < std::tie(r.source, r.target);
      });
    }
  } while (advance());

  OtResult result{best_cost, std::pow(best_cost, 1.0 / p),
                  TransportPlan(mu, nu, std::move(best_entries))};
  result.plan.validate();
  return result;
}

}  // namespace

OtResult brute_force_wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  if (p < 1.0) throw ValidationError("brute_force_wasserstein: exponent p must be >= 1");
  if (mu.dim() != nu.dim()) {
    throw ValidationError("brute_force_wasserstein: measures live in different dimensions");
  }
  if (mu.size() == nu.size() && mu.size() <= 8 && is_uniform(mu) && is_uniform(nu)) {
    return brute_force_permutations(mu, nu, p);
  }
  if (mu.size() + nu.size() <= 6) {
    return brute_force_vertices(mu, nu, p);
  }
  throw CapacityError(
      "brute_force_wasserstein handles uniform instances with n <= 8 per side or at most 6 atoms "
      "in total");
}

CycleCheckResult check_cyclical_monotonicity(const TransportPlan& plan, double p,
                                             const CycleCheckOptions& options) {
  plan.validate();
  const std::size_t k = plan.entries.size();
  if (k > options.max_support) {
    throw CapacityError("cyclical monotonicity check: " + std::to_string(k) +
                        " support points exceed the cap of " + std::to_string(options.max_support));
  }

  auto arc_cost = [&](std::size_t from, std::size_t to) {
    return pow_cost(ground_distance(plan.source.atom(plan.entries[from].source),
                                    plan.target.atom(plan.entries[to].target)),
                    p);
  };
  auto check_cycle = [&](const std::vector<std::size_t>& cycle) {
    double base = 0.0, shifted = 0.0;
    for (std::size_t t = 0; t < cycle.size(); ++t) {
      base += arc_cost(cycle[t], cycle[t]);
      shifted += arc_cost(cycle[t], cycle[(t + 1) % cycle.size()]);
    }
    return shifted < base - options.tolerance * std::max(1.0, std::abs(base));
  };

  CycleCheckResult result;
  // Exhaustive over cycles of length 2..4: combinations with the smallest
  // index first, then every cyclic order of the remainder.
  std::vector<std::size_t> combo;
  auto explore = [&](auto&& self, std::size_t start, std::size_t len) -> bool {
    if (combo.size() == len) {
      std::vector<std::size_t> rest(combo.begin() + 1, combo.end());
      std::sort(rest.begin(), rest.end());
      do {
        std::vector<std::size_t> cycle;
        cycle.push_back(combo.front());
        cycle.insert(cycle.end(), rest.begin(), rest.end());
        if (check_cycle(cycle)) {
          result.monotone = false;
          result.violating_cycle = cycle;
          return true;
        }
      } while (std::next_permutation(rest.begin(), rest.end()));
      return false;
    }
    for (std::size_t idx = start; idx < k; ++idx) {
      combo.push_back(idx);
      if (self(self, idx + 1, len)) return true;
      combo.pop_back();
    }
    return false;
  };
  for (std::size_t len = 2; len <= 4 && len <= k; ++len) {
    combo.clear();
    if (explore(explore, 0, len)) return result;
  }

  // Seeded sampling of longer cycles.
  if (k >= 5) {
    std::mt19937_64 rng(options.seed);
    std::vector<std::size_t> pool(k);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    const std::size_t max_len = std::min<std::size_t>(8, k);
    for (std::size_t s = 0; s < options.sampled_cycles; ++s) {
      std::size_t len = 5 + static_cast<std::size_t>(rng() % (max_len - 4));
      for (std::size_t t = 0; t < len; ++t) {
        std::size_t swap_with = t + static_cast<std::size_t>(rng() % (k - t));
        std::swap(pool[t], pool[swap_with]);
      }
      std::vector<std::size_t> cycle(pool.begin(), pool.begin() + static_cast<long>(len));
      if (check_cycle(cycle)) {
        result.monotone = false;
        result.violating_cycle = cycle;
        return result;
      }
    }
  }
  return result;
}

double trivial_coupling_cost(const WeightVector& a, const std::vector<Point>& xs,
                             const std::vector<Point>& xs_prime, double p) {
  if (a.size() != xs.size() || xs.size() != xs_prime.size()) {
    throw ValidationError("trivial_coupling_cost: length mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    total += a[i].to_double() * pow_cost(ground_distance(xs[i], xs_prime[i]), p);
  }
  return std::pow(total, 1.0 / p);
}

double local_isometry_threshold(const DiscreteMeasure& mu, double p, std::size_t generic_cap) {
  auto genericity = is_generic(mu.weight_vector(), generic_cap);
  if (!genericity.generic) {
    throw NonGenericError("local_isometry_threshold requires generic weights",
                          genericity.witness_first, genericity.witness_second);
  }
  double theta = support_separation(mu);
  if (!std::isfinite(theta)) return std::numeric_limits<double>::infinity();
  Rational r_min = mu.weight(0);
  for (const auto& w : mu.weights()) r_min = std::min(r_min, w);
  return theta * std::pow(r_min.to_double(), 1.0 / p) / 2.0;
}

TransportPlan swap_coupling(const DiscreteMeasure& mu, const Point& x0, const Point& x1, double r) {
  if (r <= 0) throw ValidationError("swap_coupling: radius must be positive");
  double separation = ground_distance(x0, x1);
  if (!(r < separation / 2.0)) {
    throw ValidationError("swap_coupling: balls of radius " + std::to_string(r) +
                          " around points at distance " + std::to_string(separation) + " overlap");
  }
  std::vector<std::size_t> ball0, ball1;
  Rational w0, w1;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (ground_distance(mu.atom(i), x0) <= r) {
      ball0.push_back(i);
      w0 += mu.weight(i);
    } else if (ground_distance(mu.atom(i), x1) <= r) {
      ball1.push_back(i);
      w1 += mu.weight(i);
    }
  }
  if (w0.is_zero()) throw ValidationError("swap_coupling: the ball around x0 carries no mass");
  if (w1.is_zero()) throw ValidationError("swap_coupling: the ball around x1 carries no mass");
  if (w0 > w1) {
    std::swap(ball0, ball1);
    std::swap(w0, w1);
  }

  std::vector<PlanEntry> entries;
  std::vector<bool> in_ball(mu.size(), false);
  for (std::size_t i : ball0) in_ball[i] = true;
  for (std::size_t i : ball1) in_ball[i] = true;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!in_ball[i]) entries.push_back({i, i, mu.weight(i)});
  }
  Rational keep = Rational(1) - w0 / w1;  // diagonal remainder inside the larger ball
  if (!keep.is_zero()) {
    for (std::size_t i : ball1) entries.push_back({i, i, mu.weight(i) * keep});
  }
  for (std::size_t i : ball0) {
    for (std::size_t j : ball1) {
      Rational mass = mu.weight(i) * mu.weight(j) / w1;
      entries.push_back({i, j, mass});
      entries.push_back({j, i, mass});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const PlanEntry& l, const PlanEntry& r2) {
    return std::tie(l.source, l.target) < std::tie(r2.source, r2.target);
  });
  TransportPlan plan(mu, mu, std::move(entries));
  plan.validate();
  return plan;
}

TransportPlan lower_bound_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& mu_prime,
                                   const SubMeasure& lambda, const Point& ball_center,
                                   double ball_radius, double p, const SolverOptions& options) {
  if (!lambda.dominated_by(mu) || !lambda.dominated_by(mu_prime)) {
    throw ValidationError("lower_bound_coupling: lambda is not dominated by both marginals");
  }

  // lambda restricted to the closed ball S, indexed against both marginals.
  struct BallAtom {
    std::size_t in_mu;
    std::size_t in_mu_prime;
    Rational mass;
  };
  std::vector<BallAtom> ball;
  Rational ball_mass;
  auto index_of = [](const DiscreteMeasure& m, const Point& x) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m.atom(i) == x) return i;
    }
    throw ValidationError("lower_bound_coupling: dominated atom missing from a marginal");
  };
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    if (ground_distance(lambda.atom(k), ball_center) <= ball_radius) {
      ball.push_back({index_of(mu, lambda.atom(k)), index_of(mu_prime, lambda.atom(k)),
                      lambda.weight(k)});
      ball_mass += lambda.weight(k);
    }
  }
  if (ball_mass.is_zero()) {
    throw ValidationError("lower_bound_coupling: lambda gives no mass to the ball");
  }

  // Densities a = d(lambda|S)/d(mu) and a' = d(lambda|S)/d(mu') on atoms.
  std::vector<Rational> dens(mu.size()), dens_prime(mu_prime.size());
  for (const auto& atom : ball) {
    dens[atom.in_mu] = atom.mass / mu.weight(atom.in_mu);
    dens_prime[atom.in_mu_prime] = atom.mass / mu_prime.weight(atom.in_mu_prime);
  }

  const Rational half(1, 2);
  TransportPlan optimal = wasserstein(mu, mu_prime, p, options).plan;

  // Split eta0 into eta1 + eta2 + eta3 and collect the marginals nu1, nu2.
  std::vector<PlanEntry> entries;  // accumulates eta3 and later terms
  std::vector<Rational> nu1(mu_prime.size()), nu2(mu.size());
  for (const auto& e : optimal.entries) {
    Rational m1 = half * dens[e.source] * e.mass;         // eta1 share
    Rational m2 = half * dens_prime[e.target] * e.mass;   // eta2 share
    nu1[e.target] += m1;
    nu2[e.source] += m2;
    Rational m3 = e.mass - m1 - m2;
    if (!m3.is_zero()) entries.push_back({e.source, e.target, m3});
  }

  // gamma: optimal plan between nu2 and nu1 (total mass lambda(S)/2 each).
  std::vector<std::size_t> support2, support1;
  std::vector<Rational> mass2, mass1;
  for (std::size_t i = 0; i < nu2.size(); ++i) {
    if (!nu2[i].is_zero()) {
      support2.push_back(i);
      mass2.push_back(nu2[i]);
    }
  }
  for (std::size_t j = 0; j < nu1.size(); ++j) {
    if (!nu1[j].is_zero()) {
      support1.push_back(j);
      mass1.push_back(nu1[j]);
    }
  }
  if (!support2.empty()) {
    auto gamma = solve_transport(
        mass2, mass1,
        [&](std::size_t i, std::size_t j) {
          return pow_cost(ground_distance(mu.atom(support2[i]), mu_prime.atom(support1[j])), p);
        },
        options.tolerance);
    for (const auto& g : gamma) entries.push_back({support2[g.source], support1[g.target], g.mass});
  }

  // Diagonal identity on lambda|S with half its mass.
  for (const auto& atom : ball) {
    entries.push_back({atom.in_mu, atom.in_mu_prime, half * atom.mass});
  }

  // Merge duplicate cells.
  std::sort(entries.begin(), entries.end(), [](const PlanEntry& l, const PlanEntry& r) {
    return std::tie(l.source, l.target) < std::tie(r.source, r.target);
  });
  std::vector<PlanEntry> merged;
  for (const auto& e : entries) {
    if (!merged.empty() && merged.back().source == e.source && merged.back().target == e.target) {
      merged.back().mass += e.mass;
    } else {
      merged.push_back(e);
    }
  }
  TransportPlan plan(mu, mu_prime, std::move(merged));
  plan.validate();
  return plan;
}

}  // namespace transport
