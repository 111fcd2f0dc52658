#include "transport/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <numeric>
#include <sstream>

#include "transport/gallery.hpp"
#include "transport/nonsplit.hpp"
#include "transport/representative.hpp"
#include "transport/solver.hpp"
#include "transport/tlp.hpp"

namespace transport {
namespace suite {

double unit_uniform(std::uint64_t& state) {
  // splitmix64 step; top 53 bits as a double.
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  z = z ^ (z >> 31);
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

namespace {

double pow_cost(double d, double p) {
  if (p == 1.0) return d;
  if (p == 2.0) return d * d;
  return std::pow(d, p);
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t salt) {
  return seed * 0x100000001b3ull + salt * 0x9e3779b97f4a7c15ull + 0xcbf29ce484222325ull;
}

double uniform_in(std::uint64_t& state, double lo, double hi) {
  return lo + (hi - lo) * unit_uniform(state);
}

std::vector<Point> random_points(std::uint64_t& state, std::size_t count, std::size_t dim,
                                 double lo, double hi) {
  std::vector<Point> points;
  points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> coords(dim);
    for (auto& c : coords) c = uniform_in(state, lo, hi);
    points.emplace_back(std::move(coords));
  }
  return points;
}

std::vector<Rational> random_weights(std::uint64_t& state, std::size_t count, int max_numerator) {
  std::vector<std::int64_t> raw(count);
  std::int64_t total = 0;
  for (auto& r : raw) {
    r = 1 + static_cast<std::int64_t>(unit_uniform(state) * max_numerator);
    total += r;
  }
  std::vector<Rational> weights;
  weights.reserve(count);
  for (auto r : raw) weights.emplace_back(r, total);
  return weights;
}

DiscreteMeasure random_measure(std::uint64_t& state, std::size_t count, std::size_t dim, double lo,
                               double hi) {
  return DiscreteMeasure(random_points(state, count, dim, lo, hi),
                         random_weights(state, count, 20));
}

/// A random vertex of the transportation polytope: northwest-corner rule on
/// independently shuffled row and column orders.
std::vector<PlanEntry> random_coupling(std::uint64_t& state, const std::vector<Rational>& a,
                                       const std::vector<Rational>& b) {
  std::vector<std::size_t> rows(a.size()), cols(b.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  std::iota(cols.begin(), cols.end(), std::size_t{0});
  for (std::size_t i = rows.size(); i > 1; --i) {
    std::swap(rows[i - 1], rows[static_cast<std::size_t>(unit_uniform(state) * i)]);
  }
  for (std::size_t j = cols.size(); j > 1; --j) {
    std::swap(cols[j - 1], cols[static_cast<std::size_t>(unit_uniform(state) * j)]);
  }
  std::vector<Rational> res_a(a), res_b(b);
  std::vector<PlanEntry> entries;
  std::size_t i = 0, j = 0;
  while (i < rows.size() && j < cols.size()) {
    Rational mass = std::min(res_a[rows[i]], res_b[cols[j]]);
    if (!mass.is_zero()) entries.push_back({rows[i], cols[j], mass});
    res_a[rows[i]] -= mass;
    res_b[cols[j]] -= mass;
    if (res_a[rows[i]].is_zero()) ++i;
    if (j < cols.size() && res_b[cols[j]].is_zero()) ++j;
  }
  std::sort(entries.begin(), entries.end(), [](const PlanEntry& l, const PlanEntry& r) {
    return std::tie(l.source, l.target) < std::tie(r.source, r.target);
  });
  return entries;
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(12);
  out << v;
  return out.str();
}

// ---------------------------------------------------------------------------
// Criterion 1: network simplex agrees with permutation brute force.
CriterionResult solver_oracle_equivalence(std::uint64_t seed) {
  std::uint64_t state = sub_seed(seed, 1);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + static_cast<std::size_t>(unit_uniform(state) * 6);
    std::size_t dim = 1 + static_cast<std::size_t>(unit_uniform(state) * 2);
    double p = (trial % 2 == 0) ? 1.0 : 2.0;
    std::vector<Rational> uniform(n, Rational(1, static_cast<std::int64_t>(n)));
    DiscreteMeasure mu(random_points(state, n, dim, -2.0, 2.0), uniform);
    DiscreteMeasure nu(random_points(state, n, dim, -2.0, 2.0), uniform);
    double fast = wasserstein(mu, nu, p).distance;
    double exact = brute_force_wasserstein(mu, nu, p).distance;
    worst = std::max(worst, std::abs(fast - exact) / std::max(1.0, std::abs(exact)));
  }
  return {"solver-oracle-equivalence", worst, 1e-9, worst <= 1e-9, 0.0,
          "200 uniform instances, n <= 6, p in {1,2}"};
}

// Criterion 2: 1-d quantile coupling closed form.
CriterionResult one_dimensional_closed_form(std::uint64_t seed) {
  std::uint64_t state = sub_seed(seed, 2);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t m = 1 + static_cast<std::size_t>(unit_uniform(state) * 50);
    std::size_t n = 1 + static_cast<std::size_t>(unit_uniform(state) * 50);
    double p = (trial % 2 == 0) ? 1.0 : 2.0;
    DiscreteMeasure mu = random_measure(state, m, 1, -5.0, 5.0);
    DiscreteMeasure nu = random_measure(state, n, 1, -5.0, 5.0);
    double fast = wasserstein(mu, nu, p).distance;
    double exact = quantile_wasserstein_1d(mu, nu, p);
    worst = std::max(worst, std::abs(fast - exact) / std::max(1.0, std::abs(exact)));
  }
  return {"one-dimensional-closed-form", worst, 1e-9, worst <= 1e-9, 0.0,
          "100 pairs on the line, <= 50 atoms"};
}

// Criterion 3: below the threshold the index-aligned coupling is optimal.
CriterionResult local_isometry(std::uint64_t seed) {
  std::uint64_t state = sub_seed(seed, 3);
  double worst = 0.0;
  bool cycles_ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t m = 2 + static_cast<std::size_t>(unit_uniform(state) * 5);
    std::size_t dim = 1 + static_cast<std::size_t>(unit_uniform(state) * 2);
    double p = (trial % 2 == 0) ? 1.0 : 2.0;
    WeightVector a = generic_weights(m);
    auto atoms = random_points(state, m, dim, 0.0, 1.0);
    DiscreteMeasure mu(atoms, a.entries);
    if (mu.size() != m) continue;  // merged duplicates (never for random reals)

    double threshold = local_isometry_threshold(mu, p);
    // Random perturbation scaled strictly below the threshold.
    std::vector<Point> moved(atoms);
    std::vector<double> step(m);
    double norm_pow = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      step[i] = 0.1 + 0.9 * unit_uniform(state);
      norm_pow += a[i].to_double() * pow_cost(step[i], p);
    }
    double scale = 0.9 * threshold / std::pow(norm_pow, 1.0 / p);
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t axis = static_cast<std::size_t>(unit_uniform(state) * dim);
      moved[i].coords[axis] += scale * step[i] * (unit_uniform(state) < 0.5 ? -1.0 : 1.0);
    }
    DiscreteMeasure mu_prime(moved, a.entries);

    double trivial = trivial_coupling_cost(a, atoms, moved, p);
    double exact = wasserstein(mu, mu_prime, p).distance;
    worst = std::max(worst, std::abs(exact - trivial));

    std::vector<PlanEntry> aligned;
    for (std::size_t i = 0; i < m; ++i) aligned.push_back({i, i, a[i]});
    TransportPlan plan(mu, mu_prime, std::move(aligned));
    if (!check_cyclical_monotonicity(plan, p).monotone) cycles_ok = false;
  }
  return {"local-isometry", worst, 1e-9, worst <= 1e-9 && cycles_ok, 0.0,
          cycles_ok ? "aligned plans are cyclically monotone" : "cycle check FAILED"};
}

// Criterion 4: partition fixtures against an independent exhaustive
// enumerator (all k^m assignments).
bool enumerate_assignments(const std::vector<Rational>& weights, const std::vector<Rational>& targets) {
  std::vector<Rational> residual(targets);
  std::size_t m = weights.size();
  std::vector<std::size_t> choice(m, 0);
  // Depth-first over all |targets|^m maps with early pruning on negatives.
  std::size_t pos = 0;
  while (true) {
    if (pos == m) {
      bool exact = std::all_of(residual.begin(), residual.end(),
                               [](const Rational& r) { return r.is_zero(); });
      if (exact) return true;
      --pos;
      residual[choice[pos]] += weights[pos];
      ++choice[pos];
    }
    while (choice[pos] < targets.size() && residual[choice[pos]] < weights[pos]) ++choice[pos];
    if (choice[pos] == targets.size()) {
      if (pos == 0) return false;
      choice[pos] = 0;
      --pos;
      residual[choice[pos]] += weights[pos];
      ++choice[pos];
      continue;
    }
    residual[choice[pos]] -= weights[pos];
    ++pos;
    if (pos < m) choice[pos] = 0;
  }
}

CriterionResult nonsplit_fixtures(std::uint64_t) {
  // Fixed fixture set, independent of the suite seed.
  std::uint64_t state = 0x5eedf1c5ull;
  struct Fixture {
    std::vector<Rational> weights;
    std::vector<Rational> targets;
  };
  std::vector<Fixture> fixtures;
  // 15 feasible: random grouping of random integer weights.
  for (int f = 0; f < 15; ++f) {
    std::size_t m = 6 + static_cast<std::size_t>(unit_uniform(state) * 13);  // 6..18
    std::size_t k = 2 + static_cast<std::size_t>(unit_uniform(state) * 3);   // 2..4
    if (k > 2) m = std::min<std::size_t>(m, 10);  // keep the enumerator affordable
    auto weights = random_weights(state, m, 30);
    std::vector<Rational> sums(k);
    for (std::size_t i = 0; i < m; ++i) {
      sums[static_cast<std::size_t>(unit_uniform(state) * k)] += weights[i];
    }
    // Re-draw until every group is nonempty.
    while (std::any_of(sums.begin(), sums.end(), [](const Rational& s) { return s.is_zero(); })) {
      std::fill(sums.begin(), sums.end(), Rational(0));
      for (std::size_t i = 0; i < m; ++i) {
        sums[static_cast<std::size_t>(unit_uniform(state) * k)] += weights[i];
      }
    }
    fixtures.push_back({std::move(weights), std::move(sums)});
  }
  // 15 infeasible: even numerators, odd target split (no subset reaches an
  // odd sum).
  for (int f = 0; f < 15; ++f) {
    std::size_t m = 6 + static_cast<std::size_t>(unit_uniform(state) * 13);
    std::vector<std::int64_t> raw(m);
    std::int64_t total = 0;
    for (auto& r : raw) {
      r = 2 * (1 + static_cast<std::int64_t>(unit_uniform(state) * 15));
      total += r;
    }
    std::int64_t t1 = total / 2;
    if (t1 % 2 == 0) t1 += 1;  // odd target against even subset sums
    std::vector<Rational> weights;
    for (auto r : raw) weights.emplace_back(r, total);
    fixtures.push_back({std::move(weights), {Rational(t1, total), Rational(total - t1, total)}});
  }

  int agree = 0;
  int expected_feasible = 0;
  for (std::size_t f = 0; f < fixtures.size(); ++f) {
    const auto& fx = fixtures[f];
    std::vector<Point> atoms, targets;
    for (std::size_t i = 0; i < fx.weights.size(); ++i) {
      atoms.push_back(Point{static_cast<double>(i)});
    }
    for (std::size_t j = 0; j < fx.targets.size(); ++j) {
      targets.push_back(Point{100.0 + static_cast<double>(j)});
    }
    DiscreteMeasure mu(atoms, fx.weights);
    DiscreteMeasure nu(targets, fx.targets);
    bool checker = feasible_pushforward(mu, nu).has_value();
    bool oracle = enumerate_assignments(fx.weights, fx.targets);
    if (oracle) ++expected_feasible;
    if (checker == oracle && (f < 15) == oracle) ++agree;
  }
  double fraction = agree / 30.0;
  return {"nonsplit-fixtures", fraction, 1.0, fraction == 1.0, 0.0,
          "15 feasible + 15 infeasible, m <= 18, enumerator-verified (" +
              std::to_string(expected_feasible) + " feasible)"};
}

// Criterion 5: pushforward reconstruction recovers the map exactly.
CriterionResult reconstruction_round_trip(std::uint64_t seed) {
  std::uint64_t state = sub_seed(seed, 5);
  struct NamedMap {
    MeasureMapOracle oracle;
    std::function<double(double)> fn;
    double lipschitz;
  };
  // The oracle wraps the same std::function used for the expected values, so
  // recovered coordinates must match bitwise.
  auto named = [](std::function<double(double)> fn, const char* name, double lipschitz) {
    return NamedMap{gallery::pushforward_oracle_1d(fn, 1.0, name, lipschitz), fn, lipschitz};
  };
  std::vector<NamedMap> maps;
  maps.push_back(named([](double x) { return x; }, "identity", 1.0));
  maps.push_back(named([](double x) { return x * x; }, "square", 2.0));
  maps.push_back(named(&gallery::periodic_tent, "tent", 2.0));
  maps.push_back(named([](double x) { return 3.0 * x - 1.0; }, "affine3", 3.0));
  maps.push_back(named([](double x) { return 0.25 - 0.5 * x; }, "affine-half", 0.5));

  bool exact = true;
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t m = 2 + static_cast<std::size_t>(unit_uniform(state) * 9);  // 2..10
    DiscreteMeasure mu(random_points(state, m, 1, 0.0, 1.0), generic_weights(m).entries);
    const auto& map = maps[static_cast<std::size_t>(trial) % maps.size()];
    ReconstructedMap rm = reconstruct_on_generic(map.oracle, mu);
    for (std::size_t i = 0; i < mu.size(); ++i) {
      if (rm.values[i][0] != map.fn(mu.atom(i)[0])) exact = false;
    }
    LipschitzReport report = verify_pointwise_lipschitz(rm, map.lipschitz);
    if (!report.ok) exact = false;
    worst_ratio = std::max(worst_ratio, report.worst_ratio / map.lipschitz);
  }
  return {"reconstruction-round-trip", worst_ratio, 1.0 + 1e-9, exact && worst_ratio <= 1.0 + 1e-9,
          0.0, "identity, square, tent, two affine maps; 50 generic binary-weight measures"};
}

// Criterion 6: the coupling estimate holds for optimal and random couplings.
CriterionResult coupling_estimate(std::uint64_t seed) {
  std::uint64_t state = sub_seed(seed, 6);
  MeasureMapOracle oracle = gallery::sign_ratio_oracle();
  double worst_excess = -1.0;
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t m1 = 2 + static_cast<std::size_t>(unit_uniform(state) * 5);
    std::size_t m2 = 2 + static_cast<std::size_t>(unit_uniform(state) * 5);
    DiscreteMeasure mu(random_points(state, m1, 1, -1.0, 1.0), generic_weights(m1).entries);
    DiscreteMeasure mu_prime(random_points(state, m2, 1, -1.0, 1.0), generic_weights(m2).entries);

    TransportPlan optimal = wasserstein(mu, mu_prime, 1.0).plan;
    auto opt = verify_coupling_estimate(oracle, mu, mu_prime, optimal, 3.0, 1.0);
    worst_excess = std::max(worst_excess, opt.lhs - opt.rhs);

    TransportPlan random_plan(mu, mu_prime,
                              random_coupling(state, mu.weights(), mu_prime.weights()));
    auto rnd = verify_coupling_estimate(oracle, mu, mu_prime, random_plan, 3.0, 1.0);
    worst_excess = std::max(worst_excess, rnd.lhs - rnd.rhs);
  }
  return {"coupling-estimate", worst_excess, 1e-9, worst_excess <= 1e-9, 0.0,
          "sign-ratio oracle, L = 3, 500 generic pairs, optimal + random couplings"};
}

// Criterion 7: empirical Lipschitz constant of the sign-ratio example.
CriterionResult lipschitz_sign_ratio(std::uint64_t seed) {
  std::uint64_t state = sub_seed(seed, 7);
  MeasureMapOracle oracle = gallery::sign_ratio_oracle();
  std::vector<std::pair<DiscreteMeasure, DiscreteMeasure>> pairs;
  pairs.reserve(1000);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t m1 = 1 + static_cast<std::size_t>(unit_uniform(state) * 6);
    std::size_t m2 = 1 + static_cast<std::size_t>(unit_uniform(state) * 6);
    pairs.emplace_back(random_measure(state, m1, 1, -1.0, 1.0),
                       random_measure(state, m2, 1, -1.0, 1.0));
  }
  double estimate = estimate_lipschitz_constant(oracle, pairs, 1.0);
  return {"lipschitz-sign-ratio", estimate, 3.0 + 1e-6, estimate <= 3.0 + 1e-6, 0.0,
          "1000 seeded pairs on [-1, 1]"};
}

// Criterion 8: reconstructed values along the witness sequences.
CriterionResult discontinuity_witness(std::uint64_t) {
  MeasureMapOracle oracle = gallery::sign_ratio_oracle();
  auto sequences = gallery::discontinuity_witness_sequences(64);
  bool plus_exact = true;
  double worst_excess = -1.0;
  for (std::size_t k = 0; k < sequences.plus.size(); ++k) {
    int n = 3 + static_cast<int>(k);
    ReconstructedMap plus = reconstruct_on_generic(oracle, sequences.plus[k]);
    if (plus.values[0][0] != 1.0) plus_exact = false;  // exact: all atoms positive
    ReconstructedMap minus = reconstruct_on_generic(oracle, sequences.minus[k]);
    // From the ratio formula, s + 1 = 2 sqrt(n) / (sqrt(n) + n - 1) <= 4 / sqrt(n).
    double envelope = 4.0 / std::sqrt(static_cast<double>(n));
    worst_excess = std::max(worst_excess, std::abs(minus.values[0][0] + 1.0) - envelope);
  }
  return {"discontinuity-witness", worst_excess, 0.0, plus_exact && worst_excess <= 0.0, 0.0,
          plus_exact ? "f(1, mu_n^+) = 1 exactly for n = 3..64"
                     : "positive-side reconstruction NOT exact"};
}

// Criterion 9: continuity bound of the periodic-scaling example.
CriterionResult continuity_bound(std::uint64_t seed) {
  std::uint64_t state = sub_seed(seed, 9);
  const double alpha = 0.5, lipschitz = 2.0, p = 1.0;
  gallery::GridDiscretizer grid{0.0, 1.0, 256};
  DiscreteMeasure lambda = grid.uniform();
  MeasureMapOracle oracle = gallery::periodic_scaling_oracle(alpha, lambda, p);

  double phase = 2.0 * M_PI * unit_uniform(state);
  double worst_excess = -1.0;
  bool in_range = true;
  for (int t = 0; t < 20; ++t) {
    // Log-spaced displacement targets keep W_1 in [1e-3, 1e-1].
    double target = 1.2e-3 * std::pow(0.095 / 1.2e-3, t / 19.0);
    std::vector<Point> moved;
    moved.reserve(lambda.size());
    for (const auto& x : lambda.atoms()) {
      double shifted = x[0] + target * (M_PI / 2.0) * std::sin(2.0 * M_PI * x[0] + phase);
      moved.push_back(Point{std::clamp(shifted, 1e-6, 1.0 - 1e-6)});
    }
    DiscreteMeasure mu(moved, lambda.weights());
    double w = wasserstein(mu, lambda, p).distance;
    if (w < 1e-3 || w > 1e-1) in_range = false;
    double measured = wasserstein(oracle(mu), lambda, p).distance;  // F(lambda) = lambda
    double bound = lipschitz * std::pow(w, 1.0 - alpha) + 2.0 * std::pow(w, alpha) + 0.05;
    worst_excess = std::max(worst_excess, measured - bound);
  }
  return {"continuity-bound", worst_excess, 0.0, worst_excess <= 0.0 && in_range, 0.0,
          in_range ? "20 perturbed grids, alpha = 1/2, grid 256, L = 2"
                   : "a perturbation left the W_1 range [1e-3, 1e-1]"};
}

// Criterion 10: graph measures approach the product measure while the
// equidispersivity modulus blows up.
CriterionResult non_compactness_witness(std::uint64_t) {
  const double p = 1.0, alpha = 0.5;
  gallery::GridDiscretizer grid{0.0, 1.0, 256};
  DiscreteMeasure lambda = grid.uniform();
  TransportFamily family = gallery::periodic_scaling_family(alpha, lambda, p);

  gallery::GridDiscretizer coarse{0.0, 1.0, 32};
  DiscreteMeasure line = coarse.uniform();
  std::vector<Point> product_atoms;
  std::vector<Rational> product_weights;
  for (std::size_t i = 0; i < line.size(); ++i) {
    for (std::size_t j = 0; j < line.size(); ++j) {
      product_atoms.push_back(Point{line.atom(i)[0], line.atom(j)[0]});
      product_weights.push_back(line.weight(i) * line.weight(j));
    }
  }
  DiscreteMeasure product_grid(std::move(product_atoms), std::move(product_weights));

  SolverOptions wide;
  wide.max_total_atoms = 4000;
  std::vector<double> distances;
  double blowup = 0.0;
  for (double eps : {0.2, 0.1, 0.05}) {
    DiscreteMeasure mu = grid.with_density(
        [eps](double x) { return 1.0 + eps * std::cos(2.0 * M_PI * x); });
    std::vector<Point> labels;
    labels.reserve(mu.size());
    for (const auto& x : mu.atoms()) labels.push_back(family(x, mu));
    LabeledMeasure lm(mu, labels);
    GraphMeasure graph = embed(lm);
    distances.push_back(
        product_wasserstein(graph.product, product_grid, 1, p, wide).distance);
    if (eps == 0.05) {
      blowup = equidispersivity_profile(lm, p, {0.01}, wide).front().second;
    }
  }
  bool monotone = distances[0] > distances[1] && distances[1] > distances[2];
  bool close = distances[2] <= 0.1;
  bool spread = blowup > 0.2;
  // Reference values pinned from the first run; the hard assertions are the
  // monotone decrease and the modulus blow-up.
  const double pinned[3] = {0.043298, 0.037274, 0.035608};
  const double pinned_blowup = 0.280996;
  bool pinned_ok = true;
  for (int k = 0; k < 3; ++k) pinned_ok = pinned_ok && std::abs(distances[k] - pinned[k]) < 2e-3;
  pinned_ok = pinned_ok && std::abs(blowup - pinned_blowup) < 5e-3;
  std::ostringstream detail;
  detail << "W_1 to lambda x lambda: " << format_double(distances[0]) << " > "
         << format_double(distances[1]) << " > " << format_double(distances[2])
         << "; profile(0.01) = " << format_double(blowup)
         << (pinned_ok ? "" : " [drifted from pinned references]");
  return {"non-compactness-witness", distances[2], 0.1,
          monotone && close && spread && pinned_ok, 0.0, detail.str()};
}

// Criterion 11: the mixing construction satisfies its distance bound.
CriterionResult mixing_construction(std::uint64_t seed) {
  std::uint64_t state = sub_seed(seed, 11);
  gallery::GridDiscretizer grid{0.0, 1.0, 16};
  DiscreteMeasure lambda = grid.uniform();
  double worst_excess = -1.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t m = 2 + static_cast<std::size_t>(unit_uniform(state) * 7);
    DiscreteMeasure mu = random_measure(state, m, 1, 0.0, 1.0);
    double eps = std::pow(10.0, uniform_in(state, -1.7, -0.1));
    double lipschitz = uniform_in(state, 0.5, 4.0);
    double p = (trial % 2 == 0) ? 1.0 : 2.0;
    DiscreteMeasure mixed = mix_with_reference(mu, lambda, eps, lipschitz, p);
    double check = wasserstein(mu, mixed, p).distance;
    worst_excess = std::max(worst_excess, check - eps / (3.0 * lipschitz));
  }
  return {"mixing-construction", worst_excess, 1e-9, worst_excess <= 1e-9, 0.0,
          "100 seeded (mu, eps, L) triples, independent solver verification"};
}

// Criterion 12: lifts commute with permutations; an index-dependent fake
// lift is detected.
CriterionResult lagrangian_equivariance(std::uint64_t seed) {
  std::uint64_t state = sub_seed(seed, 12);
  gallery::GridDiscretizer grid{-1.0, 1.0, 16};
  DiscreteMeasure lambda = grid.uniform();
  gallery::GridDiscretizer unit_grid{0.0, 1.0, 16};
  DiscreteMeasure unit_lambda = unit_grid.uniform();

  struct NamedFamily {
    TransportFamily family;
    double lo, hi;
  };
  std::vector<NamedFamily> families;
  families.push_back({gallery::sign_ratio_family(), -1.0, 1.0});
  families.push_back({gallery::tanh_family(lambda, 1.0), -1.0, 1.0});
  families.push_back({gallery::periodic_scaling_family(0.5, unit_lambda, 1.0), 0.0, 1.0});
  families.push_back(
      {[](const Point& x, const DiscreteMeasure&) { return Point{gallery::periodic_tent(x[0])}; },
       0.0, 1.0});

  bool all_ok = true;
  int checks = 0;
  while (checks < 100) {
    const auto& nf = families[static_cast<std::size_t>(checks) % families.size()];
    std::size_t n = 2 + static_cast<std::size_t>(unit_uniform(state) * 11);  // 2..12
    auto sample = random_points(state, n, 1, nf.lo, nf.hi);
    std::vector<std::vector<std::size_t>> perms;
    for (int r = 0; r < 4 && checks < 100; ++r, ++checks) {
      std::vector<std::size_t> sigma(n);
      std::iota(sigma.begin(), sigma.end(), std::size_t{0});
      for (std::size_t i = n; i > 1; --i) {
        std::swap(sigma[i - 1], sigma[static_cast<std::size_t>(unit_uniform(state) * i)]);
      }
      perms.push_back(std::move(sigma));
    }
    if (!check_mpi_equivariance(make_lift(nf.family), sample, perms).ok) all_ok = false;
  }

  // The deliberately broken lift reads the sample index directly.
  auto broken = [](const std::vector<Point>& sample) {
    std::vector<Point> out;
    for (std::size_t i = 0; i < sample.size(); ++i) {
      out.push_back(Point{sample[i][0] + 1e-3 * static_cast<double>(i)});
    }
    return out;
  };
  auto sample = random_points(state, 5, 1, 0.0, 1.0);
  std::vector<std::vector<std::size_t>> transposition{{1, 0, 2, 3, 4}};
  bool detected = !check_mpi_equivariance(broken, sample, transposition).ok;

  double measured = (all_ok && detected) ? 1.0 : 0.0;
  return {"lagrangian-equivariance", measured, 1.0, measured == 1.0, 0.0,
          "100 permutations across 4 lift families; broken lift detected"};
}

// Criterion 13: TL_p metric axioms and projection bounds.
CriterionResult tlp_metric_axioms(std::uint64_t seed) {
  std::uint64_t state = sub_seed(seed, 13);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    double p = (trial % 2 == 0) ? 1.0 : 2.0;
    auto make = [&]() {
      std::size_t m = 2 + static_cast<std::size_t>(unit_uniform(state) * 7);
      DiscreteMeasure base = random_measure(state, m, 1, 0.0, 1.0);
      std::vector<Point> labels = random_points(state, base.size(), 1, 0.0, 1.0);
      return LabeledMeasure(std::move(base), std::move(labels));
    };
    LabeledMeasure a = make(), b = make(), c = make();

    double dab = tlp_distance(a, b, p).distance;
    double dba = tlp_distance(b, a, p).distance;
    double dac = tlp_distance(a, c, p).distance;
    double dbc = tlp_distance(b, c, p).distance;
    worst = std::max(worst, std::abs(dab - dba));
    worst = std::max(worst, dac - (dab + dbc));

    double base_w = wasserstein(a.base, b.base, p).distance;
    DiscreteMeasure push_a(a.labels, a.base.weights());
    DiscreteMeasure push_b(b.labels, b.base.weights());
    double push_w = wasserstein(push_a, push_b, p).distance;
    worst = std::max(worst, std::max(base_w, push_w) - dab);
  }
  return {"tlp-metric-axioms", worst, 1e-9, worst <= 1e-9, 0.0,
          "200 labeled triples: symmetry, triangle, projection bounds"};
}

struct CriterionEntry {
  const char* name;
  CriterionResult (*run)(std::uint64_t);
  double time_limit;  // seconds; 0 = unlimited
};

constexpr CriterionEntry kCriteria[] = {
    {"solver-oracle-equivalence", solver_oracle_equivalence, 10.0},
    {"one-dimensional-closed-form", one_dimensional_closed_form, 5.0},
    {"local-isometry", local_isometry, 10.0},
    {"nonsplit-fixtures", nonsplit_fixtures, 30.0},
    {"reconstruction-round-trip", reconstruction_round_trip, 10.0},
    {"coupling-estimate", coupling_estimate, 60.0},
    {"lipschitz-sign-ratio", lipschitz_sign_ratio, 60.0},
    {"discontinuity-witness", discontinuity_witness, 5.0},
    {"continuity-bound", continuity_bound, 60.0},
    {"non-compactness-witness", non_compactness_witness, 0.0},
    {"mixing-construction", mixing_construction, 10.0},
    {"lagrangian-equivariance", lagrangian_equivariance, 5.0},
    {"tlp-metric-axioms", tlp_metric_axioms, 30.0},
};

CriterionResult run_one(const CriterionEntry& entry, std::uint64_t seed) {
  auto start = std::chrono::steady_clock::now();
  CriterionResult result;
  try {
    result = entry.run(seed);
  } catch (const std::exception& e) {
    result.name = entry.name;
    result.pass = false;
    result.detail = std::string("exception: ") + e.what();
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (entry.time_limit > 0 && result.seconds >= entry.time_limit) {
    result.pass = false;
    result.detail += " [over the " + format_double(entry.time_limit) + " s budget]";
  }
  return result;
}

}  // namespace

std::vector<CriterionResult> run_acceptance_suite(const SuiteConfig& config) {
  std::vector<const CriterionEntry*> selected;
  for (const auto& entry : kCriteria) {
    if (config.only.empty() || std::string(entry.name).find(config.only) != std::string::npos) {
      selected.push_back(&entry);
    }
  }
  std::vector<CriterionResult> results(selected.size());
  if (config.jobs <= 1) {
    for (std::size_t i = 0; i < selected.size(); ++i) {
      results[i] = run_one(*selected[i], config.seed);
    }
    return results;
  }
  std::size_t next = 0;
  while (next < selected.size()) {
    std::size_t batch = std::min<std::size_t>(static_cast<std::size_t>(config.jobs),
                                              selected.size() - next);
    std::vector<std::future<CriterionResult>> futures;
    for (std::size_t k = 0; k < batch; ++k) {
      futures.push_back(std::async(std::launch::async, run_one, std::cref(*selected[next + k]),
                                   config.seed));
    }
    for (std::size_t k = 0; k < batch; ++k) results[next + k] = futures[k].get();
    next += batch;
  }
  return results;
}

double quantile_wasserstein_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  if (mu.dim() != 1 || nu.dim() != 1) {
    throw ValidationError("quantile_wasserstein_1d expects measures on the line");
  }
  auto sorted = [](const DiscreteMeasure& m) {
    std::vector<std::pair<double, Rational>> items;
    items.reserve(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) items.emplace_back(m.atom(i)[0], m.weight(i));
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return items;
  };
  auto a = sorted(mu);
  auto b = sorted(nu);
  std::size_t i = 0, j = 0;
  Rational rem_a = a[0].second, rem_b = b[0].second;
  double cost = 0.0;
  while (i < a.size() && j < b.size()) {
    Rational mass = std::min(rem_a, rem_b);
    cost += mass.to_double() * pow_cost(std::abs(a[i].first - b[j].first), p);
    rem_a -= mass;
    rem_b -= mass;
    if (rem_a.is_zero() && ++i < a.size()) rem_a = a[i].second;
    if (rem_b.is_zero() && ++j < b.size()) rem_b = b[j].second;
  }
  return std::pow(cost, 1.0 / p);
}

}  // namespace suite
}  // namespace transport
