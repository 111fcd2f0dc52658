#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "support.hpp"
#include "transport/gallery.hpp"
#include "transport/nonsplit.hpp"

using namespace transport;
using testsupport::unif;

namespace {

DiscreteMeasure measure(std::vector<double> xs, std::vector<Rational> ws) {
  std::vector<Point> atoms;
  for (double x : xs) atoms.push_back(Point{x});
  return DiscreteMeasure(std::move(atoms), std::move(ws));
}

DiscreteMeasure pushforward_by_assignment(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                          const AtomAssignment& assignment) {
  std::vector<Point> atoms;
  std::vector<Rational> weights;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    atoms.push_back(nu.atom(assignment.target_index[i]));
    weights.push_back(mu.weight(i));
  }
  return DiscreteMeasure(std::move(atoms), std::move(weights));
}

}  // namespace

TEST_CASE("everything maps onto a single target") {
  DiscreteMeasure mu = measure({0.0, 0.3, 0.9}, {Rational(1, 7), Rational(2, 7), Rational(4, 7)});
  DiscreteMeasure nu = DiscreteMeasure::dirac(Point{5.0});
  auto assignment = feasible_pushforward(mu, nu);
  REQUIRE(assignment.has_value());
  CHECK(assignment->target_index == std::vector<std::size_t>{0, 0, 0});
}

TEST_CASE("no subset of {3/10, 7/10} reaches 1/2") {
  DiscreteMeasure mu = measure({0.0, 1.0}, {Rational(3, 10), Rational(7, 10)});
  DiscreteMeasure nu = measure({5.0, 6.0}, {Rational(1, 2), Rational(1, 2)});
  CHECK_FALSE(feasible_pushforward(mu, nu).has_value());
}

TEST_CASE("a feasible grouping is found: 3/10 + 1/5 = 1/2") {
  DiscreteMeasure mu = measure({0.0, 1.0, 2.0}, {Rational(1, 2), Rational(3, 10), Rational(1, 5)});
  DiscreteMeasure nu = measure({5.0, 6.0}, {Rational(1, 2), Rational(1, 2)});
  auto assignment = feasible_pushforward(mu, nu);
  REQUIRE(assignment.has_value());
  CHECK(assignment->target_index == std::vector<std::size_t>{0, 1, 1});
  CHECK(pushforward_by_assignment(mu, nu, *assignment) == nu);
}

TEST_CASE("a returned assignment reconstructs the target exactly") {
  std::uint64_t state = 3;
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t m = 2 + static_cast<std::size_t>(unif(state) * 8);
    std::size_t k = 1 + static_cast<std::size_t>(unif(state) * 3);
    auto weights = testsupport::random_weights(state, m);
    // Build nu by grouping the atoms, so feasibility is guaranteed.
    std::vector<Rational> sums(k);
    for (std::size_t i = 0; i < m; ++i) {
      sums[static_cast<std::size_t>(unif(state) * k)] += weights[i];
    }
    std::vector<Point> targets;
    std::vector<Rational> target_weights;
    for (std::size_t j = 0; j < k; ++j) {
      if (!sums[j].is_zero()) {
        targets.push_back(Point{10.0 + static_cast<double>(j)});
        target_weights.push_back(sums[j]);
      }
    }
    DiscreteMeasure mu(testsupport::random_points_1d(state, m, 0.0, 1.0), weights);
    DiscreteMeasure nu(targets, target_weights);
    auto assignment = feasible_pushforward(mu, nu);
    REQUIRE(assignment.has_value());
    CHECK(pushforward_by_assignment(mu, nu, *assignment) == nu);
  }
}

TEST_CASE("feasibility is invariant under atom permutations") {
  std::uint64_t state = 19;
  for (int trial = 0; trial < 15; ++trial) {
    std::size_t m = 3 + static_cast<std::size_t>(unif(state) * 5);
    DiscreteMeasure mu(testsupport::random_points_1d(state, m, 0.0, 1.0),
                       testsupport::random_weights(state, m));
    DiscreteMeasure nu = measure({5.0, 6.0}, {Rational(1, 2), Rational(1, 2)});
    bool base = feasible_pushforward(mu, nu).has_value();

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = m; i > 1; --i) {
      std::swap(order[i - 1], order[static_cast<std::size_t>(unif(state) * i)]);
    }
    std::vector<Point> atoms;
    std::vector<Rational> weights;
    for (std::size_t i : order) {
      atoms.push_back(mu.atom(i));
      weights.push_back(mu.weight(i));
    }
    DiscreteMeasure shuffled(atoms, weights);
    CHECK(feasible_pushforward(shuffled, nu).has_value() == base);

    DiscreteMeasure nu_swapped = measure({6.0, 5.0}, {Rational(1, 2), Rational(1, 2)});
    CHECK(feasible_pushforward(mu, nu_swapped).has_value() == base);
  }
}

TEST_CASE("generic sources admit at most one assignment") {
  std::uint64_t state = 29;
  for (int trial = 0; trial < 15; ++trial) {
    std::size_t m = 3 + static_cast<std::size_t>(unif(state) * 6);
    DiscreteMeasure mu(testsupport::random_points_1d(state, m, 0.0, 1.0),
                       generic_weights(m).entries);
    // Group into two targets.
    std::vector<Rational> sums(2);
    for (std::size_t i = 0; i < m; ++i) {
      sums[static_cast<std::size_t>(unif(state) * 2)] += mu.weight(i);
    }
    if (sums[0].is_zero() || sums[1].is_zero()) continue;
    DiscreteMeasure nu({Point{5.0}, Point{6.0}}, sums);
    auto all = enumerate_pushforward_assignments(mu, nu, 2);
    CHECK(all.size() == 1);
  }
}

TEST_CASE("the cap is enforced") {
  std::uint64_t state = 99;
  std::vector<Rational> weights(21, Rational(1, 21));
  DiscreteMeasure mu(testsupport::random_points_1d(state, 21, 0.0, 1.0), weights);
  DiscreteMeasure nu = DiscreteMeasure::dirac(Point{0.0});
  CHECK_THROWS_AS(feasible_pushforward(mu, nu), CapacityError);
}

TEST_CASE("oracle feasibility report across inputs") {
  // Pushforward by a fixed map: always feasible.
  auto square = gallery::pushforward_oracle_1d([](double x) { return x * x; }, 1.0, "square",
                                               std::nullopt);
  std::vector<DiscreteMeasure> inputs;
  inputs.push_back(measure({0.0, 1.0, 2.0}, {Rational(1, 7), Rational(2, 7), Rational(4, 7)}));
  inputs.push_back(measure({-1.0, 1.0}, {Rational(1, 2), Rational(1, 2)}));
  auto report = feasible_all_pairs(inputs, square);
  CHECK(report.all_feasible);
  for (const auto& row : report.rows) CHECK(row.status == FeasibilityStatus::kFeasible);

  // The constant two-atom map cannot be represented on a Dirac mass.
  auto constant = gallery::splitting_counterexample_oracle();
  auto dirac_report = feasible_all_pairs({DiscreteMeasure::dirac(Point{0.0})}, constant);
  CHECK(dirac_report.rows[0].status == FeasibilityStatus::kInfeasible);
  CHECK_FALSE(dirac_report.all_feasible);

  // Infeasible for (1/3, 2/3), feasible for (1/2, 1/2).
  auto skew_report = feasible_all_pairs(
      {measure({0.0, 1.0}, {Rational(1, 3), Rational(2, 3)}),
       measure({0.0, 1.0}, {Rational(1, 2), Rational(1, 2)})},
      constant);
  CHECK(skew_report.rows[0].status == FeasibilityStatus::kInfeasible);
  CHECK(skew_report.rows[1].status == FeasibilityStatus::kFeasible);
}

TEST_CASE("oracle failures carry the input identity") {
  MeasureMapOracle broken;
  broken.name = "broken";
  broken.apply = [](const DiscreteMeasure&) -> DiscreteMeasure {
    throw OracleError("deliberate failure");
  };
  auto report = feasible_all_pairs({DiscreteMeasure::dirac(Point{0.0})}, broken);
  CHECK(report.rows[0].status == FeasibilityStatus::kOracleError);
  CHECK(report.rows[0].detail.find("input 0") != std::string::npos);
}
