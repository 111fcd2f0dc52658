#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "transport/gallery.hpp"
#include "transport/representative.hpp"
#include "transport/solver.hpp"

using namespace transport;
using namespace transport::gallery;

namespace {

DiscreteMeasure measure(std::vector<double> xs, std::vector<Rational> ws) {
  std::vector<Point> atoms;
  for (double x : xs) atoms.push_back(Point{x});
  return DiscreteMeasure(std::move(atoms), std::move(ws));
}

}  // namespace

TEST_CASE("grid discretizers produce exact probability measures") {
  GridDiscretizer grid{0.0, 1.0, 8};
  DiscreteMeasure uniform = grid.uniform();
  CHECK(uniform.size() == 8);
  CHECK(uniform.atom(0)[0] == doctest::Approx(1.0 / 16.0));
  Rational total;
  for (const auto& w : uniform.weights()) total += w;
  CHECK(total == Rational(1));

  DiscreteMeasure tilted = grid.with_density([](double x) { return 1.0 + 0.2 * std::cos(x); });
  Rational tilted_total;
  for (const auto& w : tilted.weights()) tilted_total += w;
  CHECK(tilted_total == Rational(1));
  CHECK(tilted.size() == 8);
}

TEST_CASE("periodic tent fixes the unit Lebesgue measure") {
  CHECK(periodic_tent(0.0) == doctest::Approx(0.0));
  CHECK(periodic_tent(0.25) == doctest::Approx(0.5));
  CHECK(periodic_tent(0.5) == doctest::Approx(1.0));
  CHECK(periodic_tent(1.25) == doctest::Approx(0.5));
  CHECK(periodic_tent(-0.25) == doctest::Approx(0.5));

  // Pushing a fine grid through g stays W_1-close to the grid itself.
  GridDiscretizer grid{0.0, 1.0, 128};
  DiscreteMeasure lambda = grid.uniform();
  auto tent = pushforward_oracle_1d(&periodic_tent, 1.0, "tent", 2.0);
  CHECK(wasserstein(tent(lambda), lambda, 1.0).distance <= 0.02);
}

TEST_CASE("pushforward oracle merges collisions exactly") {
  auto id = pushforward_oracle_1d([](double x) { return x; }, 1.0, "id", 1.0);
  DiscreteMeasure mu = measure({0.2, 0.7}, {Rational(1, 3), Rational(2, 3)});
  CHECK(id(mu) == mu);

  auto square = pushforward_oracle_1d([](double x) { return x * x; }, 1.0, "square", std::nullopt);
  DiscreteMeasure pm = measure({-1.0, 1.0}, {Rational(1, 2), Rational(1, 2)});
  DiscreteMeasure image = square(pm);
  CHECK(image.size() == 1);
  CHECK(image.mass_at(Point{1.0}) == Rational(1));

  // Tent on a coarse grid, against hand-computed images: midpoints 1/8 and
  // 7/8 both map to 1/4, midpoints 3/8 and 5/8 both map to 3/4.
  GridDiscretizer grid{0.0, 1.0, 4};
  auto tent = pushforward_oracle_1d(&periodic_tent, 1.0, "tent", 2.0);
  DiscreteMeasure tent_image = tent(grid.uniform());
  CHECK(tent_image.size() == 2);
  CHECK(tent_image.mass_at(Point{0.25}) == Rational(1, 2));
  CHECK(tent_image.mass_at(Point{0.75}) == Rational(1, 2));
}

TEST_CASE("periodic scaling oracle fixes the reference and Dirac at zero") {
  GridDiscretizer grid{0.0, 1.0, 32};
  DiscreteMeasure lambda = grid.uniform();
  auto oracle = periodic_scaling_oracle(0.5, lambda, 1.0);
  CHECK(oracle(lambda) == lambda);

  DiscreteMeasure dirac = DiscreteMeasure::dirac(Point{0.0});
  CHECK(oracle(dirac) == dirac);  // g(0) = 0
}

TEST_CASE("tanh oracle maps the reference to the two-point limit") {
  GridDiscretizer grid{-1.0, 1.0, 128};
  DiscreteMeasure lambda = grid.uniform();
  auto oracle = tanh_oracle(lambda, 1.0);
  DiscreteMeasure limit = oracle(lambda);
  CHECK(limit.size() == 2);
  CHECK(limit.mass_at(Point{-1.0}) == Rational(1, 2));
  CHECK(limit.mass_at(Point{1.0}) == Rational(1, 2));

  DiscreteMeasure dirac = DiscreteMeasure::dirac(Point{0.0});
  CHECK(oracle(dirac) == dirac);  // tanh(0) = 0

  // Grids refining toward the (much finer) reference: the images approach
  // the two-point limit with decreasing distances.
  double previous = std::numeric_limits<double>::infinity();
  for (int cells : {8, 16, 48}) {
    DiscreteMeasure approx = GridDiscretizer{-1.0, 1.0, cells}.uniform();
    double d = wasserstein(oracle(approx), limit, 1.0).distance;
    CHECK(d < previous);
    previous = d;
  }
}

TEST_CASE("sign ratio formula and oracle") {
  CHECK(sign_ratio(DiscreteMeasure::dirac(Point{0.0})) == 0.0);
  CHECK(sign_ratio(DiscreteMeasure::dirac(Point{0.4})) == doctest::Approx(1.0));
  CHECK(sign_ratio(DiscreteMeasure::dirac(Point{-0.4})) == doctest::Approx(-1.0));

  auto oracle = sign_ratio_oracle();
  CHECK(oracle(DiscreteMeasure::dirac(Point{0.0})) == DiscreteMeasure::dirac(Point{0.0}));
  DiscreteMeasure positive = DiscreteMeasure::dirac(Point{0.4});
  CHECK(oracle(positive) == positive);

  // mu = (1/4) d_1 + (3/4) d_{-1/2}: s = -1/5, image = (1/4) d_{-1/5} + (3/4) d_{1/10}.
  DiscreteMeasure mu = measure({1.0, -0.5}, {Rational(1, 4), Rational(3, 4)});
  CHECK(sign_ratio(mu) == doctest::Approx(-0.2).epsilon(1e-15));
  DiscreteMeasure image = oracle(mu);
  CHECK(image.mass_at(Point{sign_ratio(mu) * 1.0}) == Rational(1, 4));
  CHECK(image.mass_at(Point{sign_ratio(mu) * -0.5}) == Rational(3, 4));
}

TEST_CASE("sign ratio oracle respects the 3-Lipschitz bound on sampled pairs") {
  auto oracle = sign_ratio_oracle();
  std::uint64_t state = 77;
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t m1 = 1 + static_cast<std::size_t>(testsupport::unif(state) * 5);
    std::size_t m2 = 1 + static_cast<std::size_t>(testsupport::unif(state) * 5);
    DiscreteMeasure a = testsupport::random_measure_1d(state, m1, -1.0, 1.0);
    DiscreteMeasure b = testsupport::random_measure_1d(state, m2, -1.0, 1.0);
    double lhs = wasserstein(oracle(a), oracle(b), 1.0).distance;
    double rhs = 3.0 * wasserstein(a, b, 1.0).distance;
    CHECK(lhs <= rhs + 1e-9);
  }
}

TEST_CASE("witness sequences match the displayed formula and are generic") {
  WitnessSequences seqs = discontinuity_witness_sequences(10);
  // n = 4 sits at index 1.
  const DiscreteMeasure& mu4 = seqs.plus[1];
  CHECK(mu4.mass_at(Point{1.0}) == Rational(1, 4));
  CHECK(mu4.mass_at(Point{0.5}) == Rational(3, 4));

  for (const auto& mu : seqs.plus) CHECK(is_generic(mu.weight_vector()).generic);
  for (const auto& mu : seqs.minus) CHECK(is_generic(mu.weight_vector()).generic);

  // Reconstruction recovers s(mu) * x at the spike atom.
  auto oracle = sign_ratio_oracle();
  for (std::size_t k = 0; k < seqs.plus.size(); ++k) {
    auto plus = reconstruct_on_generic(oracle, seqs.plus[k]);
    CHECK(plus.values[0][0] == doctest::Approx(sign_ratio(seqs.plus[k])).epsilon(1e-15));
    auto minus = reconstruct_on_generic(oracle, seqs.minus[k]);
    CHECK(minus.values[0][0] == doctest::Approx(sign_ratio(seqs.minus[k])).epsilon(1e-15));
  }
}

TEST_CASE("splitting counterexample oracle") {
  auto oracle = splitting_counterexample_oracle();
  DiscreteMeasure image = oracle(DiscreteMeasure::dirac(Point{7.0}));
  CHECK(image.mass_at(Point{0.0}) == Rational(1, 2));
  CHECK(image.mass_at(Point{1.0}) == Rational(1, 2));
}

TEST_CASE("oracles are deterministic") {
  GridDiscretizer grid{0.0, 1.0, 16};
  DiscreteMeasure lambda = grid.uniform();
  auto oracle = periodic_scaling_oracle(0.5, lambda, 1.0);
  DiscreteMeasure mu = measure({0.2, 0.5, 0.9}, generic_weights(3).entries);
  DiscreteMeasure first = oracle(mu);
  DiscreteMeasure second = oracle(mu);
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first.atom(i) == second.atom(i));  // bitwise
    CHECK(first.weight(i) == second.weight(i));
  }
}

TEST_CASE("periodic scaling continuity bound at the reference (coarse check)") {
  // Small displacement of a coarse grid; measured distance against the bound
  // L W^{1-a} + 2 W^a + discretization budget.
  GridDiscretizer grid{0.0, 1.0, 64};
  DiscreteMeasure lambda = grid.uniform();
  auto oracle = periodic_scaling_oracle(0.5, lambda, 1.0);
  std::vector<Point> moved;
  for (const auto& x : lambda.atoms()) {
    moved.push_back(Point{x[0] + 0.01 * std::sin(2.0 * M_PI * x[0])});
  }
  DiscreteMeasure mu(moved, lambda.weights());
  double w = wasserstein(mu, lambda, 1.0).distance;
  double measured = wasserstein(oracle(mu), lambda, 1.0).distance;
  CHECK(measured <= 2.0 * std::pow(w, 0.5) + 2.0 * std::pow(w, 0.5) + 0.05);
}
