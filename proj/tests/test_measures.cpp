#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "support.hpp"
#include "transport/measure.hpp"

using namespace transport;

TEST_CASE("ground distance is the Euclidean metric") {
  CHECK(ground_distance(Point{0.0}, Point{1.0}) == doctest::Approx(1.0));
  CHECK(ground_distance(Point{0.7}, Point{0.7}) == 0.0);
  CHECK(ground_distance(Point{0.0, 0.0}, Point{3.0, 4.0}) == doctest::Approx(5.0));
  CHECK_THROWS_AS(ground_distance(Point{0.0}, Point{0.0, 0.0}), ValidationError);
}

TEST_CASE("points reject non-finite coordinates") {
  CHECK_THROWS_AS(Point{std::numeric_limits<double>::quiet_NaN()}, ValidationError);
  CHECK_THROWS_AS(Point{std::numeric_limits<double>::infinity()}, ValidationError);
}

TEST_CASE("measures merge duplicate atoms and keep exact total mass") {
  DiscreteMeasure mu({Point{0.0}, Point{1.0}, Point{0.0}},
                     {Rational(1, 4), Rational(1, 2), Rational(1, 4)});
  CHECK(mu.size() == 2);
  CHECK(mu.mass_at(Point{0.0}) == Rational(1, 2));
  Rational total;
  for (const auto& w : mu.weights()) total += w;
  CHECK(total == Rational(1));
}

TEST_CASE("measure construction validates weights") {
  CHECK_THROWS_AS(DiscreteMeasure({Point{0.0}}, {Rational(1, 2)}), ValidationError);
  CHECK_THROWS_AS(DiscreteMeasure({Point{0.0}, Point{1.0}}, {Rational(1), Rational(0)}),
                  ValidationError);
  CHECK_THROWS_AS(DiscreteMeasure({Point{0.0}, Point{1.0, 2.0}},
                                  {Rational(1, 2), Rational(1, 2)}),
                  ValidationError);
}

TEST_CASE("measure equality ignores atom order") {
  DiscreteMeasure a({Point{0.0}, Point{1.0}}, {Rational(1, 3), Rational(2, 3)});
  DiscreteMeasure b({Point{1.0}, Point{0.0}}, {Rational(2, 3), Rational(1, 3)});
  DiscreteMeasure c({Point{0.0}, Point{1.0}}, {Rational(2, 3), Rational(1, 3)});
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("uniform weights are not generic; the witness is a colliding pair") {
  auto verdict = is_generic(WeightVector({Rational(1, 2), Rational(1, 2)}));
  CHECK_FALSE(verdict.generic);
  CHECK(verdict.witness_first == std::vector<std::size_t>{0});
  CHECK(verdict.witness_second == std::vector<std::size_t>{1});
}

TEST_CASE("binary weights are generic") {
  CHECK(is_generic(WeightVector({Rational(1, 7), Rational(2, 7), Rational(4, 7)})).generic);
}

TEST_CASE("a subset-sum collision is detected with its witness") {
  // 1/5 + 3/10 = 1/2
  WeightVector w({Rational(1, 5), Rational(3, 10), Rational(1, 2)});
  auto verdict = is_generic(w);
  CHECK_FALSE(verdict.generic);
  Rational sum_first, sum_second;
  for (auto i : verdict.witness_first) sum_first += w[i];
  for (auto i : verdict.witness_second) sum_second += w[i];
  CHECK(sum_first == sum_second);
  CHECK(verdict.witness_first != verdict.witness_second);
}

TEST_CASE("is_generic enforces its cap") {
  std::vector<Rational> weights(25, Rational(1, 25));
  CHECK_THROWS_AS(is_generic(WeightVector(weights)), CapacityError);
}

TEST_CASE("generic_weights produces the binary family") {
  CHECK(generic_weights(1).entries == std::vector<Rational>{Rational(1)});
  CHECK(generic_weights(3).entries ==
        std::vector<Rational>{Rational(1, 7), Rational(2, 7), Rational(4, 7)});
  CHECK(generic_weights(4).entries == std::vector<Rational>{Rational(1, 15), Rational(2, 15),
                                                            Rational(4, 15), Rational(8, 15)});
}

TEST_CASE("generic_weights is generic for every m up to 20") {
  for (std::size_t m = 1; m <= 20; ++m) {
    CHECK(is_generic(generic_weights(m)).generic);
  }
}

TEST_CASE("is_generic is invariant under permutations") {
  std::uint64_t state = 7;
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t m = 2 + static_cast<std::size_t>(testsupport::unif(state) * 6);
    auto weights = testsupport::random_weights(state, m);
    bool base = is_generic(WeightVector(weights)).generic;
    std::vector<Rational> shuffled(weights);
    for (std::size_t i = m; i > 1; --i) {
      std::swap(shuffled[i - 1], shuffled[static_cast<std::size_t>(testsupport::unif(state) * i)]);
    }
    CHECK(is_generic(WeightVector(shuffled)).generic == base);
  }
}

TEST_CASE("generic vectors have distinct positive entries") {
  std::uint64_t state = 11;
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t m = 2 + static_cast<std::size_t>(testsupport::unif(state) * 6);
    auto weights = testsupport::random_weights(state, m);
    if (!is_generic(WeightVector(weights)).generic) continue;
    for (std::size_t i = 0; i < m; ++i) {
      CHECK(weights[i] > Rational(0));
      for (std::size_t j = i + 1; j < m; ++j) CHECK(weights[i] != weights[j]);
    }
  }
}

TEST_CASE("nearest_generic returns generic input unchanged") {
  WeightVector a = generic_weights(3);
  CHECK(nearest_generic(a, Rational(1, 10)) == a);
}

TEST_CASE("nearest_generic repairs the uniform vector within tolerance") {
  WeightVector a({Rational(1, 2), Rational(1, 2)});
  Rational tol(1, 10);
  WeightVector fixed = nearest_generic(a, tol);
  CHECK(is_generic(fixed).generic);
  for (std::size_t i = 0; i < 2; ++i) {
    Rational dev = fixed[i] - a[i];
    if (dev.is_negative()) dev = -dev;
    CHECK(dev <= tol);
  }
}

TEST_CASE("nearest_generic meets a tight tolerance on the uniform 3-vector") {
  WeightVector a({Rational(1, 3), Rational(1, 3), Rational(1, 3)});
  Rational tol(1, 100);
  WeightVector fixed = nearest_generic(a, tol);
  CHECK(is_generic(fixed).generic);
  for (std::size_t i = 0; i < 3; ++i) {
    Rational dev = fixed[i] - a[i];
    if (dev.is_negative()) dev = -dev;
    CHECK(dev <= tol);
  }
  Rational total;
  for (const auto& w : fixed.entries) total += w;
  CHECK(total == Rational(1));
}

TEST_CASE("support separation") {
  DiscreteMeasure two({Point{0.0}, Point{1.0}}, {Rational(1, 2), Rational(1, 2)});
  CHECK(support_separation(two) == doctest::Approx(1.0));

  DiscreteMeasure three({Point{0.0}, Point{0.5}, Point{2.0}},
                        {Rational(1, 3), Rational(1, 3), Rational(1, 3)});
  CHECK(support_separation(three) == doctest::Approx(0.5));

  DiscreteMeasure plane({Point{0.0, 0.0}, Point{3.0, 4.0}, Point{3.0, 5.0}},
                        {Rational(1, 3), Rational(1, 3), Rational(1, 3)});
  CHECK(support_separation(plane) == doctest::Approx(1.0));

  CHECK(support_separation(DiscreteMeasure::dirac(Point{0.0})) ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("sub-measures validate domination") {
  DiscreteMeasure mu({Point{0.0}, Point{1.0}}, {Rational(1, 3), Rational(2, 3)});
  SubMeasure lambda({Point{0.0}}, {Rational(1, 4)});
  CHECK(lambda.dominated_by(mu));
  SubMeasure heavy({Point{0.0}}, {Rational(1, 2)});
  CHECK_FALSE(heavy.dominated_by(mu));
  CHECK_THROWS_AS(SubMeasure({Point{0.0}}, {Rational(2)}), ValidationError);
}
