#include "transport/gallery.hpp"

#include <cmath>
#include <memory>
#include <utility>

namespace transport {
namespace gallery {

DiscreteMeasure GridDiscretizer::uniform() const {
  if (cells < 1) throw ValidationError("grid discretizer needs at least one cell");
  if (!(lo < hi)) throw ValidationError("grid discretizer needs a nonempty interval");
  std::vector<Point> atoms;
  std::vector<Rational> weights;
  double width = (hi - lo) / cells;
  for (int k = 0; k < cells; ++k) {
    atoms.push_back(Point{lo + (k + 0.5) * width});
    weights.emplace_back(1, cells);
  }
  return DiscreteMeasure(std::move(atoms), std::move(weights));
}

DiscreteMeasure GridDiscretizer::with_density(const std::function<double(double)>& density,
                                              int denominator_bits) const {
  if (cells < 1) throw ValidationError("grid discretizer needs at least one cell");
  if (denominator_bits < 1 || denominator_bits > 40) {
    throw ValidationError("grid discretizer: denominator bits out of range");
  }
  std::vector<Point> atoms;
  std::vector<Rational> raw;
  const std::int64_t denom = std::int64_t{1} << denominator_bits;
  Rational total;
  double width = (hi - lo) / cells;
  for (int k = 0; k < cells; ++k) {
    double x = lo + (k + 0.5) * width;
    double value = density(x);
    if (!(value > 0)) {
      throw ValidationError("grid discretizer: density must be positive at cell midpoints");
    }
    std::int64_t numer = std::llround(value * static_cast<double>(denom));
    if (numer <= 0) numer = 1;
    atoms.push_back(Point{x});
    raw.emplace_back(numer, denom);
    total += raw.back();
  }
  std::vector<Rational> weights;
  weights.reserve(raw.size());
  for (const auto& r : raw) weights.push_back(r / total);
  return DiscreteMeasure(std::move(atoms), std::move(weights));
}

double periodic_tent(double x) {
  double u = x - std::floor(x);
  return 2.0 * std::min(u, 1.0 - u);
}

MeasureMapOracle pushforward_oracle(std::function<Point(const Point&)> g, double p,
                                    std::string name, std::optional<double> lipschitz) {
  MeasureMapOracle oracle;
  oracle.name = std::move(name);
  oracle.p = p;
  oracle.lipschitz = lipschitz;
  oracle.apply = [g = std::move(g)](const DiscreteMeasure& mu) {
    std::vector<Point> atoms;
    atoms.reserve(mu.size());
    for (const auto& x : mu.atoms()) atoms.push_back(g(x));
    return DiscreteMeasure(std::move(atoms), mu.weights());
  };
  return oracle;
}

MeasureMapOracle pushforward_oracle_1d(std::function<double(double)> g, double p, std::string name,
                                       std::optional<double> lipschitz) {
  return pushforward_oracle(
      [g = std::move(g)](const Point& x) {
        if (x.dim() != 1) throw ValidationError("this oracle expects 1-d points");
        return Point{g(x[0])};
      },
      p, std::move(name), lipschitz);
}

TransportFamily periodic_scaling_family(double alpha, DiscreteMeasure lambda_ref, double p) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("periodic scaling: alpha must lie in (0, 1)");
  }
  auto reference = std::make_shared<DiscreteMeasure>(std::move(lambda_ref));
  return [alpha, p, reference](const Point& x, const DiscreteMeasure& mu) {
    if (x.dim() != 1) throw ValidationError("periodic scaling expects 1-d points");
    if (mu == *reference) return x;
    double w = wasserstein(mu, *reference, p).distance;
    double period = std::pow(w, alpha);
    return Point{periodic_tent(x[0] / period)};
  };
}

MeasureMapOracle periodic_scaling_oracle(double alpha, DiscreteMeasure lambda_ref, double p) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("periodic scaling: alpha must lie in (0, 1)");
  }
  auto reference = std::make_shared<DiscreteMeasure>(std::move(lambda_ref));
  MeasureMapOracle oracle;
  oracle.name = "periodic-scaling";
  oracle.p = p;
  // One solver call per measure; the pointwise family would repeat it per atom.
  oracle.apply = [alpha, p, reference](const DiscreteMeasure& mu) {
    if (mu == *reference) return mu;
    double period = std::pow(wasserstein(mu, *reference, p).distance, alpha);
    std::vector<Point> atoms;
    atoms.reserve(mu.size());
    for (const auto& x : mu.atoms()) {
      if (x.dim() != 1) throw ValidationError("periodic scaling expects 1-d points");
      atoms.push_back(Point{periodic_tent(x[0] / period)});
    }
    return DiscreteMeasure(std::move(atoms), mu.weights());
  };
  return oracle;
}

TransportFamily tanh_family(DiscreteMeasure lambda_ref, double p) {
  auto reference = std::make_shared<DiscreteMeasure>(std::move(lambda_ref));
  return [p, reference](const Point& x, const DiscreteMeasure& mu) {
    if (x.dim() != 1) throw ValidationError("tanh family expects 1-d points");
    if (mu == *reference) {
      double s = x[0] > 0 ? 1.0 : (x[0] < 0 ? -1.0 : 0.0);
      return Point{s};
    }
    double w = wasserstein(mu, *reference, p).distance;
    return Point{std::tanh(x[0] / w)};
  };
}

MeasureMapOracle tanh_oracle(DiscreteMeasure lambda_ref, double p) {
  auto reference = std::make_shared<DiscreteMeasure>(std::move(lambda_ref));
  MeasureMapOracle oracle;
  oracle.name = "tanh";
  oracle.p = p;
  oracle.apply = [p, reference](const DiscreteMeasure& mu) {
    if (mu == *reference) {
      return DiscreteMeasure({Point{-1.0}, Point{1.0}}, {Rational(1, 2), Rational(1, 2)});
    }
    double w = wasserstein(mu, *reference, p).distance;
    std::vector<Point> atoms;
    atoms.reserve(mu.size());
    for (const auto& x : mu.atoms()) {
      if (x.dim() != 1) throw ValidationError("tanh oracle expects 1-d points");
      atoms.push_back(Point{std::tanh(x[0] / w)});
    }
    return DiscreteMeasure(std::move(atoms), mu.weights());
  };
  return oracle;
}

double sign_ratio(const DiscreteMeasure& mu) {
  if (mu.dim() != 1) throw ValidationError("sign_ratio expects 1-d measures");
  double mean = 0.0, abs_mean = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    double w = mu.weight(i).to_double();
    mean += w * mu.atom(i)[0];
    abs_mean += w * std::abs(mu.atom(i)[0]);
  }
  if (abs_mean == 0.0) return 0.0;  // mu = delta_0
  return mean / abs_mean;
}

TransportFamily sign_ratio_family() {
  return [](const Point& x, const DiscreteMeasure& mu) {
    if (x.dim() != 1) throw ValidationError("sign_ratio expects 1-d points");
    return Point{sign_ratio(mu) * x[0]};
  };
}

MeasureMapOracle sign_ratio_oracle() {
  MeasureMapOracle oracle;
  oracle.name = "sign-ratio";
  oracle.p = 1.0;
  oracle.lipschitz = 3.0;
  oracle.apply = [](const DiscreteMeasure& mu) {
    double s = sign_ratio(mu);
    std::vector<Point> atoms;
    atoms.reserve(mu.size());
    for (const auto& x : mu.atoms()) atoms.push_back(Point{s * x[0]});
    return DiscreteMeasure(std::move(atoms), mu.weights());
  };
  return oracle;
}

WitnessSequences discontinuity_witness_sequences(int n_max) {
  if (n_max < 3) throw ValidationError("witness sequences start at n = 3");
  WitnessSequences out;
  for (int n = 3; n <= n_max; ++n) {
    double spike = 1.0 / std::sqrt(static_cast<double>(n));
    Rational small(1, n);
    Rational rest = Rational(1) - small;
    out.plus.push_back(DiscreteMeasure({Point{1.0}, Point{spike}}, {small, rest}));
    out.minus.push_back(DiscreteMeasure({Point{1.0}, Point{-spike}}, {small, rest}));
  }
  return out;
}

MeasureMapOracle splitting_counterexample_oracle() {
  MeasureMapOracle oracle;
  oracle.name = "constant-split";
  oracle.p = 1.0;
  oracle.apply = [](const DiscreteMeasure&) {
    return DiscreteMeasure({Point{0.0}, Point{1.0}}, {Rational(1, 2), Rational(1, 2)});
  };
  return oracle;
}

}  // namespace gallery
}  // namespace transport
