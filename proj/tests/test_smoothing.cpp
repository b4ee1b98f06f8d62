#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stochrank/metric.hpp"
#include "stochrank/rng.hpp"
#include "stochrank/smoothing.hpp"
#include "test_util.hpp"

using namespace stochrank;

namespace {
SmoothingSpec make_spec(SmoothingFamily family, double mu, double sigma) {
  SmoothingSpec s;
  s.family = family;
  s.mu = mu;
  s.sigma = sigma;
  return s;
}
}  // namespace

TEST_CASE("noise means follow the family") {
  const SmoothingSpec shifted = make_spec(SmoothingFamily::relevance_shifted, 2.0, 1.0);
  CHECK(noise_mean(shifted, 0.0) == 0.0);
  CHECK(noise_mean(shifted, 0.5) == -1.0);
  CHECK(noise_mean(shifted, 1.0) == -2.0);
  const SmoothingSpec centered = make_spec(SmoothingFamily::centered, 2.0, 1.0);
  CHECK(noise_mean(centered, 1.0) == 0.0);
}

TEST_CASE("sampled noise has the advertised mean and unit variance") {
  const SmoothingSpec spec = make_spec(SmoothingFamily::relevance_shifted, 2.0, 0.7);
  const Vector relevance = (Vector(3) << 0.0, 0.5, 1.0).finished();
  Rng rng(derive_stream(31, StreamPurpose::smoothing_noise, 0));
  const Index draws = 40000;
  Vector sum = Vector::Zero(3), sum_sq = Vector::Zero(3);
  for (Index m = 0; m < draws; ++m) {
    const Vector eps = sample_noise(spec, relevance, rng);
    sum += eps;
    sum_sq += eps.cwiseProduct(eps);
  }
  const double d = static_cast<double>(draws);
  const double mean_se = 1.0 / std::sqrt(d);
  const double var_se = std::sqrt(2.0 / d);
  for (Index j = 0; j < 3; ++j) {
    const double mean = sum[j] / d;
    const double var = (sum_sq[j] - sum[j] * sum[j] / d) / (d - 1.0);
    CHECK(std::abs(mean - noise_mean(spec, relevance[j])) < 4.0 * mean_se);
    CHECK(std::abs(var - 1.0) < 4.0 * var_se);
  }
}

TEST_CASE("conditional density integrates to one and matches the Gaussian form") {
  const SmoothingSpec spec = make_spec(SmoothingFamily::relevance_shifted, 3.0, 1.0);
  const double r = 0.8;
  const double mean = noise_mean(spec, r);
  // Trapezoid over mean +- 8.
  const Index steps = 200000;
  const double lo = mean - 8.0, hi = mean + 8.0;
  const double h = (hi - lo) / static_cast<double>(steps);
  double integral = 0.5 * (conditional_density(spec, r, lo) + conditional_density(spec, r, hi));
  for (Index i = 1; i < steps; ++i)
    integral += conditional_density(spec, r, lo + h * static_cast<double>(i));
  integral *= h;
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));

  const double t = mean + 1.3;
  const double expected = std::exp(-0.5 * 1.3 * 1.3) / std::sqrt(2.0 * std::numbers::pi);
  CHECK(conditional_density(spec, r, t) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(conditional_density(spec, r, mean) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-14));
}

TEST_CASE("smoothed value is invariant under joint score/scale dilation") {
  MetricSpec metric;
  metric.kind = MetricKind::ndcg;
  metric.truncation = 3;
  Rng gen(derive_stream(32, StreamPurpose::fuzz, 1));
  const Vector labels = testutil::random_labels(metric.kind, 5, gen);
  const Vector z = testutil::random_scores(5, gen);
  const SmoothingSpec base = make_spec(SmoothingFamily::relevance_shifted, 1.0, 0.75);
  const SmoothingSpec dilated = make_spec(SmoothingFamily::relevance_shifted, 1.0, 4.0 * 0.75);

  Rng rng_a(derive_stream(32, StreamPurpose::smoothing_noise, 7));
  Rng rng_b(derive_stream(32, StreamPurpose::smoothing_noise, 7));
  const McValue a = mc_smoothed_metric(metric, base, z, labels, 2000, rng_a);
  const McValue b = mc_smoothed_metric(metric, dilated, (4.0 * z).eval(), labels, 2000, rng_b);
  CHECK(a.mean == b.mean);
  CHECK(a.se == b.se);
}

TEST_CASE("shifted smoothing concentrates on the worst tied value, centered on the average") {
  // Two tied documents with labels (1, 0): the worst arrangement scores
  // 1/log2(3), the tied average is the midpoint to 1.
  MetricSpec metric;
  metric.kind = MetricKind::ndcg;
  const Vector labels = (Vector(2) << 1.0, 0.0).finished();
  const Vector z = Vector::Zero(2);

  Rng rng_shift(derive_stream(33, StreamPurpose::smoothing_noise, 0));
  const McValue shifted = mc_smoothed_metric(
      metric, make_spec(SmoothingFamily::relevance_shifted, 10.0, 0.1), z, labels, 20000,
      rng_shift);
  CHECK(std::abs(shifted.mean - 0.63092975357145753) < 4.0 * shifted.se + 1e-9);

  Rng rng_center(derive_stream(33, StreamPurpose::smoothing_noise, 1));
  const McValue centered = mc_smoothed_metric(
      metric, make_spec(SmoothingFamily::centered, 0.0, 0.1), z, labels, 20000, rng_center);
  CHECK(std::abs(centered.mean - 0.81546487678572877) < 4.0 * centered.se);
  CHECK(centered.se > 0.0);
}

TEST_CASE("parameter validation") {
  const Vector r = Vector::Zero(2);
  Rng rng(derive_stream(34, StreamPurpose::smoothing_noise, 0));
  CHECK_THROWS_AS((void)sample_noise(make_spec(SmoothingFamily::relevance_shifted, -1.0, 1.0), r, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)sample_noise(make_spec(SmoothingFamily::relevance_shifted, 1.0, 0.0), r, rng),
                  std::invalid_argument);
  MetricSpec metric;
  metric.kind = MetricKind::ndcg;
  CHECK_THROWS_AS((void)mc_smoothed_metric(metric, make_spec(SmoothingFamily::centered, 0.0, 1.0),
                                           r, r, 1, rng),
                  std::invalid_argument);
}
