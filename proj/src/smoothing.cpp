#include "stochrank/smoothing.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stochrank {

double noise_mean(const SmoothingSpec& spec, double relevance) {
  if (spec.family == SmoothingFamily::centered) return 0.0;
  return -spec.mu * relevance;
}

Vector sample_noise(const SmoothingSpec& spec, ConstVectorRef relevance, Rng& rng) {
  if (spec.mu < 0.0 || spec.sigma <= 0.0) {
    throw std::invalid_argument("smoothing: mu must be >= 0 and sigma > 0");
  }
  Vector eps(relevance.size());
  for (Index j = 0; j < relevance.size(); ++j) {
    eps[j] = noise_mean(spec, relevance[j]) + rng.next_normal();
  }
  return eps;
}

double conditional_density(const SmoothingSpec& spec, double relevance, double t) {
  const double d = t - noise_mean(spec, relevance);
  return std::exp(-0.5 * d * d) / std::sqrt(2.0 * std::numbers::pi);
}

McValue mc_smoothed_metric(const MetricSpec& metric, const SmoothingSpec& spec,
                           ConstVectorRef scores, ConstVectorRef relevance,
                           Index draws, Rng& rng) {
  if (draws < 2) throw std::invalid_argument("mc_smoothed_metric: draws < 2");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (Index m = 0; m < draws; ++m) {
    const Vector eps = sample_noise(spec, relevance, rng);
    const double v = eval_metric(metric, scores + spec.sigma * eps, relevance);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / static_cast<double>(draws);
  const double var =
      std::max(0.0, (sum_sq - sum * mean) / static_cast<double>(draws - 1));
  McValue out;
  out.mean = mean;
  out.se = std::sqrt(var / static_cast<double>(draws));
  return out;
}

}  // namespace stochrank
