#pragma once

#include "stochrank/metric.hpp"
#include "stochrank/rng.hpp"
#include "stochrank/types.hpp"

namespace stochrank {

// Gaussian score smoothing: the smoothed metric is E q(z + sigma * eps) with
// eps_j ~ N(mean_j, 1) i.i.d. The relevance-shifted family centers eps_j at
// -mu * r_j, which biases tied blocks toward their worst permutation and
// keeps the smoothed optimum aligned with the discrete one; the centered
// family (mu irrelevant) averages tied blocks instead.
enum class SmoothingFamily { centered, relevance_shifted };

struct SmoothingSpec {
  SmoothingFamily family = SmoothingFamily::relevance_shifted;
  double mu = 1.0;     // shift magnitude; must be >= 0
  double sigma = 1.0;  // noise scale; must be > 0
};

double noise_mean(const SmoothingSpec& spec, double relevance);

// One draw of eps (unit-variance, per-document mean as above).
Vector sample_noise(const SmoothingSpec& spec, ConstVectorRef relevance, Rng& rng);

// Density of eps_j at t.
double conditional_density(const SmoothingSpec& spec, double relevance, double t);

struct McValue {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
};

// Monte-Carlo estimate of the smoothed metric. Test oracle and diagnostics
// only; the training path never averages metric evaluations.
McValue mc_smoothed_metric(const MetricSpec& metric, const SmoothingSpec& spec,
                           ConstVectorRef scores, ConstVectorRef relevance,
                           Index draws, Rng& rng);

}  // namespace stochrank
