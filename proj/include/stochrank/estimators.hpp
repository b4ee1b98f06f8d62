#pragma once

#include "stochrank/metric.hpp"
#include "stochrank/rng.hpp"
#include "stochrank/smoothing.hpp"
#include "stochrank/types.hpp"

namespace stochrank {

// All estimators return the gradient of the smoothed *loss*, where
// loss = -metric. This is the one place quality flips sign; boosting fits
// trees to the negated estimate.
enum class EstimatorKind { ccs, ccs_sfa, reinforce };

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::ccs_sfa;
  SmoothingSpec smoothing;
  double nu = 1e-2;  // scale guard for the score-direction projection
  Index samples_per_estimate = 1;
};

struct GradientEstimate {
  Vector g;
  EstimatorKind kind = EstimatorKind::ccs;
  std::uint64_t stream_key = 0;  // stream the noise came from
};

// z - mean(z): ranking metrics are translation invariant, so gradients are
// estimated on centered scores.
Vector center_scores(ConstVectorRef z);

// Conditional coordinate sampling: one shared noise draw; coordinate j's
// gradient sums, over the other documents' noisy scores b_s, the structural
// metric jump times the conditional noise density at the crossing:
//   g_j = -sigma^{-1} * sum_{s != j} jump_j(b_s) * pdf_j((b_s - z_j) / sigma).
// Positions whose jumps are structurally zero (past the truncation boundary)
// are skipped, giving O((k + log n) * n) per draw.
GradientEstimate ccs_gradient(const MetricSpec& metric, const SmoothingSpec& smoothing,
                              ConstVectorRef z, ConstVectorRef relevance,
                              std::uint64_t stream_key);

// Removes the component along the current score direction, with a small-norm
// guard: g - <g, u> u for u = z / (||z|| + nu). Exactly orthogonalizes at
// nu = 0; never lengthens g; approaches the identity as nu grows.
Vector sfa_project(ConstVectorRef g, ConstVectorRef z, double nu);

// Score-function baseline estimator with centered noise:
//   sigma^{-1} * (loss(z + sigma * eps) - loss(z)) * eps,  eps ~ N(0, I).
GradientEstimate reinforce_gradient(const MetricSpec& metric, ConstVectorRef z,
                                    ConstVectorRef relevance, double sigma,
                                    std::uint64_t stream_key);

// Dispatch on config: averages samples_per_estimate independent draws
// (sub-streams of stream_key), then applies the projection for ccs_sfa.
GradientEstimate estimate_gradient(const EstimatorConfig& config,
                                   const MetricSpec& metric, ConstVectorRef z,
                                   ConstVectorRef relevance,
                                   std::uint64_t stream_key);

}  // namespace stochrank
