#pragma once

#include "stochrank/types.hpp"

namespace stochrank {

// Ranking quality functions. Everything here is quality-sided (higher is
// better); the gradient estimators own the single quality -> loss negation.
enum class MetricKind {
  dcg,     // graded gains, log2 position discount
  ndcg,    // dcg normalized by the ideal ordering
  err,     // cascade model: expected reciprocal rank of first satisfaction
  mrr,     // err with binary labels and no truncation
  dcg_rr,  // fixed document order, inclusion decided by score sign
};

enum class TiePolicy {
  worst,             // equal scores: less relevant first, then lower index
  noise_free_fixed,  // equal scores: lower original index first
};

struct MetricSpec {
  MetricKind kind = MetricKind::ndcg;
  Index truncation = 0;  // top-k cutoff; <= 0 means no cutoff
  TiePolicy tie_policy = TiePolicy::worst;
};

// Per-position weights and per-document gain/discount arrays for the
// product-form family  q = sum_i w[i] * gain[s_i] * prod_{j<i} disc[s_j],
// where s is the permutation that sorts scores descending.
struct GainDiscount {
  Vector weights;    // by rank position; zero past the truncation
  Vector gains;      // by document
  Vector discounts;  // by document; all ones for (N)DCG
  bool constant = false;    // metric does not depend on scores
  double constant_value = 0.0;
};

Index effective_truncation(const MetricSpec& spec, Index n);

// Sorts descending by score. Tie handling is what makes the evaluated value
// the worst (or fixed) one over tied blocks; see TiePolicy.
Permutation worst_argsort(ConstVectorRef scores, ConstVectorRef relevance,
                          TiePolicy policy = TiePolicy::worst);

// Maps labels to gains: identity when every label lies in [0, 1], otherwise
// labels must be integer grades in [0, 4] and map to (2^r - 1) / 2^4.
Vector gain_map(ConstVectorRef relevance);

GainDiscount gmc_params(const MetricSpec& spec, ConstVectorRef relevance);

// Quality value of the metric at the given scores. Throws on labels outside
// the metric's domain (mrr in particular requires binary labels).
double eval_metric(const MetricSpec& spec, ConstVectorRef scores,
                   ConstVectorRef relevance);

// Fixed-order reciprocal-rank metric: documents keep their input order and a
// document takes part iff its score is strictly positive. Ignores truncation
// and tie policy; relevance values are used as-is.
double dcg_rr_eval(ConstVectorRef scores, ConstVectorRef relevance);

}  // namespace stochrank
